// SPDX-License-Identifier: MIT
// Command-line front end over the deciders, constructors and validators.
#include "cli.hh"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <hornlog/decide.hh>
#include <hornlog/fixtures.hh>
#include <hornlog/games.hh>
#include <hornlog/gf_games.hh>
#include <hornlog/hardness.hh>
#include <hornlog/tgd.hh>

namespace hornlog
{
  namespace
  {
    using json = nlohmann::json;
    namespace fs = std::filesystem;

    enum exit_code
    {
      ok_true = 0, ok_false = 1, usage = 2, unknown = 3
    };

    struct options
    {
      std::vector<std::string> files;
      std::vector<std::string> x;      // element names or tuples
      std::vector<std::string> neg;
      std::string db, rules_text;
      std::string b, root, concept_text, tbox_file, gf_text, at, query, word;
      std::string examples_dir;
      int depth = -1;
      std::size_t cap = 0;
      bool as_json = false, witness = false, global = false, nabla = false;
      bool plain = false, guarded = false, equivalence = false;
    };

    /// Verdict plus extra fields; printed as text or as one JSON object.
    struct report
    {
      enum class value
      {
        yes, no, unknown
      } verdict = value::yes;
      json extra = json::object();
      std::vector<std::string> lines;
      game_stats stats;

      void set(bool v) { verdict = v ? value::yes : value::no; }
    };

    class timer
    {
    public:
      double
      millis() const
      {
        return std::chrono::duration<double, std::milli>(
                 std::chrono::steady_clock::now() - start_)
          .count();
      }

    private:
      std::chrono::steady_clock::time_point start_
        = std::chrono::steady_clock::now();
    };

    std::string
    read_file(const std::string& path)
    {
      std::ifstream in(path);
      if (!in)
        throw error("cannot read " + path);
      std::ostringstream ss;
      ss << in.rdbuf();
      return ss.str();
    }

    void
    write_file(const fs::path& path, const std::string& text)
    {
      std::ofstream outf(path);
      if (!outf)
        throw error("cannot write " + path.string());
      outf << text << "\n";
    }

    structure
    load(const std::string& path)
    {
      return parse_structure(read_file(path));
    }

    /// Inline JSON when the argument starts with '[' or '{', a file
    /// otherwise.
    std::string
    text_or_file(const std::string& arg)
    {
      auto p = arg.find_first_not_of(" \t\n");
      if (p != std::string::npos && (arg[p] == '[' || arg[p] == '{'))
        return arg;
      return read_file(arg);
    }

    std::vector<std::string>
    split(const std::string& s, char sep)
    {
      std::vector<std::string> out;
      std::string cur;
      std::istringstream in(s);
      while (std::getline(in, cur, sep))
        out.push_back(cur);
      return out;
    }

    elem_set
    element_set(const structure& s, const std::vector<std::string>& names)
    {
      if (names.empty())
        throw error("the element set is empty");
      return s.set_of(names);
    }

    int
    single(const structure& s, const std::vector<std::string>& names)
    {
      if (names.size() != 1)
        throw error("expected exactly one element, got "
                    + std::to_string(names.size()));
      return s.at(names[0]);
    }

    tuple_t
    tuple_of(const structure& s, const std::string& text)
    {
      tuple_t t;
      for (auto& n : split(text, ','))
        t.push_back(s.at(n));
      return t;
    }

    atm_word
    word_of(const std::string& text)
    {
      if (text.find(',') != std::string::npos)
        return split(text, ',');
      atm_word w;
      for (char c : text)
        w.push_back(std::string(1, c));
      return w;
    }

    json
    stats_json(const game_stats& s)
    {
      return {{"positions", s.positions}, {"rounds", s.rounds},
              {"millis", s.millis}};
    }

    int
    emit(const report& r, const options& o, std::ostream& out)
    {
      if (o.as_json)
        {
          json j = r.extra;
          if (r.verdict == report::value::unknown)
            j["verdict"] = "unknown";
          else
            j["verdict"] = r.verdict == report::value::yes;
          j["stats"] = stats_json(r.stats);
          out << j.dump(2) << "\n";
        }
      else
        {
          const char* v = r.verdict == report::value::yes  ? "true"
                          : r.verdict == report::value::no ? "false"
                                                           : "unknown";
          out << "verdict: " << v << "\n";
          for (auto& l : r.lines)
            out << l << "\n";
        }
      switch (r.verdict)
        {
        case report::value::yes:
          return ok_true;
        case report::value::no:
          return ok_false;
        case report::value::unknown:
          break;
        }
      return unknown;
    }

    /// Constructor output: the artifact itself, or wrapped with --json.
    int
    emit_artifact(const std::string& artifact, bool is_json, double millis,
                  const options& o, std::ostream& out)
    {
      if (!o.as_json)
        {
          out << artifact << "\n";
          return ok_true;
        }
      json j;
      j["verdict"] = true;
      j["result"] = is_json ? json::parse(artifact) : json(artifact);
      game_stats st;
      st.millis = millis;
      j["stats"] = stats_json(st);
      out << j.dump(2) << "\n";
      return ok_true;
    }

    std::string
    names_line(const std::vector<std::string>& names)
    {
      std::string s;
      for (std::size_t i = 0; i < names.size(); ++i)
        s += (i ? ", " : "") + names[i];
      return "{" + s + "}";
    }

    vocabulary
    tbox_vocab(const tbox& t)
    {
      vocabulary v;
      for (auto& inc : t)
        {
          v.merge(concept_vocab(inc.lhs));
          v.merge(concept_vocab(inc.rhs));
        }
      return v;
    }

    // -------------------------------------------------------------------
    // Verbs

    int
    run_eval(const options& o, std::ostream& out)
    {
      timer t;
      auto s = load(o.files.at(0));
      report r;
      int given = !o.concept_text.empty() + !o.tbox_file.empty() + !o.gf_text.empty();
      if (given != 1)
        throw error("eval needs exactly one of --concept, --tbox, --gf");
      if (!o.concept_text.empty())
        {
          auto c = parse_concept(o.concept_text);
          auto ext = eval_widened(c, s);
          auto names = s.names_of(ext);
          r.extra["answers"] = names;
          if (!o.at.empty())
            r.set(ext.test(s.at(o.at)));
          r.lines.push_back("extension: " + names_line(names));
        }
      else if (!o.tbox_file.empty())
        {
          auto tb = parse_tbox(read_file(o.tbox_file));
          auto w = widen(s, tbox_vocab(tb));
          r.set(eval_tbox(tb, w));
          auto bad = w.names_of(tbox_violations(tb, w));
          r.extra["violations"] = bad;
          if (!bad.empty())
            r.lines.push_back("violations: " + names_line(bad));
        }
      else
        {
          auto f = parse_gf(o.gf_text);
          auto w = widen(s, gf_vocab(f));
          auto vars = free_vars(f);
          if (vars.empty())
            r.set(eval_gf(f, w));
          else
            {
              json rows = json::array();
              for (auto& tup : gf_answers(f, w))
                {
                  std::vector<std::string> names;
                  for (int e : tup)
                    names.push_back(w.name(e));
                  rows.push_back(names);
                  r.lines.push_back("answer: " + names_line(names));
                }
              r.extra["free"] = vars;
              r.extra["answers"] = rows;
              if (!o.at.empty())
                {
                  auto names = split(o.at, ',');
                  if (names.size() != vars.size())
                    throw error("--at needs one element per free variable");
                  assignment env;
                  for (std::size_t i = 0; i < vars.size(); ++i)
                    env[vars[i]] = w.at(names[i]);
                  r.set(eval_gf(f, w, env));
                }
            }
        }
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_sim(const options& o, std::ostream& out, sim_kind k)
    {
      timer t;
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      int x = single(a, o.x);
      int y = b.at(o.b);
      auto rel = greatest_sim(k, a, b, o.depth);
      report r;
      r.set(rel.holds(x, y));
      r.stats.rounds = rel.rounds;
      r.stats.millis = t.millis();
      if (o.witness && rel.holds(x, y))
        {
          json pairs = json::array();
          for (std::size_t i = 0; i < a.size(); ++i)
            for_each_elem(rel.rows[i], [&](int j) {
              pairs.push_back({a.name(static_cast<int>(i)), b.name(j)});
            });
          r.extra["witness"] = pairs;
        }
      return emit(r, o, out);
    }

    int
    run_hornsim(const options& o, std::ostream& out)
    {
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      horn_options ho;
      ho.ell = o.depth;
      ho.nabla = o.nabla;
      if (o.cap)
        ho.position_cap = o.cap;
      game_verdict v;
      if (o.global)
        v = global_hornsim(a, b, ho);
      else
        v = hornsim(a, element_set(a, o.x), b, b.at(o.b), ho);
      report r;
      r.set(v.holds);
      r.stats = v.stats;
      if (!v.holds)
        {
          r.extra["trace"] = v.trace;
          r.lines = v.trace;
        }
      if (o.witness && v.witness)
        {
          r.extra["witness"] = json::parse(relation_to_json(*v.witness, a, b));
          r.lines.push_back("witness: " + relation_to_json(*v.witness, a, b));
        }
      return emit(r, o, out);
    }

    int
    run_ghsim(const options& o, std::ostream& out)
    {
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      ghsim_options go;
      go.ell = o.depth;
      if (o.cap)
        go.position_cap = o.cap;
      ghsim_verdict v;
      if (o.global)
        v = global_ghsim(a, b, go);
      else
        {
          std::vector<tuple_t> xs;
          for (auto& t : o.x)
            xs.push_back(tuple_of(a, t));
          if (xs.empty())
            throw error("ghsim needs --X");
          v = ghsim(a, xs, b, tuple_of(b, o.b), go);
        }
      report r;
      r.set(v.holds);
      r.stats = v.stats;
      if (!o.global)
        {
          json rows = json::array();
          for (auto& t : v.filtered)
            {
              std::vector<std::string> names;
              for (int e : t)
                names.push_back(a.name(e));
              rows.push_back(names);
            }
          r.extra["filtered"] = rows;
        }
      if (!v.note.empty())
        {
          r.extra["note"] = v.note;
          r.lines.push_back("note: " + v.note);
        }
      return emit(r, o, out);
    }

    void
    add_separator(report& r, const separator_result& sep)
    {
      if (!sep.concept_value)
        return;
      r.extra["separator"] = to_string(sep.concept_value);
      r.extra["separator_verified"] = sep.verified;
      r.lines.push_back("separator: " + to_string(sep.concept_value));
    }

    int
    run_entail(const options& o, std::ostream& out)
    {
      timer t;
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      auto x = element_set(a, o.x);
      int y = b.at(o.b);
      report r;
      bool v = entails_set(a, x, b, y, o.depth);
      r.set(v);
      if (!v && o.witness)
        add_separator(r, synthesize_separator(a, x, b, y, o.depth));
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_equiv(const options& o, std::ostream& out)
    {
      timer t;
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      int x = single(a, o.x);
      int y = b.at(o.b);
      report r;
      bool fw = entails(a, x, b, y, o.depth);
      bool bw = entails(b, y, a, x, o.depth);
      r.set(fw && bw);
      r.extra["forward"] = fw;
      r.extra["backward"] = bw;
      if (o.witness && !fw)
        add_separator(r, synthesize_separator(a, a.set_of({a.name(x)}), b, y,
                                              o.depth));
      else if (o.witness && !bw)
        add_separator(r, synthesize_separator(b, b.set_of({b.name(y)}), a, x,
                                              o.depth));
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_tbox_entail(const options& o, std::ostream& out)
    {
      timer t;
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      report r;
      r.set(o.equivalence ? tbox_equiv(a, b, o.depth) : tbox_entails(a, b, o.depth));
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_cbe(const options& o, std::ostream& out)
    {
      timer t;
      std::string text = read_file(o.files.at(0));
      cbe_instance inst = o.x.empty() ? parse_cbe(text)
                                      : make_cbe(parse_structure(text), o.x, o.neg);
      report r;
      bool v = cbe(inst, o.depth);
      r.set(v);
      if (v && o.witness)
        add_separator(r, cbe_separator(inst, o.depth));
      if (!v)
        r.lines.push_back("no separator exists");
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_separate(const options& o, std::ostream& out)
    {
      timer t;
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      auto sep = synthesize_separator(a, element_set(a, o.x), b, b.at(o.b),
                                      o.depth);
      report r;
      r.set(static_cast<bool>(sep.concept_value));
      if (sep.concept_value)
        add_separator(r, sep);
      else
        r.lines.push_back("no separator exists");
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_horn_expressible(const options& o, std::ostream& out)
    {
      timer t;
      if (o.depth < 0)
        throw error("horn-expressible needs --depth");
      expressible_options eo;
      if (o.cap)
        eo.candidate_cap = o.cap;
      auto res = horn_expressible(parse_concept(o.concept_text), o.depth, eo);
      report r;
      switch (res.verdict)
        {
        case expressible::yes:
          r.verdict = report::value::yes;
          r.extra["horn"] = to_string(res.horn);
          r.lines.push_back("equivalent: " + to_string(res.horn));
          break;
        case expressible::no:
          r.verdict = report::value::no;
          r.extra["witness"] = {{"A", json::parse(serialize_structure(res.a))},
                                {"X", res.a.names_of(res.x)},
                                {"B", json::parse(serialize_structure(res.b))},
                                {"b", res.b.name(res.y)}};
          break;
        case expressible::unknown:
          r.verdict = report::value::unknown;
          break;
        }
      if (!res.note.empty())
        {
          r.extra["note"] = res.note;
          r.lines.push_back("note: " + res.note);
        }
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_translate_tgd(const options& o, std::ostream& out)
    {
      timer t;
      std::string text = !o.gf_text.empty() ? o.gf_text : read_file(o.files.at(0));
      auto sigma = horngf_to_tgds(parse_gf(text));
      return emit_artifact(tgds_to_json(sigma), true, t.millis(), o, out);
    }

    int
    run_translate_horngf(const options& o, std::ostream& out)
    {
      timer t;
      auto f = tgds_to_horngf(parse_tgds(text_or_file(o.rules_text)));
      return emit_artifact(to_string(f), false, t.millis(), o, out);
    }

    int
    run_chase(const options& o, std::ostream& out)
    {
      timer t;
      auto db = load(o.db);
      auto sigma = parse_tgds(text_or_file(o.rules_text));
      auto c = o.cap ? chase(db, sigma, o.cap) : chase(db, sigma);
      report r;
      r.stats.positions = c.s.size();
      r.stats.rounds = static_cast<int>(c.steps);
      switch (c.state)
        {
        case chase_result::status::model:
          r.verdict = report::value::yes;
          break;
        case chase_result::status::inconsistent:
          r.verdict = report::value::no;
          r.lines.push_back("inconsistent");
          break;
        case chase_result::status::cap_exceeded:
          r.verdict = report::value::unknown;
          r.lines.push_back("step cap reached");
          break;
        }
      r.extra["nulls"] = c.nulls;
      if (c.state == chase_result::status::model)
        {
          std::string s = serialize_structure(c.s);
          r.extra["result"] = json::parse(s);
          r.lines.push_back(s);
        }
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_certain(const options& o, std::ostream& out)
    {
      timer t;
      auto db = load(o.db);
      auto sigma = parse_tgds(text_or_file(o.rules_text));
      if (o.query.empty())
        throw error("certain needs --query");
      auto q = parse_cq(text_or_file(o.query));
      auto res = o.cap ? certain_answers(q, db, sigma, o.cap)
                       : certain_answers(q, db, sigma);
      report r;
      switch (res.state)
        {
        case certain_result::status::answers:
          r.verdict = report::value::yes;
          r.extra["answers"] = res.tuples;
          for (auto& tup : res.tuples)
            r.lines.push_back("answer: " + names_line(tup));
          break;
        case certain_result::status::inconsistent:
          r.verdict = report::value::no;
          r.lines.push_back("inconsistent");
          break;
        case certain_result::status::unknown:
          r.verdict = report::value::unknown;
          r.lines.push_back("step cap reached");
          break;
        }
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_product(const options& o, std::ostream& out)
    {
      timer t;
      std::vector<structure> parts;
      for (auto& f : o.files)
        parts.push_back(load(f));
      auto p = o.cap ? product(parts, o.cap) : product(parts);
      return emit_artifact(serialize_structure(p.s), true, t.millis(), o, out);
    }

    int
    run_union(const options& o, std::ostream& out)
    {
      timer t;
      std::vector<structure> parts;
      for (auto& f : o.files)
        parts.push_back(load(f));
      auto u = disjoint_union(parts, o.plain);
      return emit_artifact(serialize_structure(u.s), true, t.millis(), o, out);
    }

    int
    run_unravel(const options& o, std::ostream& out)
    {
      timer t;
      auto s = load(o.files.at(0));
      if (o.depth < 0)
        throw error("unravel needs --depth");
      auto u = unravel(s, s.at(o.root), o.depth);
      return emit_artifact(serialize_structure(u.s), true, t.millis(), o, out);
    }

    int
    run_gen_hardness(const options& o, std::ostream& out)
    {
      timer t;
      auto p = atm_from_json(read_file(o.files.at(0)));
      if (!o.word.empty())
        p.word = word_of(o.word);
      auto inst = o.global ? build_global_instance(p.machine, p.word)
                           : build_hornsim_instance(p.machine, p.word);
      json j{{"A", json::parse(serialize_structure(inst.a))},
             {"B", json::parse(serialize_structure(inst.b))},
             {"X", inst.a.names_of(inst.x)},
             {"b", inst.b.name(inst.b_hat)}};
      return emit_artifact(j.dump(2), true, t.millis(), o, out);
    }

    int
    run_check_relation(const options& o, std::ostream& out)
    {
      timer t;
      auto a = load(o.files.at(0));
      auto b = load(o.files.at(1));
      std::string text = text_or_file(o.files.at(2));
      check_result res = o.guarded
                           ? check_ghsim_relation(links_from_json(text, a, b), a, b)
                           : check_horn_relation(relation_from_json(text, a, b),
                                                 a, b, o.nabla);
      report r;
      r.set(res.ok);
      if (!res.ok)
        {
          r.extra["violation"] = res.violation;
          r.lines.push_back("violation: " + res.violation);
        }
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    run_atm_accepts(const options& o, std::ostream& out)
    {
      timer t;
      auto p = atm_from_json(read_file(o.files.at(0)));
      if (!o.word.empty())
        p.word = word_of(o.word);
      auto res = o.cap ? atm_run(p.machine, p.word, o.cap)
                       : atm_run(p.machine, p.word);
      report r;
      r.set(res.accepts);
      r.stats.positions = res.configurations;
      r.stats.millis = t.millis();
      return emit(r, o, out);
    }

    int
    write_examples(const options& o, std::ostream& out)
    {
      fs::path dir(o.examples_dir);
      fs::create_directories(dir);
      auto a0 = fixtures::a0(), b0 = fixtures::b0();
      auto a1 = fixtures::a1(), b1 = fixtures::b1();
      auto ga = fixtures::ex_guard_a(), gb = fixtures::ex_guard_b();
      std::vector<std::pair<std::string, std::string>> files{
        {"a0.json", serialize_structure(a0)},
        {"b0.json", serialize_structure(b0)},
        {"a0_b0_union.json",
         serialize_structure(disjoint_union({a0, b0}, true).s)},
        {"a0_b0_relation.json",
         relation_to_json(fixtures::a0_b0_relation(), a0, b0)},
        {"a1.json", serialize_structure(a1)},
        {"b1.json", serialize_structure(b1)},
        {"a1_b1_relation.json",
         relation_to_json(fixtures::a1_b1_relation(), a1, b1)},
        {"c_nabla.txt", to_string(fixtures::c_nabla_example())},
        {"t_horn.txt", to_string(fixtures::t_horn())},
        {"guard_a.json", serialize_structure(ga)},
        {"guard_b.json", serialize_structure(gb)},
        {"guard_links.json", links_to_json(fixtures::ex_guard_links(), ga, gb)},
        {"t_guard.txt", to_string(fixtures::t_guard())}};
      for (auto& p : atm_zoo())
        files.push_back({"atm_" + p.name + ".json", atm_to_json(p)});
      for (auto& [name, text] : files)
        {
          write_file(dir / name, text);
          out << (dir / name).string() << "\n";
        }
      return ok_true;
    }
  }

  int
  run_cli(int argc, const char* const* argv, std::ostream& out,
          std::ostream& err)
  {
    CLI::App app{"Model comparison games for hornALC and hornGF"};
    app.name("hornlog");
    options o;
    app.add_option("--examples", o.examples_dir,
                   "Write the bundled example structures into a directory");

    auto common = [&](CLI::App* sc) {
      sc->add_option("--depth", o.depth, "Number of rounds (default unbounded)");
      sc->add_option("--cap", o.cap, "Override the size cap of the verb");
      sc->add_flag("--json", o.as_json, "Print one JSON object");
      sc->add_flag("--witness", o.witness, "Include a witness or separator");
    };
    auto two = [&](CLI::App* sc) {
      sc->add_option("files", o.files, "Structure files A and B")
        ->required()->expected(2);
    };
    std::vector<std::pair<CLI::App*, std::function<int()>>> verbs;
    auto verb = [&](const char* name, const char* help,
                    std::function<int()> fn) {
      auto* sc = app.add_subcommand(name, help);
      common(sc);
      verbs.push_back({sc, std::move(fn)});
      return sc;
    };

    auto* ev = verb("eval", "Evaluate a concept, TBox or GF formula",
                    [&] { return run_eval(o, out); });
    ev->add_option("file", o.files, "Structure file")->required()->expected(1);
    ev->add_option("--concept", o.concept_text, "Concept text");
    ev->add_option("--tbox", o.tbox_file, "TBox file");
    ev->add_option("--gf", o.gf_text, "GF formula text");
    ev->add_option("--at", o.at, "Element (or tuple a,b) to test");

    for (auto [name, kind] : {std::pair{"sim", sim_kind::simulation},
                              std::pair{"bisim", sim_kind::bisimulation}})
      {
        auto k = kind;
        auto* sc = verb(name, "Simulation or bisimulation between two points",
                        [&, k] { return run_sim(o, out, k); });
        two(sc);
        sc->add_option("--X", o.x, "Element of A")->required();
        sc->add_option("--b", o.b, "Element of B")->required();
      }

    auto* hs = verb("hornsim", "Horn simulation game",
                    [&] { return run_hornsim(o, out); });
    two(hs);
    hs->add_option("--X", o.x, "Elements of A")->delimiter(',');
    hs->add_option("--b", o.b, "Element of B");
    hs->add_flag("--global", o.global, "Every element of B must be matched");
    hs->add_flag("--nabla", o.nabla, "Add the ELU-nabla condition");

    auto* gs = verb("ghsim", "Guarded Horn simulation game",
                    [&] { return run_ghsim(o, out); });
    two(gs);
    gs->add_option("--X", o.x, "Guarded tuple of A (repeatable), names a,b");
    gs->add_option("--b", o.b, "Guarded tuple of B, names a,b");
    gs->add_flag("--global", o.global, "Every guarded set of B is a target");

    auto* en = verb("entail", "hornALC entailment from a set of A to b",
                    [&] { return run_entail(o, out); });
    two(en);
    en->add_option("--X", o.x, "Elements of A")->delimiter(',')->required();
    en->add_option("--b", o.b, "Element of B")->required();

    auto* eq = verb("equiv", "hornALC equivalence of two points",
                    [&] { return run_equiv(o, out); });
    two(eq);
    eq->add_option("--X", o.x, "Element of A")->required();
    eq->add_option("--b", o.b, "Element of B")->required();

    auto* te = verb("tbox-entail", "Every hornALC TBox true in A holds in B",
                    [&] { return run_tbox_entail(o, out); });
    two(te);
    te->add_flag("--equiv", o.equivalence, "Decide TBox equivalence instead");

    auto* cb = verb("cbe", "Concept learning by example",
                    [&] { return run_cbe(o, out); });
    cb->add_option("file", o.files, "Structure or CBE instance file")
      ->required()->expected(1);
    cb->add_option("--P", o.x, "Positive examples")->delimiter(',');
    cb->add_option("--b-neg,--N", o.neg, "Negative examples")->delimiter(',');

    auto* sp = verb("separate", "Synthesize a separating hornALC concept",
                    [&] { return run_separate(o, out); });
    two(sp);
    sp->add_option("--X", o.x, "Elements of A")->delimiter(',')->required();
    sp->add_option("--b", o.b, "Element of B")->required();

    auto* he = verb("horn-expressible",
                    "Is an ALC concept equivalent to a hornALC concept",
                    [&] { return run_horn_expressible(o, out); });
    he->add_option("--concept", o.concept_text, "Concept text")->required();

    auto* tt = verb("translate-tgd", "hornGF sentence to guarded tgds",
                    [&] { return run_translate_tgd(o, out); });
    tt->add_option("file", o.files, "File with the sentence");
    tt->add_option("--gf", o.gf_text, "Sentence text");

    auto* th = verb("translate-horngf", "Guarded tgds to a hornGF sentence",
                    [&] { return run_translate_horngf(o, out); });
    th->add_option("rules", o.rules_text, "Rule file or inline JSON")
      ->required()->allow_extra_args(false);

    auto* ch = verb("chase", "Chase a database with guarded tgds",
                    [&] { return run_chase(o, out); });
    ch->add_option("database", o.db, "Database file")->required();
    ch->add_option("rules", o.rules_text, "Rule file or inline JSON")
      ->required();

    auto* ce = verb("certain", "Certain answers of a conjunctive query",
                    [&] { return run_certain(o, out); });
    ce->add_option("database", o.db, "Database file")->required();
    ce->add_option("rules", o.rules_text, "Rule file or inline JSON")
      ->required();
    ce->add_option("--query", o.query, "Query file or inline JSON")->required();

    auto* pr = verb("product", "Direct product of structures",
                    [&] { return run_product(o, out); });
    pr->add_option("files", o.files, "Structure files")->required();

    auto* un = verb("union", "Disjoint union of structures",
                    [&] { return run_union(o, out); });
    un->add_option("files", o.files, "Structure files")->required();
    un->add_flag("--plain", o.plain, "Keep element names");

    auto* ur = verb("unravel", "Tree unravelling from a root",
                    [&] { return run_unravel(o, out); });
    ur->add_option("file", o.files, "Structure file")->required()->expected(1);
    ur->add_option("--root", o.root, "Root element")->required();

    auto* gh = verb("gen-hardness", "HornSim instance for a machine and word",
                    [&] { return run_gen_hardness(o, out); });
    gh->add_option("file", o.files, "Machine file")->required()->expected(1);
    gh->add_option("--word", o.word, "Input word (overrides the file)");
    gh->add_flag("--global", o.global, "Add the S* marking");

    auto* cr = verb("check-relation", "Check a Horn or guarded Horn relation",
                    [&] { return run_check_relation(o, out); });
    cr->add_option("files", o.files, "A, B and the relation")
      ->required()->expected(3);
    cr->add_flag("--guarded", o.guarded, "Relation is a list of links");
    cr->add_flag("--nabla", o.nabla, "Add the ELU-nabla condition");

    auto* aa = verb("atm-accepts", "Run the acceptance oracle of a machine",
                    [&] { return run_atm_accepts(o, out); });
    aa->add_option("file", o.files, "Machine file")->required()->expected(1);
    aa->add_option("--word", o.word, "Input word (overrides the file)");

    try
      {
        app.parse(argc, argv);
      }
    catch (const CLI::CallForHelp&)
      {
        out << app.help();
        return ok_true;
      }
    catch (const CLI::CallForAllHelp&)
      {
        out << app.help("", CLI::AppFormatMode::All);
        return ok_true;
      }
    catch (const CLI::ParseError& e)
      {
        err << "hornlog: " << e.what() << "\n";
        return usage;
      }

    try
      {
        if (!o.examples_dir.empty())
          return write_examples(o, out);
        for (auto& [sc, fn] : verbs)
          if (sc->parsed())
            return fn();
        err << app.help();
        return usage;
      }
    catch (const cap_exceeded& e)
      {
        err << "hornlog: cap exceeded: " << e.what() << "\n";
        return unknown;
      }
    catch (const error& e)
      {
        err << "hornlog: " << e.what() << "\n";
        return usage;
      }
    catch (const json::exception& e)
      {
        err << "hornlog: " << e.what() << "\n";
        return usage;
      }
    catch (const fs::filesystem_error& e)
      {
        err << "hornlog: " << e.what() << "\n";
        return usage;
      }
  }
}
