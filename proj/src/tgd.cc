// SPDX-License-Identifier: MIT
// Guarded tgds, translations to and from hornGF, the chase and CQ answering.
#include <hornlog/tgd.hh>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hornlog
{
  namespace
  {
    /// Built-in predicate holding at every element; stands for the
    /// equality guard x = x.
    const std::string dom_pred = "__dom";
    const std::string eq_pred = "__E";

    std::vector<std::string>
    vars_of(const std::vector<gf_atom>& atoms)
    {
      std::vector<std::string> out;
      for (auto& a : atoms)
        for (auto& v : a.args)
          if (std::find(out.begin(), out.end(), v) == out.end())
            out.push_back(v);
      return out;
    }

    bool
    contains_all(const gf_atom& a, const std::vector<std::string>& vs)
    {
      for (auto& v : vs)
        if (std::find(a.args.begin(), a.args.end(), v) == a.args.end())
          return false;
      return true;
    }

    std::string
    trim(const std::string& s)
    {
      auto b = s.find_first_not_of(" \t\n");
      auto e = s.find_last_not_of(" \t\n");
      return b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
  }

  int
  tgd_guard(const tgd& t)
  {
    auto vs = vars_of(t.body);
    for (std::size_t i = 0; i < t.body.size(); ++i)
      if (contains_all(t.body[i], vs))
        return static_cast<int>(i);
    return -1;
  }

  bool
  is_guarded(const tgd& t)
  {
    return t.body.empty() || tgd_guard(t) >= 0;
  }

  void
  validate(const tgd& t)
  {
    auto bv = vars_of(t.body);
    for (auto& z : t.exist)
      if (std::find(bv.begin(), bv.end(), z) != bv.end())
        throw error("existential variable " + z + " also occurs in the body");
    for (auto& v : vars_of(t.head))
      if (std::find(bv.begin(), bv.end(), v) == bv.end()
          && std::find(t.exist.begin(), t.exist.end(), v) == t.exist.end())
        throw error("head variable " + v + " is neither in the body nor "
                    "existential");
  }

  gf_atom
  parse_atom(const std::string& text)
  {
    std::string s = trim(text);
    auto open = s.find('(');
    if (open == std::string::npos)
      {
        auto eq = s.find('=');
        if (eq == std::string::npos)
          throw parse_error("atom expected", 0);
        auto l = trim(s.substr(0, eq)), r = trim(s.substr(eq + 1));
        if (l.empty() || r.empty())
          throw parse_error("variable expected", eq);
        return {"=", {l, r}};
      }
    if (s.back() != ')')
      throw parse_error("')' expected", s.size());
    gf_atom a{trim(s.substr(0, open)), {}};
    if (a.pred.empty())
      throw parse_error("predicate expected", 0);
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    std::stringstream ss(inner);
    std::string v;
    while (std::getline(ss, v, ','))
      {
        v = trim(v);
        if (v.empty())
          throw parse_error("variable expected", open);
        a.args.push_back(v);
      }
    return a;
  }

  std::string
  to_string(const gf_atom& a)
  {
    if (a.pred == "=")
      return a.args[0] + "=" + a.args[1];
    std::string s = a.pred + "(";
    for (std::size_t i = 0; i < a.args.size(); ++i)
      s += (i ? "," : "") + a.args[i];
    return s + ")";
  }

  std::string
  to_string(const tgd& t)
  {
    std::string s;
    if (t.body.empty())
      s = "top";
    for (std::size_t i = 0; i < t.body.size(); ++i)
      s += (i ? " & " : "") + to_string(t.body[i]);
    s += " -> ";
    if (!t.exist.empty())
      {
        s += "exists";
        for (auto& z : t.exist)
          s += " " + z;
        s += " . ";
      }
    if (t.head.empty())
      s += "bot";
    for (std::size_t i = 0; i < t.head.size(); ++i)
      s += (i ? " & " : "") + to_string(t.head[i]);
    return s;
  }

  std::vector<tgd>
  parse_tgds(const std::string& text)
  {
    nlohmann::json j;
    try
      {
        j = nlohmann::json::parse(text);
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed tgd JSON: ") + e.what());
      }
    if (j.is_object())
      j = nlohmann::json::array({j});
    if (!j.is_array())
      throw error("tgd JSON must be a list of rules");
    std::vector<tgd> out;
    for (auto& r : j)
      {
        if (!r.is_object() || !r.contains("body") || !r.contains("head"))
          throw error("each rule needs body and head");
        tgd t;
        try
          {
            for (auto& a : r["body"])
              t.body.push_back(parse_atom(a.get<std::string>()));
            for (auto& a : r["head"])
              t.head.push_back(parse_atom(a.get<std::string>()));
            if (r.contains("exist"))
              t.exist = r["exist"].get<std::vector<std::string>>();
          }
        catch (const nlohmann::json::exception& e)
          {
            throw error(std::string("malformed tgd JSON: ") + e.what());
          }
        validate(t);
        out.push_back(std::move(t));
      }
    return out;
  }

  std::string
  tgds_to_json(const std::vector<tgd>& sigma)
  {
    nlohmann::json j = nlohmann::json::array();
    for (auto& t : sigma)
      {
        nlohmann::json r;
        r["body"] = nlohmann::json::array();
        r["head"] = nlohmann::json::array();
        for (auto& a : t.body)
          r["body"].push_back(to_string(a));
        for (auto& a : t.head)
          r["head"].push_back(to_string(a));
        r["exist"] = t.exist;
        j.push_back(r);
      }
    return j.dump(2);
  }

  vocabulary
  tgd_vocab(const std::vector<tgd>& sigma)
  {
    vocabulary v;
    auto add = [&](const gf_atom& a) {
      if (a.pred == "=" || a.pred == dom_pred)
        return;
      int k = static_cast<int>(a.args.size());
      if (v.has(a.pred) && v.arity.at(a.pred) != k)
        throw error("predicate " + a.pred + " used with two arities");
      v.add(a.pred, k);
    };
    for (auto& t : sigma)
      {
        for (auto& a : t.body)
          add(a);
        for (auto& a : t.head)
          add(a);
      }
    return v;
  }

  // ---------------------------------------------------------------------
  // hornGF to guarded tgds

  namespace
  {
    class tgd_builder
    {
    public:
      std::vector<tgd>
      run(const gf_ptr& f)
      {
        tgd top;
        add_head(top, f);
        if (!top.head.empty() || f->kind == gkind::bot)
          rules_.push_back(top);
        emit_horn(f, nullptr);
        return rules_;
      }

    private:
      /// Name of \a f inside rules; empty for top.
      std::optional<gf_atom>
      ref(const gf_ptr& f)
      {
        switch (f->kind)
          {
          case gkind::top:
            return std::nullopt;
          case gkind::eq:
          case gkind::atom:
            return f->atom;
          case gkind::bot:
            throw error("bot cannot occur in a rule body");
          default:
            {
              auto it = names_.find(f.get());
              if (it != names_.end())
                return it->second;
              gf_atom a{"__sub/" + std::to_string(++sub_), free_vars(f)};
              names_.emplace(f.get(), a);
              return a;
            }
          }
      }

      static gf_atom
      guard_atom(const gf_atom& g)
      {
        if (g.pred == "=" && g.args[0] == g.args[1])
          return {dom_pred, {g.args[0]}};
        return g;
      }

      void
      add_body(tgd& t, const gf_ptr& f)
      {
        if (auto a = ref(f))
          t.body.push_back(*a);
      }

      /// Sets the head of \a t to \a f; returns false for top.
      bool
      add_head(tgd& t, const gf_ptr& f)
      {
        if (f->kind == gkind::top)
          return false;
        if (f->kind == gkind::bot)
          return true;
        t.head.push_back(*ref(f));
        return true;
      }

      void
      push(tgd t, const gf_ptr& head)
      {
        if (add_head(t, head))
          rules_.push_back(std::move(t));
      }

      void
      emit_horn(const gf_ptr& f, const gf_atom* guard)
      {
        switch (f->kind)
          {
          case gkind::conj:
            for (auto& k : f->kids)
              {
                tgd t;
                add_body(t, f);
                push(t, k);
                emit_horn(k, guard);
              }
            break;
          case gkind::exists:
            {
              auto xs = free_vars(f);
              gf_atom aux{"__aux/" + std::to_string(++aux_), xs};
              for (auto& y : f->bound)
                aux.args.push_back(y);
              tgd intro;
              add_body(intro, f);
              intro.exist = f->bound;
              intro.head.push_back(aux);
              rules_.push_back(intro);
              gf_atom g = guard_atom(f->atom);
              if (g.pred != dom_pred)
                rules_.push_back({{aux}, {g}, {}});
              push({{aux}, {}, {}}, f->kids[0]);
              emit_horn(f->kids[0], &f->atom);
              break;
            }
          case gkind::forall:
            {
              tgd t;
              t.body.push_back(guard_atom(f->atom));
              add_body(t, f);
              push(t, f->kids[0]);
              emit_horn(f->kids[0], &f->atom);
              break;
            }
          case gkind::impl:
            {
              tgd t;
              add_body(t, f);
              add_body(t, f->kids[0]);
              push(t, f->kids[1]);
              emit_lambda(f->kids[0], guard);
              emit_horn(f->kids[1], guard);
              break;
            }
          default:
            break;
          }
      }

      void
      emit_lambda(const gf_ptr& f, const gf_atom* guard)
      {
        auto guarded_body = [&] {
          tgd t;
          if (guard)
            t.body.push_back(guard_atom(*guard));
          return t;
        };
        switch (f->kind)
          {
          case gkind::conj:
            {
              tgd t = guarded_body();
              for (auto& k : f->kids)
                add_body(t, k);
              t.head.push_back(*ref(f));
              rules_.push_back(t);
              for (auto& k : f->kids)
                emit_lambda(k, guard);
              break;
            }
          case gkind::disj:
            for (auto& k : f->kids)
              {
                tgd t = guarded_body();
                add_body(t, k);
                t.head.push_back(*ref(f));
                rules_.push_back(t);
                emit_lambda(k, guard);
              }
            break;
          case gkind::exists:
            {
              gf_atom mid{"__aux/" + std::to_string(++aux_), free_vars(f)};
              tgd t;
              t.body.push_back(guard_atom(f->atom));
              add_body(t, f->kids[0]);
              t.head.push_back(mid);
              rules_.push_back(t);
              tgd u = guarded_body();
              u.body.push_back(mid);
              u.head.push_back(*ref(f));
              rules_.push_back(u);
              emit_lambda(f->kids[0], &f->atom);
              break;
            }
          default:
            break;
          }
      }

      std::vector<tgd> rules_;
      std::map<const gf_node*, gf_atom> names_;
      int sub_ = 0, aux_ = 0;
    };

    void
    substitute(std::vector<gf_atom>& atoms, const std::string& from,
               const std::string& to)
    {
      for (auto& a : atoms)
        for (auto& v : a.args)
          if (v == from)
            v = to;
    }

    /// Removes body equalities by substitution.
    void
    drop_body_equalities(tgd& t)
    {
      for (;;)
        {
          auto it = std::find_if(t.body.begin(), t.body.end(),
                                 [](const gf_atom& a) { return a.pred == "="; });
          if (it == t.body.end())
            return;
          std::string keep = it->args[0], gone = it->args[1];
          t.body.erase(it);
          if (keep != gone)
            {
              substitute(t.body, gone, keep);
              substitute(t.head, gone, keep);
            }
          // A variable only bound by the dropped equality is bound by the
          // domain predicate instead.
          auto bv = vars_of(t.body);
          if (std::find(bv.begin(), bv.end(), keep) == bv.end())
            t.body.push_back({dom_pred, {keep}});
        }
    }

    std::vector<std::string>
    var_names(int n)
    {
      std::vector<std::string> v;
      for (int i = 1; i <= n; ++i)
        v.push_back("x" + std::to_string(i));
      return v;
    }

    void
    add_congruence(std::vector<tgd>& rules, const vocabulary& v)
    {
      for (auto& [p, k] : v.arity)
        {
          auto xs = var_names(k);
          gf_atom r{p, xs};
          if (k == 1)
            {
              rules.push_back({{r, {eq_pred, {"x1", "y"}}}, {{p, {"y"}}}, {}});
              rules.push_back({{r, {eq_pred, {"y", "x1"}}}, {{p, {"y"}}}, {}});
              continue;
            }
          for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
              {
                if (i == j)
                  continue;
                gf_atom e{eq_pred, {xs[i], xs[j]}};
                rules.push_back({{r, e}, {{eq_pred, {xs[j], xs[i]}}}, {}});
                auto a = xs, b = xs;
                std::replace(a.begin(), a.end(), xs[i], xs[j]);
                std::replace(b.begin(), b.end(), xs[j], xs[i]);
                rules.push_back({{r, e}, {{p, a}, {p, b}}, {}});
                for (int l = 0; l < k; ++l)
                  if (l != i && l != j)
                    rules.push_back({{r, e, {eq_pred, {xs[j], xs[l]}}},
                                     {{eq_pred, {xs[i], xs[l]}}}, {}});
              }
        }
    }
  }

  std::vector<tgd>
  horngf_to_tgds(const gf_ptr& sentence)
  {
    if (!classify_gf(sentence).is_horn_gf)
      throw error("horngf_to_tgds needs a hornGF formula");
    if (!free_vars(sentence).empty())
      throw error("horngf_to_tgds needs a sentence");
    for (auto& [p, k] : gf_vocab(sentence).arity)
      if (p.rfind("__", 0) == 0)
        throw error("predicate " + p + " clashes with generated names");
    auto rules = tgd_builder().run(sentence);
    bool head_eq = false;
    for (auto& t : rules)
      {
        drop_body_equalities(t);
        for (auto& a : t.head)
          if (a.pred == "=")
            {
              a.pred = eq_pred;
              head_eq = true;
            }
      }
    if (head_eq)
      {
        vocabulary v = tgd_vocab(rules);
        add_congruence(rules, v);
      }
    return rules;
  }

  gf_ptr
  tgds_to_horngf(const std::vector<tgd>& sigma)
  {
    for (auto& [p, k] : tgd_vocab(sigma).arity)
      if (p.rfind("__", 0) == 0)
        throw error("predicate " + p + " clashes with generated names");
    std::vector<gf_ptr> parts;
    int n = 0;
    auto conj = [](const std::vector<gf_atom>& atoms) {
      std::vector<gf_ptr> fs;
      for (auto& a : atoms)
        fs.push_back(g_atom(a.pred, a.args));
      return g_and(fs);
    };
    for (auto& t : sigma)
      {
        validate(t);
        if (!is_guarded(t))
          throw error("unguarded tgd: " + to_string(t));
        auto bv = vars_of(t.body);
        auto hv = vars_of(t.head);
        std::vector<std::string> frontier;
        for (auto& v : bv)
          if (std::find(hv.begin(), hv.end(), v) != hv.end())
            frontier.push_back(v);
        gf_ptr inner;
        gf_atom aux{"__aux/" + std::to_string(++n), frontier};
        for (auto& z : t.exist)
          aux.args.push_back(z);
        if (t.head.empty())
          inner = g_bot();
        else if (t.exist.empty())
          inner = g_atom(aux.pred, aux.args);
        else
          inner = g_exists(t.exist, aux, g_top());
        gf_ptr first;
        if (t.body.empty())
          first = inner;
        else
          {
            int gi = tgd_guard(t);
            std::vector<gf_atom> rest;
            for (std::size_t i = 0; i < t.body.size(); ++i)
              if (static_cast<int>(i) != gi)
                rest.push_back(t.body[i]);
            gf_ptr body = rest.empty() ? inner : g_imp(conj(rest), inner);
            const gf_atom& g = t.body[gi];
            if (bv.empty())
              first = g_imp(g_atom(g.pred, g.args), body);
            else
              first = g_forall(bv, g, body);
          }
        parts.push_back(first);
        if (t.head.empty())
          continue;
        if (aux.args.empty())
          parts.push_back(g_imp(g_atom(aux.pred, {}), conj(t.head)));
        else
          parts.push_back(g_forall(aux.args, aux, conj(t.head)));
      }
    return g_and(parts);
  }

  // ---------------------------------------------------------------------
  // Matching, satisfaction and the chase

  namespace
  {
    using binding = std::map<std::string, int>;

    /// Calls f on every extension of b mapping all atoms into s; stops
    /// when f returns false. Returns false if stopped.
    bool
    match_atoms(const structure& s, const std::vector<gf_atom>& atoms,
                std::vector<bool>& done, binding& b,
                const std::function<bool(const binding&)>& f)
    {
      int best = -1, best_score = -1;
      for (std::size_t i = 0; i < atoms.size(); ++i)
        {
          if (done[i])
            continue;
          int score = 0;
          for (auto& v : atoms[i].args)
            score += b.count(v) ? 2 : 0;
          if (atoms[i].pred != "=" && atoms[i].pred != dom_pred)
            score += 1;
          if (score > best_score)
            best = static_cast<int>(i), best_score = score;
        }
      if (best < 0)
        return f(b);
      const gf_atom& a = atoms[best];
      done[best] = true;
      bool go_on = true;
      auto try_tuple = [&](const tuple_t& t) {
        std::vector<std::string> added;
        bool ok = true;
        for (std::size_t i = 0; i < a.args.size() && ok; ++i)
          {
            auto it = b.find(a.args[i]);
            if (it == b.end())
              {
                b.emplace(a.args[i], t[i]);
                added.push_back(a.args[i]);
              }
            else if (it->second != t[i])
              ok = false;
          }
        if (ok)
          go_on = match_atoms(s, atoms, done, b, f);
        for (auto& v : added)
          b.erase(v);
        return go_on;
      };
      if (a.pred == "=" || a.pred == dom_pred)
        {
          for (std::size_t e = 0; e < s.size() && go_on; ++e)
            {
              int x = static_cast<int>(e);
              if (a.pred == "=")
                try_tuple({x, x});
              else
                try_tuple({x});
            }
        }
      else if (s.vocab().has(a.pred))
        {
          if (s.vocab().arity.at(a.pred) != static_cast<int>(a.args.size()))
            throw error("arity mismatch for " + a.pred);
          // Copy: the callback may add facts.
          std::vector<tuple_t> ts(s.tuples(a.pred).begin(),
                                  s.tuples(a.pred).end());
          for (auto& t : ts)
            if (!try_tuple(t))
              break;
        }
      done[best] = false;
      return go_on;
    }

    void
    for_each_match(const structure& s, const std::vector<gf_atom>& atoms,
                   binding b, const std::function<bool(const binding&)>& f)
    {
      std::vector<bool> done(atoms.size(), false);
      match_atoms(s, atoms, done, b, f);
    }

    bool
    has_match(const structure& s, const std::vector<gf_atom>& atoms,
              const binding& b)
    {
      bool found = false;
      for_each_match(s, atoms, b, [&](const binding&) {
        found = true;
        return false;
      });
      return found;
    }
  }

  bool
  satisfies(const structure& s, const std::vector<tgd>& sigma)
  {
    for (auto& t : sigma)
      {
        bool ok = true;
        for_each_match(s, t.body, {}, [&](const binding& b) {
          if (t.head.empty() || !has_match(s, t.head, b))
            ok = false;
          return ok;
        });
        if (!ok)
          return false;
      }
    return true;
  }

  chase_result
  chase(const structure& db, const std::vector<tgd>& sigma,
        std::size_t step_cap)
  {
    chase_result r;
    r.s = db;
    r.s.extend_vocab(tgd_vocab(sigma));
    for (auto& t : sigma)
      {
        validate(t);
        for (auto& a : t.head)
          if (a.pred == "=")
            throw error("equality in a rule head; eliminate it first");
      }
    std::set<std::pair<std::size_t, binding>> fired;
    for (bool changed = true; changed;)
      {
        changed = false;
        for (std::size_t i = 0; i < sigma.size(); ++i)
          {
            const tgd& t = sigma[i];
            std::vector<binding> triggers;
            for_each_match(r.s, t.body, {}, [&](const binding& b) {
              if (!fired.count({i, b}))
                triggers.push_back(b);
              return true;
            });
            for (auto& b : triggers)
              {
                if (!fired.insert({i, b}).second)
                  continue;
                if (t.head.empty())
                  {
                    r.state = chase_result::status::inconsistent;
                    return r;
                  }
                if (++r.steps > step_cap)
                  {
                    r.state = chase_result::status::cap_exceeded;
                    return r;
                  }
                binding full = b;
                for (auto& z : t.exist)
                  {
                    std::string name;
                    do
                      name = "_n" + std::to_string(++r.nulls);
                    while (r.s.find(name) >= 0);
                    full[z] = r.s.add_element(name);
                  }
                for (auto& a : t.head)
                  {
                    if (a.pred == dom_pred)
                      continue;
                    tuple_t tu;
                    for (auto& v : a.args)
                      tu.push_back(full.at(v));
                    if (!r.s.holds(a.pred, tu))
                      {
                        r.s.add_fact(a.pred, tu);
                        changed = true;
                      }
                  }
                changed = changed || !t.exist.empty();
              }
          }
      }
    return r;
  }

  structure
  chase_reduct(const structure& s, const vocabulary& v)
  {
    std::vector<int> parent(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
      parent[i] = static_cast<int>(i);
    std::function<int(int)> root = [&](int x) {
      return parent[x] == x ? x : parent[x] = root(parent[x]);
    };
    if (s.vocab().has(eq_pred))
      for (auto& t : s.tuples(eq_pred))
        {
          int x = root(t[0]), y = root(t[1]);
          if (x != y)
            parent[std::max(x, y)] = std::min(x, y);
        }
    structure out(v);
    std::vector<int> id(s.size(), -1);
    for (std::size_t i = 0; i < s.size(); ++i)
      if (root(static_cast<int>(i)) == static_cast<int>(i))
        id[i] = out.add_element(s.name(static_cast<int>(i)));
    for (auto& [p, k] : v.arity)
      if (s.vocab().has(p))
        for (auto& t : s.tuples(p))
          {
            tuple_t u;
            for (int e : t)
              u.push_back(id[root(e)]);
            out.add_fact(p, u);
          }
    return out;
  }

  cq
  parse_cq(const std::string& text)
  {
    nlohmann::json j;
    try
      {
        j = nlohmann::json::parse(text);
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed query JSON: ") + e.what());
      }
    if (!j.is_object() || !j.contains("body"))
      throw error("query JSON needs a body");
    cq q;
    try
      {
        if (j.contains("answer"))
          q.answer = j["answer"].get<std::vector<std::string>>();
        for (auto& a : j["body"])
          q.body.push_back(parse_atom(a.get<std::string>()));
      }
    catch (const nlohmann::json::exception& e)
      {
        throw error(std::string("malformed query JSON: ") + e.what());
      }
    auto vs = vars_of(q.body);
    for (auto& v : q.answer)
      if (std::find(vs.begin(), vs.end(), v) == vs.end())
        throw error("answer variable " + v + " does not occur in the body");
    return q;
  }

  std::vector<tuple_t>
  cq_answers(const cq& q, const structure& s)
  {
    std::set<tuple_t> out;
    for_each_match(s, q.body, {}, [&](const binding& b) {
      tuple_t t;
      for (auto& v : q.answer)
        t.push_back(b.at(v));
      out.insert(t);
      return true;
    });
    return {out.begin(), out.end()};
  }

  certain_result
  certain_answers(const cq& q, const structure& db,
                  const std::vector<tgd>& sigma, std::size_t step_cap)
  {
    certain_result r;
    auto c = chase(db, sigma, step_cap);
    if (c.state == chase_result::status::inconsistent)
      {
        r.state = certain_result::status::inconsistent;
        return r;
      }
    if (c.state == chase_result::status::cap_exceeded)
      {
        r.state = certain_result::status::unknown;
        return r;
      }
    int n = static_cast<int>(db.size());
    for (auto& t : cq_answers(q, c.s))
      if (std::all_of(t.begin(), t.end(), [&](int e) { return e < n; }))
        {
          std::vector<std::string> names;
          for (int e : t)
            names.push_back(db.name(e));
          r.tuples.push_back(names);
        }
    return r;
  }
}
