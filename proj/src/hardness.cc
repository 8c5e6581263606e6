// SPDX-License-Identifier: MIT
// Alternating Turing machines, their acceptance oracle and the HornSim
// instances compiled from them.
#include <hornlog/hardness.hh>

#include <algorithm>
#include <functional>
#include <set>

#include <json.hpp>

namespace hornlog
{
  namespace
  {
    using json = nlohmann::json;

    bool
    contains(const std::vector<std::string>& v, const std::string& s)
    {
      return std::find(v.begin(), v.end(), s) != v.end();
    }

    const char*
    move_name(atm::move d)
    {
      switch (d)
        {
        case atm::move::left:
          return "L";
        case atm::move::right:
          return "R";
        case atm::move::hold:
          break;
        }
      return "H";
    }

    atm::move
    move_of(const std::string& s)
    {
      if (s == "L")
        return atm::move::left;
      if (s == "R")
        return atm::move::right;
      if (s == "H")
        return atm::move::hold;
      throw error("head move must be L, R or H, got " + s);
    }

    /// Head position after \a d from \a head on a tape of \a s cells.
    int
    moved(int head, atm::move d, int s)
    {
      int h = head + (d == atm::move::left ? -1 : d == atm::move::right ? 1 : 0);
      return std::clamp(h, 0, s - 1);
    }

    std::vector<std::string>
    strings(const json& j, const char* key)
    {
      if (!j.contains(key))
        return {};
      return j.at(key).get<std::vector<std::string>>();
    }
  }

  bool
  atm::is_existential(const std::string& q) const
  {
    return contains(existential, q);
  }

  bool
  atm::is_universal(const std::string& q) const
  {
    return contains(universal, q);
  }

  bool
  atm::is_accepting(const std::string& q) const
  {
    return contains(accepting, q);
  }

  bool
  atm::is_rejecting(const std::string& q) const
  {
    return contains(rejecting, q);
  }

  std::vector<std::string>
  atm::states() const
  {
    std::vector<std::string> out;
    for (auto* v : {&existential, &universal, &accepting, &rejecting})
      out.insert(out.end(), v->begin(), v->end());
    return out;
  }

  void
  validate(const atm& m)
  {
    auto qs = m.states();
    std::set<std::string> uniq(qs.begin(), qs.end());
    if (uniq.size() != qs.size())
      throw error("machine state sets are not pairwise disjoint");
    if (!m.is_universal(m.initial))
      throw error("initial state " + m.initial + " is not universal");
    if (m.space < 1)
      throw error("space bound must be positive");
    std::set<std::string> gamma(m.tape_alphabet.begin(), m.tape_alphabet.end());
    if (gamma.size() != m.tape_alphabet.size() || gamma.empty())
      throw error("tape alphabet must be nonempty without repeats");
    for (auto& a : m.input_alphabet)
      if (!gamma.count(a))
        throw error("input symbol " + a + " is not a tape symbol");
    if (!gamma.count(m.blank))
      throw error("blank " + m.blank + " is not a tape symbol");
    for (auto& [key, br] : m.delta)
      {
        if (!uniq.count(key.first) || !gamma.count(key.second))
          throw error("transition from unknown pair (" + key.first + ","
                      + key.second + ")");
        if (m.is_final(key.first))
          throw error("final state " + key.first + " has a branching transition");
        for (auto* st : {&br.first, &br.second})
          if (!uniq.count(st->state) || !gamma.count(st->symbol))
            throw error("transition target (" + st->state + "," + st->symbol
                        + ") is unknown");
      }
    for (auto& q : qs)
      if (!m.is_final(q))
        for (auto& a : m.tape_alphabet)
          if (!m.delta.count({q, a}))
            throw error("no transition for (" + q + "," + a + ")");
  }

  void
  validate_word(const atm& m, const atm_word& w)
  {
    if (static_cast<int>(w.size()) > m.space)
      throw error("input word longer than the space bound");
    for (auto& a : w)
      if (!contains(m.input_alphabet, a))
        throw error("input symbol " + a + " is not in the input alphabet");
  }

  atm_problem
  atm_from_json(const std::string& text)
  {
    json j;
    try
      {
        j = json::parse(text);
      }
    catch (const json::exception& e)
      {
        throw error(std::string("machine JSON: ") + e.what());
      }
    atm_problem p;
    try
      {
        auto& m = p.machine;
        p.name = j.value("name", "");
        m.existential = strings(j, "existential");
        m.universal = strings(j, "universal");
        m.accepting = strings(j, "accepting");
        m.rejecting = strings(j, "rejecting");
        m.initial = j.at("initial").get<std::string>();
        m.input_alphabet = strings(j, "input_alphabet");
        m.tape_alphabet = strings(j, "tape_alphabet");
        m.blank = j.at("blank").get<std::string>();
        m.space = j.at("space").get<int>();
        for (auto& t : j.at("transitions"))
          {
            auto key = std::make_pair(t.at(0).at(0).get<std::string>(),
                                      t.at(0).at(1).get<std::string>());
            auto branch = [&](const json& b) {
              return atm::step{b.at(0).get<std::string>(),
                               b.at(1).get<std::string>(),
                               move_of(b.at(2).get<std::string>())};
            };
            if (!m.delta.emplace(key, std::make_pair(branch(t.at(1).at(0)),
                                                     branch(t.at(1).at(1))))
                   .second)
              throw error("duplicate transition for (" + key.first + ","
                          + key.second + ")");
          }
        if (j.contains("word"))
          {
            if (j.at("word").is_string())
              for (char c : j.at("word").get<std::string>())
                p.word.push_back(std::string(1, c));
            else
              p.word = j.at("word").get<atm_word>();
          }
      }
    catch (const json::exception& e)
      {
        throw error(std::string("machine JSON: ") + e.what());
      }
    validate(p.machine);
    validate_word(p.machine, p.word);
    return p;
  }

  std::string
  atm_to_json(const atm_problem& p)
  {
    const auto& m = p.machine;
    json j;
    if (!p.name.empty())
      j["name"] = p.name;
    j["existential"] = m.existential;
    j["universal"] = m.universal;
    j["accepting"] = m.accepting;
    j["rejecting"] = m.rejecting;
    j["initial"] = m.initial;
    j["input_alphabet"] = m.input_alphabet;
    j["tape_alphabet"] = m.tape_alphabet;
    j["blank"] = m.blank;
    j["space"] = m.space;
    json ts = json::array();
    for (auto& [key, br] : m.delta)
      {
        auto step = [](const atm::step& s) {
          return json::array({s.state, s.symbol, move_name(s.dir)});
        };
        ts.push_back(json::array({json::array({key.first, key.second}),
                                  json::array({step(br.first), step(br.second)})}));
      }
    j["transitions"] = ts;
    j["word"] = p.word;
    return j.dump(2);
  }

  atm_config
  initial_config(const atm& m, const atm_word& w)
  {
    validate_word(m, w);
    atm_config c{m.initial, 0, w};
    c.tape.resize(m.space, m.blank);
    return c;
  }

  std::pair<atm_config, atm_config>
  successors(const atm& m, const atm_config& c)
  {
    auto it = m.delta.find({c.state, c.tape.at(c.head)});
    if (it == m.delta.end())
      throw error("configuration in state " + c.state + " has no successor");
    auto next = [&](const atm::step& st) {
      atm_config n = c;
      n.state = st.state;
      n.tape[c.head] = st.symbol;
      n.head = moved(c.head, st.dir, m.space);
      return n;
    };
    return {next(it->second.first), next(it->second.second)};
  }

  atm_result
  atm_run(const atm& m, const atm_word& w, std::size_t cap)
  {
    validate(m);
    std::map<atm_config, int> value;  // -1 while on the DFS stack
    std::function<int(const atm_config&)> eval = [&](const atm_config& c) {
      auto it = value.find(c);
      if (it != value.end())
        {
          if (it->second < 0)
            throw error("machine has a non-final cycle through state "
                        + c.state);
          return it->second;
        }
      if (value.size() >= cap)
        throw cap_exceeded("more than " + std::to_string(cap)
                           + " configurations");
      if (m.is_final(c.state))
        return value[c] = m.is_accepting(c.state) ? 1 : 0;
      value[c] = -1;
      auto [l, r] = successors(m, c);
      int vl = eval(l);
      int vr = eval(r);
      return value[c] = m.is_universal(c.state) ? std::min(vl, vr)
                                                : std::max(vl, vr);
    };
    atm_result res;
    res.accepts = eval(initial_config(m, w)) == 1;
    res.configurations = value.size();
    return res;
  }

  bool
  atm_accepts(const atm& m, const atm_word& w, std::size_t cap)
  {
    return atm_run(m, w, cap).accepts;
  }

  namespace atm_names
  {
    std::string
    dir(bool right)
    {
      return right ? "↘" : "↙";
    }

    std::string
    cell(int i, const std::string& content, bool right)
    {
      return "cell" + std::to_string(i) + "/" + content + "," + dir(right);
    }

    std::string
    role(const std::string& q, const std::string& a, int i, bool right)
    {
      return "R_{" + q + "," + a + "," + std::to_string(i) + "," + dir(right)
             + "}";
    }
  }

  namespace
  {
    const std::string and_op = "∧";
    const std::string or_op = "∨";

    struct controller_elem
    {
      std::string name;
      bool internal = false;
      bool universal = false;  // the and-elements
      int l = 0, r = 0, val = 0;
      bool right = false;
    };

    std::vector<controller_elem>
    controller_elems()
    {
      std::vector<controller_elem> out;
      for (bool right : {false, true})
        {
          for (bool uni : {true, false})
            for (int l = 0; l < 2; ++l)
              for (int r = 0; r < 2; ++r)
                {
                  int val = uni ? (l & r) : (l | r);
                  out.push_back({"(" + (uni ? and_op : or_op) + ","
                                   + std::to_string(l) + "," + std::to_string(r)
                                   + "," + std::to_string(val) + ","
                                   + atm_names::dir(right) + ")",
                                 true, uni, l, r, val, right});
                }
          for (int val = 0; val < 2; ++val)
            out.push_back({"(" + std::to_string(val) + "," + atm_names::dir(right)
                             + ")",
                           false, false, 0, 0, val, right});
        }
      return out;
    }

    /// Role names R_{q,a,i,d} (1-based i) and R_id.
    std::vector<std::string>
    role_names(const atm& m)
    {
      std::vector<std::string> out{"R_id"};
      for (auto& q : m.states())
        for (auto& a : m.tape_alphabet)
          for (int i = 1; i <= m.space; ++i)
            for (bool right : {false, true})
              out.push_back(atm_names::role(q, a, i, right));
      return out;
    }

    std::vector<std::string>
    concept_names(const atm& m)
    {
      std::vector<std::string> out{"U0", "U1", "U" + atm_names::dir(false),
                                   "U" + atm_names::dir(true)};
      for (int i = 1; i <= m.space; ++i)
        out.push_back("V" + std::to_string(i));
      return out;
    }

    /// Adds the controller to \a s with element names prefixed by \a prefix.
    /// Returns the element indices in controller_elems() order.
    std::vector<int>
    add_controller(structure& s, const atm& m, const std::string& prefix)
    {
      auto ce = controller_elems();
      std::vector<int> id;
      for (auto& e : ce)
        id.push_back(s.add_element(prefix + e.name));
      for (std::size_t i = 0; i < ce.size(); ++i)
        {
          auto& e = ce[i];
          s.add_label("U" + atm_names::dir(e.right), id[i]);
          if (!e.internal)
            {
              s.add_label(e.val ? "U1" : "U0", id[i]);
              s.add_edge("R_id", id[i], id[i]);
            }
        }
      // Edges of R_{q,a,i,d} leave internal elements of direction d and do
      // not depend on q, a or i.
      for (std::size_t i = 0; i < ce.size(); ++i)
        {
          auto& e = ce[i];
          if (!e.internal)
            continue;
          for (std::size_t k = 0; k < ce.size(); ++k)
            {
              auto& f = ce[k];
              if (f.internal && f.universal == e.universal)
                continue;
              bool ok = (f.val == e.l && !f.right) || (f.val == e.r && f.right);
              if (!ok)
                continue;
              for (auto& q : m.states())
                for (auto& a : m.tape_alphabet)
                  for (int j = 1; j <= m.space; ++j)
                    s.add_edge(atm_names::role(q, a, j, e.right), id[i], id[k]);
            }
        }
      return id;
    }

    std::string
    head_content(const std::string& q, const std::string& a)
    {
      return q + "," + a;
    }

    hornsim_instance
    build(const atm& m, const atm_word& w, std::size_t vocab_cap, bool marked)
    {
      validate(m);
      validate_word(m, w);
      auto roles = role_names(m);
      auto concepts = concept_names(m);
      if (roles.size() + concepts.size() > vocab_cap)
        throw cap_exceeded("construction needs "
                           + std::to_string(roles.size() + concepts.size())
                           + " predicates");
      vocabulary v;
      for (auto& r : roles)
        v.add(r, 2);
      for (auto& c : concepts)
        v.add(c, 1);
      if (marked)
        v.add(atm_names::star, 1);

      hornsim_instance inst;
      inst.b = structure(v);
      add_controller(inst.b, m, "");
      auto ce = controller_elems();
      inst.b_hat = inst.b.at("(" + and_op + ",1,1,1," + atm_names::dir(false) + ")");

      auto& a = inst.a;
      a = structure(v);
      const int s = m.space;
      const auto qs = m.states();
      // Cell elements.
      for (int i = 1; i <= s; ++i)
        for (bool right : {false, true})
          {
            for (auto& g : m.tape_alphabet)
              a.add_element(atm_names::cell(i, g, right));
            for (auto& q : qs)
              for (auto& g : m.tape_alphabet)
                a.add_element(atm_names::cell(i, head_content(q, g), right));
          }
      auto copy = add_controller(a, m, "ctl/");
      auto plain = [&](int i, const std::string& g, bool right) {
        return a.at(atm_names::cell(i, g, right));
      };
      auto head = [&](int i, const std::string& q, const std::string& g,
                      bool right) {
        return a.at(atm_names::cell(i, head_content(q, g), right));
      };

      for (int i = 1; i <= s; ++i)
        for (bool right : {false, true})
          {
            std::vector<int> all;
            for (auto& g : m.tape_alphabet)
              all.push_back(plain(i, g, right));
            for (auto& q : qs)
              for (auto& g : m.tape_alphabet)
                {
                  int e = head(i, q, g, right);
                  all.push_back(e);
                  if (m.is_rejecting(q))
                    a.add_label("U0", e);
                  if (m.is_accepting(q))
                    a.add_label("U1", e);
                  if (m.is_final(q))
                    a.add_edge("R_id", e, e);
                }
            for (int e : all)
              {
                a.add_label("U" + atm_names::dir(right), e);
                for (int j = 1; j <= s; ++j)
                  if (j != i)
                    a.add_label("V" + std::to_string(j), e);
              }
            for (auto& g : m.tape_alphabet)
              a.add_edge("R_id", plain(i, g, right), plain(i, g, right));
          }

      // Transition roles: cell i under R_{q,a,j,d} for each branch.
      for (auto& [key, br] : m.delta)
        {
          const auto& [q, sym] = key;
          for (int j = 1; j <= s; ++j)
            for (bool d : {false, true})
              {
                auto role = atm_names::role(q, sym, j, d);
                for (bool target : {false, true})
                  {
                    const atm::step& st = target ? br.second : br.first;
                    int h = moved(j - 1, st.dir, s) + 1;
                    for (int i = 1; i <= s; ++i)
                      {
                        if (i == j)
                          {
                            int to = h == j
                                       ? head(i, st.state, st.symbol, target)
                                       : plain(i, st.symbol, target);
                            a.add_edge(role, head(i, q, sym, d), to);
                          }
                        else if (i == h)
                          for (auto& g : m.tape_alphabet)
                            a.add_edge(role, plain(i, g, d),
                                       head(i, st.state, g, target));
                        else
                          for (auto& g : m.tape_alphabet)
                            a.add_edge(role, plain(i, g, d), plain(i, g, target));
                      }
                  }
              }
        }

      // Connections from the cells into the copy of the controller.
      for (int i = 1; i <= s; ++i)
        for (bool right : {false, true})
          {
            for (auto& g : m.tape_alphabet)
              for (int c : copy)
                for (auto& r : roles)
                  a.add_edge(r, plain(i, g, right), c);
            for (auto& q : qs)
              {
                if (m.is_final(q))
                  continue;
                for (auto& g : m.tape_alphabet)
                  for (std::size_t k = 0; k < ce.size(); ++k)
                    {
                      if (!ce[k].internal
                          || ce[k].universal == m.is_universal(q))
                        continue;
                      for (auto& r : roles)
                        a.add_edge(r, head(i, q, g, right), copy[k]);
                    }
              }
          }

      inst.x = config_elements(a, initial_config(m, w), false);
      if (marked)
        {
          for_each_elem(inst.x, [&](int e) { a.add_label(atm_names::star, e); });
          inst.b.add_label(atm_names::star, inst.b_hat);
        }
      return inst;
    }
  }

  hornsim_instance
  build_hornsim_instance(const atm& m, const atm_word& w, std::size_t vocab_cap)
  {
    return build(m, w, vocab_cap, false);
  }

  hornsim_instance
  build_global_instance(const atm& m, const atm_word& w, std::size_t vocab_cap)
  {
    return build(m, w, vocab_cap, true);
  }

  elem_set
  config_elements(const structure& a, const atm_config& c, bool right)
  {
    elem_set x(a.size());
    for (int i = 0; i < static_cast<int>(c.tape.size()); ++i)
      {
        std::string content = i == c.head ? head_content(c.state, c.tape[i])
                                          : c.tape[i];
        x.set(a.at(atm_names::cell(i + 1, content, right)));
      }
    return x;
  }

  namespace
  {
    /// A machine over {a, b, blank} whose unlisted non-final pairs reject.
    struct zoo_builder
    {
      atm m;

      zoo_builder(std::vector<std::string> ex, std::vector<std::string> uni,
                  int space)
      {
        m.existential = std::move(ex);
        m.universal = std::move(uni);
        m.accepting = {"acc"};
        m.rejecting = {"rej"};
        m.initial = "q0";
        m.input_alphabet = {"a", "b"};
        m.tape_alphabet = {"a", "b", "_"};
        m.blank = "_";
        m.space = space;
      }

      zoo_builder&
      on(const std::string& q, const std::string& a, atm::step l, atm::step r)
      {
        m.delta[{q, a}] = {std::move(l), std::move(r)};
        return *this;
      }

      /// Both branches take the same step.
      zoo_builder&
      det(const std::string& q, const std::string& a, const atm::step& st)
      {
        return on(q, a, st, st);
      }

      atm
      done()
      {
        for (auto& q : m.states())
          if (!m.is_final(q))
            for (auto& a : m.tape_alphabet)
              if (!m.delta.count({q, a}))
                det(q, a, {"rej", a, atm::move::hold});
        validate(m);
        return m;
      }
    };

    atm::step
    st(const std::string& q, const std::string& a, atm::move d)
    {
      return {q, a, d};
    }

    atm_word
    word(const std::string& s)
    {
      atm_word w;
      for (char c : s)
        w.push_back(std::string(1, c));
      return w;
    }
  }

  std::vector<atm_problem>
  atm_zoo()
  {
    using mv = atm::move;
    std::vector<atm_problem> z;
    auto add = [&](const std::string& name, atm m, const std::string& w) {
      z.push_back({name, std::move(m), word(w)});
    };
    {
      zoo_builder b({}, {"q0"}, 1);
      for (auto a : {"a", "b", "_"})
        b.det("q0", a, st("acc", a, mv::hold));
      add("accept-now", b.done(), "a");
    }
    add("reject-now", zoo_builder({}, {"q0"}, 1).done(), "a");
    add("universal-split",
        zoo_builder({}, {"q0"}, 1)
          .on("q0", "a", st("acc", "a", mv::hold), st("rej", "a", mv::hold))
          .done(),
        "a");
    add("existential-choice",
        zoo_builder({"e"}, {"q0"}, 1)
          .det("q0", "a", st("e", "a", mv::hold))
          .on("e", "a", st("rej", "a", mv::hold), st("acc", "b", mv::hold))
          .done(),
        "a");
    {
      // Scans right over a's; accepts at the first blank.
      auto walker = [] {
        return zoo_builder({}, {"q0"}, 3)
          .det("q0", "a", st("q0", "b", mv::right))
          .det("q0", "_", st("acc", "_", mv::hold))
          .done();
      };
      add("walk-right-blank", walker(), "aa");
      add("walk-right-full", walker(), "aaa");
    }
    add("left-edge",
        zoo_builder({}, {"q0", "q1"}, 2)
          .det("q0", "a", st("q1", "b", mv::left))
          .det("q1", "b", st("acc", "b", mv::hold))
          .done(),
        "a");
    add("back-and-forth",
        zoo_builder({}, {"q0", "q1", "q2"}, 2)
          .det("q0", "a", st("q1", "b", mv::right))
          .det("q1", "b", st("q2", "a", mv::left))
          .det("q2", "a", st("acc", "a", mv::hold))
          .done(),
        "ab");
    {
      // Universal start, existential guess, universal check on cell 2.
      auto nested = [] {
        return zoo_builder({"e"}, {"q0", "u"}, 2)
          .det("q0", "a", st("e", "a", mv::hold))
          .det("q0", "b", st("e", "b", mv::hold))
          .on("e", "a", st("u", "a", mv::right), st("rej", "a", mv::hold))
          .on("e", "b", st("rej", "b", mv::hold), st("rej", "a", mv::hold))
          .on("u", "_", st("acc", "_", mv::hold), st("acc", "a", mv::left))
          .done();
      };
      add("alternation-accept", nested(), "a");
      add("alternation-reject", nested(), "b");
    }
    return z;
  }
}
