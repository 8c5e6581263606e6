// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <hornlog/games.hh>
#include <hornlog/generate.hh>
#include <hornlog/hardness.hh>

#include <deque>

using namespace hornlog;

namespace
{
  struct graph_value
  {
    bool cyclic = false;
    int least = 0, greatest = 0;
  };

  // Breadth-first configuration graph with Kleene iteration from below and
  // from above; Kahn's algorithm on the non-final part detects cycles.
  graph_value
  fixpoint_value(const atm& m, const atm_word& w)
  {
    std::map<atm_config, int> id;
    std::vector<atm_config> cs;
    std::deque<int> todo;
    auto intern = [&](const atm_config& c) {
      auto [it, fresh] = id.emplace(c, static_cast<int>(cs.size()));
      if (fresh)
        {
          cs.push_back(c);
          todo.push_back(it->second);
        }
      return it->second;
    };
    intern(initial_config(m, w));
    std::vector<std::pair<int, int>> next;
    while (!todo.empty())
      {
        int i = todo.front();
        todo.pop_front();
        if (static_cast<int>(next.size()) <= i)
          next.resize(i + 1, {-1, -1});
        if (m.is_final(cs[i].state))
          continue;
        auto [l, r] = successors(m, cs[i]);
        int li = intern(l);
        int ri = intern(r);
        next[i] = {li, ri};
      }
    next.resize(cs.size(), {-1, -1});
    std::size_t n = cs.size();
    graph_value out;
    std::vector<int> indeg(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (next[i].first >= 0)
        {
          ++indeg[next[i].first];
          ++indeg[next[i].second];
        }
    std::vector<int> stack;
    for (std::size_t i = 0; i < n; ++i)
      if (!indeg[i])
        stack.push_back(static_cast<int>(i));
    std::size_t seen = 0;
    while (!stack.empty())
      {
        int i = stack.back();
        stack.pop_back();
        ++seen;
        if (next[i].first >= 0)
          for (int j : {next[i].first, next[i].second})
            if (--indeg[j] == 0)
              stack.push_back(j);
      }
    out.cyclic = seen != n;
    for (int start : {0, 1})
      {
        std::vector<int> val(n);
        for (std::size_t i = 0; i < n; ++i)
          val[i] = m.is_final(cs[i].state) ? m.is_accepting(cs[i].state) : start;
        for (bool changed = true; changed;)
          {
            changed = false;
            for (std::size_t i = 0; i < n; ++i)
              {
                if (next[i].first < 0)
                  continue;
                int a = val[next[i].first], b = val[next[i].second];
                int v = m.is_universal(cs[i].state) ? std::min(a, b) : std::max(a, b);
                if (v != val[i])
                  {
                    val[i] = v;
                    changed = true;
                  }
              }
          }
        (start ? out.greatest : out.least) = val[0];
      }
    return out;
  }

  atm
  random_machine(rng_t& rng, int space)
  {
    atm m;
    m.universal = {"q0", "u"};
    m.existential = {"e"};
    m.accepting = {"acc"};
    m.rejecting = {"rej"};
    m.initial = "q0";
    m.input_alphabet = {"a", "b"};
    m.tape_alphabet = {"a", "b", "_"};
    m.blank = "_";
    m.space = space;
    auto qs = m.states();
    auto pick = [&](const std::vector<std::string>& v) {
      return v[rng() % v.size()];
    };
    auto step = [&] {
      return atm::step{pick(qs), pick(m.tape_alphabet),
                       static_cast<atm::move>(rng() % 3)};
    };
    for (auto& q : qs)
      if (!m.is_final(q))
        for (auto& a : m.tape_alphabet)
          m.delta[{q, a}] = {step(), step()};
    return m;
  }

  std::vector<std::string>
  cell_names(const structure& s, int i)
  {
    std::vector<std::string> out;
    std::string prefix = "cell" + std::to_string(i) + "/";
    for (auto& n : s.names())
      if (n.rfind(prefix, 0) == 0)
        out.push_back(n);
    return out;
  }
}

TEST_CASE("machine JSON round trip and validation")
{
  for (auto& p : atm_zoo())
    {
      auto q = atm_from_json(atm_to_json(p));
      CHECK(q.name == p.name);
      CHECK(q.word == p.word);
      CHECK(q.machine.delta == p.machine.delta);
      CHECK(q.machine.space == p.machine.space);
    }
  auto p = atm_zoo().front();
  auto bad = p.machine;
  bad.initial = "acc";
  CHECK_THROWS_AS(validate(bad), error);
  bad = p.machine;
  bad.delta.erase(bad.delta.begin());
  CHECK_THROWS_AS(validate(bad), error);
  bad = p.machine;
  bad.rejecting.push_back("q0");
  CHECK_THROWS_AS(validate(bad), error);
  CHECK_THROWS_AS(validate_word(p.machine, {"a", "a"}), error);
  CHECK_THROWS_AS(validate_word(p.machine, {"_"}), error);
  CHECK_THROWS_AS(atm_from_json("{\"initial\":\"q0\"}"), error);
  auto text = R"j({"universal":["q0"],"accepting":["y"],"rejecting":["n"],
    "initial":"q0","input_alphabet":["a"],"tape_alphabet":["a","_"],
    "blank":"_","space":2,"word":"a",
    "transitions":[[["q0","a"],[["y","a","R"],["n","a","L"]]],
                   [["q0","_"],[["y","_","H"],["y","_","H"]]]]})j";
  auto parsed = atm_from_json(text);
  CHECK(parsed.word == atm_word{"a"});
  CHECK(!atm_accepts(parsed.machine, parsed.word));
}

TEST_CASE("zoo verdicts")
{
  std::map<std::string, bool> expected{
    {"accept-now", true},         {"reject-now", false},
    {"universal-split", false},   {"existential-choice", true},
    {"walk-right-blank", true},   {"walk-right-full", false},
    {"left-edge", true},          {"back-and-forth", false},
    {"alternation-accept", true}, {"alternation-reject", false}};
  auto zoo = atm_zoo();
  REQUIRE(zoo.size() == 10);
  for (auto& p : zoo)
    {
      CAPTURE(p.name);
      CHECK(p.machine.space <= 3);
      auto fx = fixpoint_value(p.machine, p.word);
      CHECK(!fx.cyclic);
      CHECK(fx.least == fx.greatest);
      CHECK(atm_accepts(p.machine, p.word) == expected.at(p.name));
      CHECK(atm_accepts(p.machine, p.word) == (fx.least == 1));
    }
}

TEST_CASE("head moves stop at the tape ends")
{
  auto zoo = atm_zoo();
  auto& edge = zoo[6];
  REQUIRE(edge.name == "left-edge");
  auto c = initial_config(edge.machine, edge.word);
  auto [l, r] = successors(edge.machine, c);
  CHECK(l.head == 0);
  CHECK(l.tape[0] == "b");
  CHECK(l == r);
  auto& walk = zoo[5];
  auto d = initial_config(walk.machine, walk.word);
  for (int i = 0; i < 3; ++i)
    d = successors(walk.machine, d).first;
  CHECK(d.head == 2);
  CHECK(d.tape == atm_word{"b", "b", "b"});
}

TEST_CASE("acceptance agrees with fixpoint iteration on random machines")
{
  rng_t rng(15);
  int halting = 0;
  for (int i = 0; i < 400; ++i)
    {
      int space = 1 + i % 3;
      auto m = random_machine(rng, space);
      atm_word w;
      for (int k = 0; k < space; ++k)
        if (rng() % 3)
          w.push_back(rng() % 2 ? "a" : "b");
      auto fx = fixpoint_value(m, w);
      if (fx.cyclic)
        {
          CHECK_THROWS_AS(atm_accepts(m, w), error);
          continue;
        }
      ++halting;
      CHECK(fx.least == fx.greatest);
      CHECK(atm_accepts(m, w) == (fx.least == 1));
    }
  CHECK(halting > 50);
  CHECK_THROWS_AS(atm_run(atm_zoo()[4].machine, atm_zoo()[4].word, 2),
                  cap_exceeded);
}

TEST_CASE("controller shape")
{
  auto p = atm_zoo()[4];
  auto inst = build_global_instance(p.machine, p.word);
  auto& b = inst.b;
  CHECK(b.size() == 20);
  CHECK(b.name(inst.b_hat) == "(∧,1,1,1,↙)");
  CHECK(b.unary("U0").count() == 2);
  CHECK(b.unary("U1").count() == 2);
  CHECK(b.unary("U↙").count() == 10);
  CHECK(b.unary("U↘").count() == 10);
  for (int i = 1; i <= p.machine.space; ++i)
    CHECK(b.unary("V" + std::to_string(i)).none());
  CHECK(b.unary(atm_names::star).count() == 1);
  CHECK(b.unary(atm_names::star).test(inst.b_hat));
  CHECK(inst.a.unary(atm_names::star) == inst.x);
  CHECK(b.tuples("R_id").size() == 4);
  // An and-element (l, r) steps to or-elements and finals carrying l to the
  // left and r to the right.
  auto role = atm_names::role("q0", "a", 2, false);
  auto succ = b.names_of(b.succ(role)[b.at("(∧,0,1,0,↙)")]);
  std::set<std::string> got(succ.begin(), succ.end());
  std::set<std::string> want{"(∨,0,0,0,↙)", "(0,↙)", "(∨,0,1,1,↘)",
                             "(∨,1,0,1,↘)", "(∨,1,1,1,↘)", "(1,↘)"};
  CHECK(got == want);
  CHECK(b.succ(atm_names::role("q0", "a", 2, true))[b.at("(∧,0,1,0,↙)")].none());
  CHECK(b.succ(role)[b.at("(1,↙)")].none());
}

TEST_CASE("cell concept names")
{
  auto p = atm_zoo()[4];
  auto inst = build_hornsim_instance(p.machine, p.word);
  auto& a = inst.a;
  int s = p.machine.space;
  std::size_t per_cell = 2 * (3 + 3 * p.machine.states().size());
  CHECK(a.size() == s * per_cell + 20);
  for (int i = 1; i <= s; ++i)
    {
      auto names = cell_names(a, i);
      CHECK(names.size() == per_cell);
      for (int j = 1; j <= s; ++j)
        {
          const auto& v = a.unary("V" + std::to_string(j));
          for (auto& n : names)
            CHECK(v.test(a.at(n)) == (i != j));
        }
    }
  CHECK(a.unary("U1").test(a.at(atm_names::cell(2, "acc,b", true))));
  CHECK(a.unary("U0").test(a.at(atm_names::cell(3, "rej,_", false))));
  CHECK(!a.unary("U1").test(a.at(atm_names::cell(2, "q0,b", true))));
  CHECK(a.holds("R_id", {a.at(atm_names::cell(1, "a", false)),
                         a.at(atm_names::cell(1, "a", false))}));
  CHECK(!a.holds("R_id", {a.at(atm_names::cell(1, "q0,a", false)),
                          a.at(atm_names::cell(1, "q0,a", false))}));
  CHECK(inst.x.count() == static_cast<std::size_t>(s));
  CHECK_THROWS_AS(build_hornsim_instance(p.machine, p.word, 10), cap_exceeded);
  CHECK_THROWS_AS(build_hornsim_instance(p.machine, {"a", "a", "a", "a"}), error);
}

TEST_CASE("joint moves inside the cells follow the transitions")
{
  // Walks the reachable configurations of each machine and checks, on the
  // cell part of A, which roles admit a move of every cell and where the
  // two branches land.
  for (auto& p : atm_zoo())
    {
      CAPTURE(p.name);
      const auto& m = p.machine;
      auto inst = build_hornsim_instance(m, p.word);
      auto& a = inst.a;
      elem_set cells(a.size());
      for (int i = 1; i <= m.space; ++i)
        for (auto& n : cell_names(a, i))
          cells.set(a.at(n));
      std::set<atm_config> seen;
      std::vector<atm_config> todo{initial_config(m, p.word)};
      while (!todo.empty())
        {
          auto c = todo.back();
          todo.pop_back();
          if (!seen.insert(c).second || m.is_final(c.state))
            continue;
          auto [l, r] = successors(m, c);
          todo.push_back(l);
          todo.push_back(r);
          for (bool d : {false, true})
            {
              auto x = config_elements(a, c, d);
              std::vector<std::string> movable;
              for (auto& role : a.vocab().role_names())
                {
                  bool all = true;
                  elem_set img(a.size());
                  for_each_elem(x, [&](int e) {
                    elem_set in = a.succ(role)[e] & cells;
                    all = all && in.any();
                    img |= in;
                  });
                  if (!all)
                    continue;
                  movable.push_back(role);
                  elem_set left = img & a.unary("U↙");
                  elem_set right = img & a.unary("U↘");
                  CHECK(left == config_elements(a, l, false));
                  CHECK(right == config_elements(a, r, true));
                }
              REQUIRE(movable.size() == 1);
              CHECK(movable[0]
                    == atm_names::role(c.state, c.tape[c.head], c.head + 1, d));
            }
        }
      CHECK(!seen.empty());
    }
}

TEST_CASE("the instance as constructed loses at the root")
{
  // Cells of A reach the controller copy under every role name, so the
  // first position already fails (sim) or (forth_h) whatever the machine
  // does; the acceptance run reports the mismatch with the oracle.
  for (auto& p : atm_zoo())
    {
      CAPTURE(p.name);
      auto inst = build_hornsim_instance(p.machine, p.word);
      auto v = hornsim(inst.a, inst.x, inst.b, inst.b_hat);
      CHECK(!v.holds);
      REQUIRE(!v.trace.empty());
      CHECK(v.trace.front().find("sim fails") != std::string::npos);
    }
}
