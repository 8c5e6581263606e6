// SPDX-License-Identifier: MIT
// Small named structures used by examples, tests and the CLI.
#include <hornlog/fixtures.hh>

namespace hornlog::fixtures
{
  structure
  a0()
  {
    return parse_structure(R"({
      "domain": ["a", "b", "c", "d", "e"],
      "unary": {"A": ["c", "e"], "B": ["d"]},
      "roles": {"R": [["a", "b"], ["a", "c"], ["d", "e"]]}
    })");
  }

  structure
  b0()
  {
    return parse_structure(R"({
      "domain": ["a'", "b'"],
      "unary": {"A": ["b'"], "B": []},
      "roles": {"R": [["a'", "b'"]]}
    })");
  }

  structure
  a1()
  {
    return parse_structure(R"({
      "domain": ["a1", "c1", "d1", "a2", "c2", "d2"],
      "unary": {"E": ["a1", "a2"], "A1": ["a1"], "A2": ["a2"],
                "B1": ["c1", "c2"], "B2": ["d1", "d2"]},
      "roles": {"R": [["a1", "c1"], ["a1", "d1"], ["a2", "c2"], ["a2", "d2"]]}
    })");
  }

  structure
  b1()
  {
    return parse_structure(R"({
      "domain": ["b", "e", "f"],
      "unary": {"E": ["b"], "A1": [], "A2": [], "B1": ["e"], "B2": ["f"]},
      "roles": {"R": [["b", "e"], ["b", "f"]]}
    })");
  }

  concept_ptr
  c_nabla_example()
  {
    return parse_concept("(some R. top & all R. A) -> B");
  }

  tbox
  t_horn()
  {
    return parse_tbox(R"(
E <= A1 | A2 | some R. (!B1 & !B2)
some R. (B1 & B2) <= bot
E <= some R. top
some R. B1 <= some R. B2
some R. B2 <= some R. B1
)");
  }

  horn_relation
  a0_b0_relation()
  {
    return relation_from_json(R"([{"X": ["a", "d"], "b": "a'"},
                                  {"X": ["e"], "b": "b'"}])",
                              a0(), b0());
  }

  horn_relation
  a1_b1_relation()
  {
    return relation_from_json(R"([{"X": ["a1", "a2"], "b": "b"},
                                  {"X": ["c1"], "b": "e"}, {"X": ["c2"], "b": "e"},
                                  {"X": ["d1"], "b": "f"}, {"X": ["d2"], "b": "f"}])",
                              a1(), b1());
  }

  structure
  ex_guard_a()
  {
    return parse_structure(R"({
      "domain": ["a", "b", "c", "d", "e"],
      "unary": {"B": ["a"], "E": ["b", "c"], "D": ["b"], "A": ["d"]},
      "roles": {"S": [["b", "a"], ["c", "a"]],
                "R": [["b", "d"], ["c", "d"], ["c", "e"]]}
    })");
  }

  structure
  ex_guard_b()
  {
    return parse_structure(R"({
      "domain": ["a'", "b'", "c'", "d'", "e'", "f"],
      "unary": {"B": ["a'"], "E": ["b'", "c'", "f"], "D": ["b'"], "A": ["d'"]},
      "roles": {"S": [["b'", "a'"], ["c'", "a'"], ["f", "a'"]],
                "R": [["b'", "d'"], ["c'", "d'"], ["c'", "e'"], ["f", "d'"]]}
    })");
  }

  tbox
  t_guard()
  {
    return parse_tbox(R"(
E <= some R. top & some S. top
E & all R. A & all S. B <= D
)");
  }

  std::vector<glink>
  ex_guard_links()
  {
    auto a = ex_guard_a();
    auto b = ex_guard_b();
    std::vector<glink> z;
    for (auto& u : a.names())
      z.push_back({{b.at(u + "'")}, {{a.at(u)}}});
    for (auto role : {"R", "S"})
      for (auto& t : a.tuples(role))
        z.push_back({{b.at(a.name(t[0]) + "'"), b.at(a.name(t[1]) + "'")},
                     {{t[0], t[1]}}});
    int f = b.at("f");
    z.push_back({{f}, {{a.at("b")}, {a.at("c")}}});
    z.push_back({{f, b.at("d'")},
                 {{a.at("b"), a.at("d")}, {a.at("c"), a.at("d")}}});
    z.push_back({{f, b.at("a'")},
                 {{a.at("b"), a.at("a")}, {a.at("c"), a.at("a")}}});
    return z;
  }

  std::vector<structure>
  ggg_parts()
  {
    return {parse_structure(R"({"domain": ["a1"], "unary": {"A1": ["a1"], "A2": []}})"),
            parse_structure(R"({"domain": ["a2"], "unary": {"A1": [], "A2": ["a2"]}})")};
  }
}
