// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <hornlog/concept.hh>
#include <hornlog/fixtures.hh>
#include <hornlog/generate.hh>

using namespace hornlog;

namespace
{
  vocabulary
  voc(std::initializer_list<const char*> names, std::initializer_list<const char*> roles)
  {
    vocabulary v;
    for (auto n : names)
      v.add(n, 1);
    for (auto r : roles)
      v.add(r, 2);
    return v;
  }

  // True if c and d have the same extension on every structure with at
  // most max_n elements over v.
  bool
  equivalent_small(const concept_ptr& c, const concept_ptr& d,
                   const vocabulary& v, int max_n)
  {
    bool same = true;
    for (int n = 1; n <= max_n && same; ++n)
      for_each_structure(v, n, true, [&](const structure& s) {
        same = eval_concept(c, s) == eval_concept(d, s);
        return same;
      });
    return same;
  }
}

TEST_CASE("parse and depth")
{
  CHECK(depth(parse_concept("some R. some R. A")) == 2);
  CHECK(depth(parse_concept("A & B")) == 0);
  auto cn = parse_concept("(some R. top & all R. A) -> B");
  CHECK(depth(cn) == 1);
  CHECK(cn->kind == ckind::impl);
  CHECK(cn->kids[0]->kind == ckind::conj);
  CHECK(depth(parse_concept("nabla R. some S. A")) == 2);
  auto r = parse_concept("A -> B -> C");
  CHECK(r->kids[1]->kind == ckind::impl);
  CHECK_THROWS_AS(parse_concept("A &"), parse_error);
  CHECK_THROWS_AS(parse_concept("some . A"), parse_error);
  try
    {
      parse_concept("A ) B");
    }
  catch (const parse_error& e)
    {
      CHECK(e.pos == 2);
    }
}

TEST_CASE("printing round trips")
{
  for (auto txt : {"A", "!(A | B)", "A & (B | C) & D", "(A -> B) -> C",
                   "A -> B -> C", "some R. (A & B)", "all R. !A | nabla S. top",
                   "(A & B) & C", "bot"})
    {
      auto c = parse_concept(txt);
      CHECK(same_concept(parse_concept(to_string(c)), c));
    }
}

TEST_CASE("classification")
{
  auto a = classify(parse_concept("A"));
  CHECK(a.pol_plus == 1);
  CHECK(a.pol_minus == 0);
  CHECK(a.is_p_horn);
  CHECK(a.is_hornALC);
  CHECK(a.is_EL);

  auto cn = classify(fixtures::c_nabla_example());
  CHECK(cn.pol_plus == 2);
  CHECK(!cn.is_p_horn);
  CHECK(!cn.is_hornALC);
  CHECK(!cn.is_hornALC_nabla);
  CHECK(classify(parse_concept("nabla R. A -> B")).is_hornALC_nabla);
  CHECK(!classify(parse_concept("nabla R. A -> B")).is_hornALC);

  auto nh = classify(parse_concept("all R. A -> B"));
  CHECK(nh.is_n_horn);
  CHECK(!nh.is_hornALC);

  auto elu = classify(parse_concept("some R. (A | B)"));
  CHECK(elu.is_ELU);
  CHECK(!elu.is_EL);
  CHECK(classify(parse_concept("nabla R. A")).is_ELU_nabla);
  CHECK(!classify(parse_concept("nabla R. A")).is_ELU);

  auto sh = classify(parse_concept("!A | B"));
  CHECK(sh.is_s_horn);
  CHECK(!sh.is_hornALC);
  CHECK(!classify(parse_concept("A | B")).is_s_horn);
}

TEST_CASE("nnf")
{
  auto n = nnf(fixtures::c_nabla_example());
  CHECK(is_nnf(n));
  CHECK(classify(n).pol_plus == 2);
  CHECK(to_string(n) == "all R. bot | some R. !A | B");
}

TEST_CASE("to_horn")
{
  CHECK(to_string(to_horn(parse_concept("!A | B"))) == "A -> B");
  CHECK(to_string(to_horn(parse_concept("A"))) == "A");
  auto v = voc({"A", "B", "D"}, {"R"});
  auto src = parse_concept("all R. (!A | !B | D)");
  auto h = to_horn(src);
  CHECK(to_string(h) == "all R. (A & B -> D)");
  CHECK(classify(h).is_hornALC);
  CHECK(equivalent_small(src, h, v, 3));
  CHECK_THROWS_AS(to_horn(parse_concept("A | B")), error);
  CHECK_THROWS_AS(to_horn(parse_concept("A -> B")), error);
}

TEST_CASE("to_horn on random p-horn concepts")
{
  auto v = voc({"A", "B"}, {"R"});
  std::vector<structure> fam;
  for (int n = 1; n <= 2; ++n)
    for_each_structure(v, n, false, [&](const structure& s) {
      fam.push_back(s);
      return true;
    });
  auto alc = enum_concepts(fragment::ALC, v, 1, 6, {});
  int tested = 0;
  for (auto& c : alc.concepts)
    {
      auto n = nnf(c);
      if (!classify(n).is_p_horn)
        continue;
      auto h = to_horn(n);
      INFO(to_string(c), " => ", to_string(h));
      CHECK(classify(h).is_hornALC);
      for (auto& s : fam)
        CHECK(eval_concept(h, s) == eval_concept(c, s));
      ++tested;
    }
  CHECK(tested > 0);
}

TEST_CASE("evaluation")
{
  auto a0 = fixtures::a0(), b0 = fixtures::b0();
  auto cn = fixtures::c_nabla_example();
  CHECK(a0.set_of({"a", "d"}).is_subset_of(eval_concept(cn, a0)));
  CHECK(!eval_concept(cn, b0).test(b0.at("a'")));
  CHECK(eval_concept(c_top(), a0) == a0.full_set());
  CHECK(eval_tbox(fixtures::t_horn(), fixtures::a1()));
  CHECK(!eval_tbox(fixtures::t_horn(), fixtures::b1()));
  CHECK_THROWS_AS(eval_concept(parse_concept("Q"), a0), error);
}

TEST_CASE("tbox parsing")
{
  auto t = parse_tbox("# comment\nA <= B # trailing\n\nsome R. A <= bot\n");
  CHECK(t.size() == 2);
  CHECK(depth(t) == 1);
  CHECK_THROWS_AS(parse_tbox("A B"), error);
}

TEST_CASE("characteristic EL concepts")
{
  auto a0 = fixtures::a0();
  CHECK(to_string(char_el(a0, 0, a0.at("c"))) == "A");
  CHECK(char_el(a0, 0, a0.at("b"))->kind == ckind::top);
  CHECK(to_string(char_el(a0, 1, a0.at("a"))) == "some R. top & some R. A");
  CHECK(to_string(char_el(a0, 1, a0.at("d"))) == "B & some R. A");
  CHECK(classify(char_el(a0, 2, a0.at("a"))).is_EL);
  CHECK_THROWS_AS(char_el(a0, 1, 17), error);
}

TEST_CASE("nabla expansion agrees with its definition")
{
  auto v = voc({"A", "B"}, {"R"});
  auto cs = enum_concepts(fragment::ALC, v, 0, 4, {});
  for (auto& c : cs.concepts)
    CHECK(equivalent_small(c_nabla("R", c),
                           c_and({c_some("R", c_top()), c_all("R", c)}), v, 2));
}

TEST_CASE("concept enumeration")
{
  auto v = voc({"A"}, {"R"});
  auto el = enum_concepts(fragment::EL, v, 0, 3, {});
  REQUIRE(el.concepts.size() >= 2);
  std::vector<structure> fam;
  for (int n = 1; n <= 2; ++n)
    for_each_structure(v, n, false, [&](const structure& s) {
      fam.push_back(s);
      return true;
    });
  auto el_d = enum_concepts(fragment::EL, v, 0, 3, fam);
  CHECK(el_d.concepts.size() == 2);

  auto horn = enum_concepts(fragment::hornALC, v, 1, 5, fam);
  std::set<std::string> texts;
  for (auto& c : horn.concepts)
    {
      texts.insert(to_string(c));
      CHECK(classify(c).is_hornALC);
      CHECK(classify(c).pol_plus <= 1);
      CHECK(depth(c) <= 1);
    }
  for (auto want : {"some R. A", "all R. A", "A -> bot", "some R. (A -> bot)"})
    CHECK(texts.count(want) == 1);
  bool has_tautology = false;
  for (auto& c : horn.concepts)
    has_tautology = has_tautology || to_string(c) == "A -> A";
  CHECK(!has_tautology);
}

TEST_CASE("n-horn concept is not preserved under products")
{
  auto v = voc({"A", "B"}, {"R"});
  auto c = parse_concept("all R. A -> B");
  std::vector<structure> small;
  for (int n = 1; n <= 2; ++n)
    for_each_structure(v, n, false, [&](const structure& s) {
      small.push_back(s);
      return true;
    });
  bool found = false;
  for (auto& s1 : small)
    for (auto& s2 : small)
      {
        if (found)
          break;
        auto p = product({s1, s2});
        auto e1 = eval_concept(c, s1), e2 = eval_concept(c, s2);
        auto ep = eval_concept(c, p.s);
        for (std::size_t x = 0; x < p.s.size(); ++x)
          if (e1.test(p.comp[x][0]) && e2.test(p.comp[x][1]) && !ep.test(x))
            found = true;
      }
  CHECK(found);

  // Pinned witness: x1 has a successor outside A, x2 is an isolated B.
  auto s1 = parse_structure(R"({"domain":["x1","y1"],"unary":{"A":[],"B":[]},"roles":{"R":[["x1","y1"]]}})");
  auto s2 = parse_structure(R"({"domain":["x2"],"unary":{"A":[],"B":["x2"]},"roles":{"R":[]}})");
  CHECK(eval_concept(c, s1).test(0));
  CHECK(eval_concept(c, s2).test(0));
  auto p = product({s1, s2});
  CHECK(!eval_concept(c, p.s).test(p.s.at("(x1,x2)")));
}
