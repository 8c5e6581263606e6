// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <hornlog/decide.hh>
#include <hornlog/fixtures.hh>
#include <hornlog/generate.hh>

using namespace hornlog;

namespace
{
  vocabulary
  vocab_ab_r()
  {
    vocabulary v;
    v.add("A", 1);
    v.add("B", 1);
    v.add("R", 2);
    return v;
  }

  horn_options
  naive(int ell = -1)
  {
    horn_options o;
    o.engine = horn_engine::naive;
    o.ell = ell;
    o.witness = false;
    return o;
  }

  // Some nonempty subset X0 of X is Horn simulated by y.
  bool
  some_subset_hornsim(const structure& a, const elem_set& x,
                      const structure& b, int y, int ell)
  {
    auto members = elems_of(x);
    std::size_t k = members.size();
    for (std::size_t m = 1; m < (std::size_t(1) << k); ++m)
      {
        elem_set x0(a.size());
        for (std::size_t i = 0; i < k; ++i)
          if (m >> i & 1)
            x0.set(members[i]);
        if (hornsim(a, x0, b, y, naive(ell)).holds)
          return true;
      }
    return false;
  }

  // A concept from the list holding on all of X and failing at y.
  bool
  enumerated_separator_exists(const std::vector<concept_ptr>& cs,
                              const structure& a, const elem_set& x,
                              const structure& b, int y)
  {
    for (auto& c : cs)
      if (x.is_subset_of(eval_concept(c, a)) && !eval_concept(c, b).test(y))
        return true;
    return false;
  }
}

TEST_CASE("entailment on the A0/B0 pair")
{
  auto a = fixtures::a0();
  auto b = fixtures::b0();
  CHECK(entails_set(a, a.set_of({"a", "d"}), b, b.at("a'")));
  CHECK(!entails(a, a.at("a"), b, b.at("a'")));
  CHECK(entails(a, a.at("a"), b, b.at("a'"), 0));
  CHECK(canonical_filter(a, a.full_set(), b, b.at("a'")) == a.set_of({"a", "d"}));
  CHECK_THROWS_AS(entails_set(a, a.empty_set(), b, 0), error);
}

TEST_CASE("separator for a single element of A0")
{
  auto a = fixtures::a0();
  auto b = fixtures::b0();
  for (int ell : {1, -1})
    {
      auto x = a.set_of({"a"});
      auto r = synthesize_separator(a, x, b, b.at("a'"), ell);
      REQUIRE(r.concept_value);
      CHECK(r.verified);
      CHECK(classify(r.concept_value).is_hornALC);
      if (ell >= 0)
        CHECK(depth(r.concept_value) <= ell);
      CHECK(x.is_subset_of(eval_widened(r.concept_value, a)));
      CHECK(!eval_widened(r.concept_value, b).test(b.at("a'")));
    }
  auto none = synthesize_separator(a, a.set_of({"a", "d"}), b, b.at("a'"));
  CHECK(!none.concept_value);
}

TEST_CASE("concept learning on the union of A0 and B0")
{
  auto u = disjoint_union({fixtures::a0(), fixtures::b0()}, true);
  auto hard = make_cbe(u.s, {"a", "d"}, {"a'"});
  CHECK(!cbe(hard));
  CHECK(!cbe_separator(hard).concept_value);
  auto easy = make_cbe(u.s, {"a"}, {"a'"});
  CHECK(cbe(easy));
  auto sep = cbe_separator(easy, 1);
  REQUIRE(sep.concept_value);
  CHECK(sep.verified);
  CHECK_THROWS_AS(make_cbe(u.s, {"a"}, {"a"}), error);
}

TEST_CASE("label separates positives from negatives")
{
  auto s = parse_structure(R"({"domain":["p","q","n"],"unary":{"A":["p","q"]}})");
  auto inst = make_cbe(s, {"p", "q"}, {"n"});
  CHECK(cbe(inst, 0));
  auto r = cbe_separator(inst, 0);
  REQUIRE(r.concept_value);
  CHECK(to_string(r.concept_value) == "A");
}

TEST_CASE("CBE instances parse from JSON")
{
  auto inst = parse_cbe(R"({"structure":{"domain":["p","n"],"unary":{"A":["p"]}},
                            "positives":["p"],"negatives":["n"]})");
  CHECK(inst.positives.count() == 1);
  CHECK(cbe(inst));
  CHECK_THROWS_AS(parse_cbe("{\"structure\":1}"), error);
  CHECK_THROWS_AS(parse_cbe("not json"), error);
}

TEST_CASE("entailment matches a nonempty subset being Horn simulated")
{
  rng_t rng(404);
  for (int i = 0; i < 300; ++i)
    {
      auto a = random_structure(vocab_ab_r(), 1 + i % 4, 0.4, rng);
      auto b = random_structure(vocab_ab_r(), 1 + (i / 4) % 3, 0.4, rng);
      auto x = random_nonempty_subset(a, rng);
      int y = static_cast<int>(rng() % b.size());
      int ell = static_cast<int>(i % 3) - 1;
      CHECK(entails_set(a, x, b, y, ell) == some_subset_hornsim(a, x, b, y, ell));
    }
}

TEST_CASE("entailment agrees with enumerated concepts and synthesized separators")
{
  rng_t rng(77);
  for (int i = 0; i < 150; ++i)
    {
      auto a = random_structure(vocab_ab_r(), 1 + i % 3, 0.4, rng);
      auto b = random_structure(vocab_ab_r(), 1 + (i / 3) % 3, 0.4, rng);
      auto x = random_nonempty_subset(a, rng);
      int y = static_cast<int>(rng() % b.size());
      int ell = i % 3;
      auto cs = enum_concepts(fragment::hornALC, vocab_ab_r(), ell, 5, {a, b});
      if (entails_set(a, x, b, y, ell))
        CHECK(!enumerated_separator_exists(cs.concepts, a, x, b, y));
      else
        {
          auto r = synthesize_separator(a, x, b, y, ell);
          REQUIRE(r.concept_value);
          CHECK(r.verified);
          CHECK(depth(r.concept_value) <= ell);
        }
    }
}

TEST_CASE("TBox entailment on the A1/B1 pair")
{
  auto a = fixtures::a1();
  auto b = fixtures::b1();
  CHECK(tbox_entails(a, b));
  CHECK(!tbox_entails(b, a));
  CHECK(eval_tbox(fixtures::t_horn(), a));
}

TEST_CASE("Horn simulation reduces to pointed entailment")
{
  rng_t rng(55);
  for (int i = 0; i < 200; ++i)
    {
      auto a = random_structure(vocab_ab_r(), 1 + i % 4, 0.4, rng);
      auto b = random_structure(vocab_ab_r(), 1 + (i / 4) % 3, 0.4, rng);
      auto x = random_nonempty_subset(a, rng);
      int y = static_cast<int>(rng() % b.size());
      auto red = reduce_hornsim_to_entailment(a, b, x, y);
      CHECK(some_subset_hornsim(a, x, b, y, -1)
            == entails(red.a, red.x, red.b, red.y));
      int ell = i % 3;
      CHECK(some_subset_hornsim(a, x, b, y, ell)
            == entails(red.a, red.x, red.b, red.y, ell + 1));
    }
}

TEST_CASE("pointed entailment reduces to equivalence")
{
  rng_t rng(56);
  for (int i = 0; i < 200; ++i)
    {
      auto a = random_structure(vocab_ab_r(), 1 + i % 4, 0.4, rng);
      auto b = random_structure(vocab_ab_r(), 1 + (i / 4) % 3, 0.4, rng);
      int x = static_cast<int>(rng() % a.size());
      int y = static_cast<int>(rng() % b.size());
      auto red = reduce_entailment_to_equivalence(a, b, x, y);
      CHECK(entails(a, x, b, y) == equiv(red.s, red.x, red.s, red.y));
      int ell = i % 3;
      CHECK(entails(a, x, b, y, ell) == equiv(red.s, red.x, red.s, red.y, ell + 1));
    }
}

TEST_CASE("model search and subsumption")
{
  auto unsat = parse_concept("some R. A & all R. !A");
  CHECK(!find_model(unsat));
  auto c = parse_concept("some R. (A & some S. B) & !A");
  auto m = find_model(c);
  REQUIRE(m);
  CHECK(eval_widened(c, m->s).test(m->root));
  CHECK(subsumed(parse_concept("A & B"), parse_concept("A")));
  CHECK(!subsumed(parse_concept("A"), parse_concept("A & B")));
  CHECK(equivalent(parse_concept("!A | B"), parse_concept("A -> B")));
  CHECK(equivalent(parse_concept("some R. top & all R. A"),
                   parse_concept("nabla R. A")));
}

TEST_CASE("model search agrees with small structures")
{
  rng_t rng(8);
  auto cs = enum_concepts(fragment::ALC, vocab_ab_r(), 1, 5, {});
  for (std::size_t i = 0; i < cs.concepts.size(); i += 3)
    {
      auto& c = cs.concepts[i];
      auto m = find_model(c);
      if (m)
        CHECK(eval_widened(c, m->s).test(m->root));
      else
        for (int n = 1; n <= 2; ++n)
          for_each_structure(vocab_ab_r(), n, false, [&](const structure& s) {
            CHECK(eval_concept(c, s).none());
            return true;
          });
    }
}

TEST_CASE("Horn expressibility at small depth")
{
  CHECK(horn_expressible(parse_concept("A"), 0).verdict == expressible::yes);
  auto r = horn_expressible(parse_concept("!A | B"), 0);
  CHECK(r.verdict == expressible::yes);
  REQUIRE(r.horn);
  CHECK(classify(r.horn).is_hornALC);
  auto c = fixtures::c_nabla_example();
  auto n = horn_expressible(c, 1);
  REQUIRE(n.verdict == expressible::no);
  CHECK(n.x.is_subset_of(eval_widened(c, n.a)));
  CHECK(!eval_widened(c, n.b).test(n.y));
  horn_options o;
  o.ell = 1;
  CHECK(hornsim(n.a, n.x, n.b, n.y, o).holds);
  CHECK_THROWS_AS(horn_expressible(c, 0), error);
}
