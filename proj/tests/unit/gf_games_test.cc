// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <hornlog/fixtures.hh>
#include <hornlog/generate.hh>
#include <hornlog/gf_games.hh>

using namespace hornlog;

namespace
{
  vocabulary
  vocab_a_r()
  {
    vocabulary v;
    v.add("A", 1);
    v.add("R", 2);
    return v;
  }

  ghsim_options
  rounds(int ell)
  {
    ghsim_options o;
    o.ell = ell;
    return o;
  }

  // hornGF formulas in one free variable x over A/1 and R/2.
  std::vector<gf_ptr>
  horn_probes()
  {
    std::vector<gf_ptr> out;
    for (auto txt : {"A(x)", "R(x,x)", "exists y : R(x,y) . A(y)",
                     "forall y : R(x,y) . A(y)",
                     "exists y : R(x,y) . (A(y) -> A(x))",
                     "exists y : R(y,x) . (A(y) & R(y,y))",
                     "(exists y : R(x,y) . A(y)) -> A(x)",
                     "forall y : R(x,y) . exists z : R(y,z) . z = y",
                     "exists y : A(y) . top", "forall y . A(y)",
                     "forall y : R(y,x) . (A(y) -> bot)",
                     "exists y : R(x,y) . forall z : R(y,z) . (A(z) -> A(y))"})
      out.push_back(parse_gf(txt));
    return out;
  }
}

TEST_CASE("guarded simulation basics")
{
  auto a = fixtures::ex_guard_a();
  auto b = fixtures::ex_guard_b();
  for (auto& u : a.names())
    CHECK(gsim(a, {a.at(u)}, b, {b.at(u + "'")}));
  CHECK(gsim(b, {b.at("f")}, a, {a.at("c")}));
  CHECK(gsim(b, {b.at("f")}, a, {a.at("b")}));
  CHECK(!gsim(a, {a.at("b")}, b, {b.at("f")}));
  CHECK(gsim(a, {a.at("b"), a.at("d")}, b, {b.at("b'"), b.at("d'")}));
  CHECK(!gsim(a, {a.at("b"), a.at("d")}, b, {b.at("d'"), b.at("b'")}));
  CHECK(!gsim(a, {a.at("b"), a.at("b")}, b, {b.at("b'"), b.at("d'")}));
  CHECK_THROWS_AS(gsim(a, {a.at("b"), a.at("e")}, b, {b.at("b'"), b.at("e'")}),
                  error);
  CHECK_THROWS_AS(gsim(a, {a.at("b")}, b, {b.at("b'"), b.at("d'")}), error);
}

TEST_CASE("guarded simulation stages are monotone")
{
  rng_t rng(31);
  for (int i = 0; i < 100; ++i)
    {
      auto a = random_structure(vocab_a_r(), 1 + i % 3, 0.4, rng);
      auto b = random_structure(vocab_a_r(), 1 + (i / 3) % 3, 0.4, rng);
      int x = static_cast<int>(rng() % a.size());
      int y = static_cast<int>(rng() % b.size());
      bool prev = true;
      for (int ell = 0; ell <= 3; ++ell)
        {
          bool now = gsim(a, {x}, b, {y}, ell);
          CHECK((!now || prev));
          prev = now;
        }
      if (gsim(a, {x}, b, {y}))
        CHECK(prev);
    }
}

TEST_CASE("identity links are winning")
{
  rng_t rng(5);
  for (int i = 0; i < 40; ++i)
    {
      auto s = random_structure(vocab_a_r(), 1 + i % 4, 0.4, rng);
      auto gs = guarded_tuples(s, 2);
      auto& t = gs[rng() % gs.size()];
      CHECK(ghsim(s, {t}, s, t).holds);
      CHECK(global_ghsim(s, s).holds);
      std::vector<glink> id;
      for (auto& g : gs)
        id.push_back({g, {g}});
      CHECK(check_ghsim_relation(id, s, s).ok);
    }
}

TEST_CASE("the printed links at f fail the forth condition")
{
  auto a = fixtures::ex_guard_a();
  auto b = fixtures::ex_guard_b();
  auto r = check_ghsim_relation(fixtures::ex_guard_links(), a, b);
  CHECK(!r.ok);
  CHECK(r.violation.find("(forth)") != std::string::npos);
  CHECK(!global_ghsim(a, b).holds);
  CHECK(!ghsim(a, {{a.at("b")}, {a.at("c")}}, b, {b.at("f")}).holds);
  // The failing move is answered once f is dropped from the targets.
  std::vector<glink> without_f;
  for (auto& l : fixtures::ex_guard_links())
    if (std::find(l.target.begin(), l.target.end(), b.at("f")) == l.target.end())
      without_f.push_back(l);
  auto r2 = check_ghsim_relation(without_f, a, b);
  CHECK(!r2.ok);
  CHECK(r2.violation.find("(back)") != std::string::npos);
}

TEST_CASE("one-element parts and their product")
{
  auto parts = fixtures::ggg_parts();
  auto prod = product(parts);
  REQUIRE(prod.s.size() == 1);
  auto u = disjoint_union(parts, true);
  std::vector<glink> z{{{0}, {{u.s.at("a1")}, {u.s.at("a2")}}}};
  CHECK(check_generalized_ghsim(parts, z, prod.s).ok);
  auto plain = check_ghsim_relation(z, u.s, prod.s);
  CHECK(!plain.ok);
  CHECK(plain.violation.find("(forth)") != std::string::npos);
  CHECK(!global_ghsim(u.s, prod.s).holds);
}

TEST_CASE("product links form a generalized simulation")
{
  rng_t rng(12);
  for (int i = 0; i < 30; ++i)
    {
      std::vector<structure> parts;
      for (int j = 0; j < 2; ++j)
        {
          auto p = random_structure(vocab_a_r(), 1 + (i + j) % 2, 0.5, rng);
          structure named(p.vocab());
          for (std::size_t e = 0; e < p.size(); ++e)
            named.add_element("p" + std::to_string(j) + "_" + std::to_string(e));
          for (auto& [pred, k] : p.vocab().arity)
            for (auto& t : p.tuples(pred))
              named.add_fact(pred, t);
          parts.push_back(named);
        }
      auto prod = product(parts);
      auto u = disjoint_union(parts, true);
      std::vector<glink> z;
      for (auto& t : guarded_tuples(prod.s, 2))
        {
          glink l{t, {}};
          for (std::size_t j = 0; j < parts.size(); ++j)
            {
              tuple_t img;
              for (int e : t)
                img.push_back(u.embed[j][prod.comp[e][j]]);
              l.images.push_back(img);
            }
          z.push_back(l);
        }
      auto r = check_generalized_ghsim(parts, z, prod.s);
      CHECK_MESSAGE(r.ok, r.violation);
    }
}

TEST_CASE("bounded guarded Horn simulation is monotone in the rounds")
{
  rng_t rng(77);
  for (int i = 0; i < 80; ++i)
    {
      auto a = random_structure(vocab_a_r(), 1 + i % 3, 0.4, rng);
      auto b = random_structure(vocab_a_r(), 1 + (i / 3) % 3, 0.4, rng);
      std::vector<tuple_t> x;
      for (std::size_t e = 0; e < a.size(); ++e)
        if (rng() % 2)
          x.push_back({static_cast<int>(e)});
      if (x.empty())
        x.push_back({0});
      tuple_t y{static_cast<int>(rng() % b.size())};
      bool prev = true;
      for (int ell = 0; ell <= 2; ++ell)
        {
          bool now = ghsim(a, x, b, y, rounds(ell)).holds;
          CHECK((!now || prev));
          prev = now;
        }
      if (ghsim(a, x, b, y).holds)
        CHECK(prev);
    }
}

TEST_CASE("guarded Horn simulation preserves hornGF formulas")
{
  rng_t rng(2024);
  auto probes = horn_probes();
  int positive = 0;
  for (int i = 0; i < 600; ++i)
    {
      auto a = random_structure(vocab_a_r(), 1 + i % 3, 0.4, rng);
      auto b = random_structure(vocab_a_r(), 1 + (i / 3) % 3, 0.4, rng);
      std::vector<tuple_t> x;
      for (std::size_t e = 0; e < a.size(); ++e)
        if (rng() % 2)
          x.push_back({static_cast<int>(e)});
      if (x.empty())
        x.push_back({0});
      int y = static_cast<int>(rng() % b.size());
      auto v = ghsim(a, x, b, {y});
      if (!v.holds)
        continue;
      ++positive;
      for (auto& f : probes)
        {
          bool all = true;
          for (auto& t : v.filtered)
            all = all && eval_gf(f, a, {{"x", t[0]}});
          if (all)
            CHECK_MESSAGE(eval_gf(f, b, {{"x", y}}), to_string(f));
        }
    }
  CHECK(positive > 10);
}

TEST_CASE("links round trip through JSON")
{
  auto a = fixtures::ex_guard_a();
  auto b = fixtures::ex_guard_b();
  auto z = fixtures::ex_guard_links();
  CHECK(links_from_json(links_to_json(z, a, b), a, b) == z);
  CHECK_THROWS_AS(links_from_json("[{\"target\":[\"zz\"],\"images\":[]}]", a, b),
                  error);
  CHECK_THROWS_AS(links_from_json("nope", a, b), error);
}

TEST_CASE("guarded game inputs are validated")
{
  auto a = fixtures::ex_guard_a();
  auto b = fixtures::ex_guard_b();
  CHECK_THROWS_AS(ghsim(a, {}, b, {0}), error);
  CHECK_THROWS_AS(ghsim(a, {{a.at("b"), a.at("e")}}, b, {b.at("b'"), b.at("d'")}),
                  error);
  CHECK_THROWS_AS(ghsim(a, {{0}}, b, {b.at("b'"), b.at("e'")}), error);
  ghsim_options tiny;
  tiny.dom_cap = 3;
  CHECK_THROWS_AS(ghsim(a, {{0}}, b, {0}, tiny), cap_exceeded);
  auto empty = ghsim(a, {{a.at("a")}}, b, {b.at("f")});
  CHECK(!empty.holds);
  CHECK(empty.filtered.empty());
}
