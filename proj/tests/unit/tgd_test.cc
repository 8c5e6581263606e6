// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <hornlog/generate.hh>
#include <hornlog/tgd.hh>

using namespace hornlog;

namespace
{
  vocabulary
  vocab_er()
  {
    vocabulary v;
    v.add("E", 1);
    v.add("A", 1);
    v.add("R", 2);
    return v;
  }

  structure
  db_ec()
  {
    return parse_structure(R"j({"domain":["c"],"unary":{"E":["c"],"A":[]},
                               "roles":{"R":[]}})j");
  }

  const char* some_r = "forall x . (E(x) -> exists y : R(x,y) . top)";

  // Chase-based consistency against direct evaluation on every structure
  // with at most max_n elements: a model of the sentence is never refuted
  // by the chase, and a terminating chase yields a model of the sentence.
  void
  check_against_chase(const gf_ptr& f, const vocabulary& v, int max_n)
  {
    auto sigma = horngf_to_tgds(f);
    for (auto& t : sigma)
      CHECK(is_guarded(t));
    for (int n = 1; n <= max_n; ++n)
      for_each_structure(v, n, true, [&](const structure& s) {
        bool holds = eval_gf(f, s);
        auto c = chase(s, sigma, 400);
        if (holds)
          CHECK(c.state != chase_result::status::inconsistent);
        if (c.state == chase_result::status::model)
          {
            CHECK(satisfies(c.s, sigma));
            CHECK(eval_gf(f, chase_reduct(c.s, v)));
          }
        return true;
      });
  }
}

TEST_CASE("atoms and rules print and parse")
{
  auto a = parse_atom(" R(x, y) ");
  CHECK(a.pred == "R");
  CHECK(a.args == std::vector<std::string>{"x", "y"});
  CHECK(to_string(parse_atom("x = y")) == "x=y");
  CHECK(to_string(parse_atom("P()")) == "P()");
  CHECK_THROWS_AS(parse_atom("R(x,"), parse_error);
  CHECK_THROWS_AS(parse_atom("xy"), parse_error);
  auto sigma = parse_tgds(R"j([{"body":["E(x)"],"head":["R(x,y)"],"exist":["y"]},
                              {"body":["R(x,y)","A(y)"],"head":[]}])j");
  REQUIRE(sigma.size() == 2);
  CHECK(to_string(sigma[0]) == "E(x) -> exists y . R(x,y)");
  CHECK(to_string(sigma[1]) == "R(x,y) & A(y) -> bot");
  CHECK(parse_tgds(tgds_to_json(sigma)) == sigma);
  CHECK(is_guarded(sigma[1]));
  CHECK(tgd_guard(sigma[1]) == 0);
  tgd cross{{parse_atom("A(x)"), parse_atom("A(y)")}, {parse_atom("R(x,y)")}, {}};
  CHECK(!is_guarded(cross));
  CHECK_THROWS_AS(parse_tgds(R"j([{"body":["E(x)"],"head":["R(x,y)"]}])j"), error);
  CHECK_THROWS_AS(parse_tgds(R"j([{"body":["E(x)"],"head":["R(x,y)"],"exist":["x","y"]}])j"),
                  error);
  CHECK_THROWS_AS(parse_tgds("{"), error);
}

TEST_CASE("a hornGF sentence becomes guarded rules")
{
  auto sigma = horngf_to_tgds(parse_gf(some_r));
  for (auto& t : sigma)
    {
      CHECK(is_guarded(t));
      CHECK_NOTHROW(validate(t));
    }
  REQUIRE(!sigma.empty());
  CHECK(sigma[0].body.empty());
  bool introduces_r = false;
  for (auto& t : sigma)
    for (auto& h : t.head)
      introduces_r = introduces_r || h.pred == "R";
  CHECK(introduces_r);
  CHECK_THROWS_AS(horngf_to_tgds(parse_gf("A(x)")), error);
  CHECK_THROWS_AS(horngf_to_tgds(parse_gf("forall x . (A(x) | B(x))")), error);
  CHECK_THROWS_AS(horngf_to_tgds(parse_gf("forall x . __sub/1(x)")), error);
}

TEST_CASE("chase of a single existential rule")
{
  auto sigma = horngf_to_tgds(parse_gf(some_r));
  auto c = chase(db_ec(), sigma);
  REQUIRE(c.state == chase_result::status::model);
  CHECK(c.nulls == 1);
  auto red = chase_reduct(c.s, vocab_er());
  CHECK(red.size() == 2);
  CHECK(red.holds("R", {red.at("c"), red.at("_n1")}));
  auto q = parse_cq(R"j({"answer":["x"],"body":["R(x,y)"]})j");
  auto ans = certain_answers(q, db_ec(), sigma);
  REQUIRE(ans.state == certain_result::status::answers);
  REQUIRE(ans.tuples.size() == 1);
  CHECK(ans.tuples[0] == std::vector<std::string>{"c"});
  auto nulls = parse_cq(R"j({"answer":["y"],"body":["R(x,y)"]})j");
  CHECK(certain_answers(nulls, db_ec(), sigma).tuples.empty());
  CHECK_THROWS_AS(parse_cq(R"j({"answer":["z"],"body":["R(x,y)"]})j"), error);
}

TEST_CASE("chase without rules returns the database")
{
  auto db = db_ec();
  auto c = chase(db, {});
  CHECK(c.state == chase_result::status::model);
  CHECK(c.steps == 0);
  CHECK(c.s.size() == db.size());
  CHECK(c.s.tuples("E") == db.tuples("E"));
}

TEST_CASE("chase reports inconsistency and the step cap")
{
  auto bot = parse_tgds(R"j([{"body":["E(x)"],"head":[]}])j");
  CHECK(chase(db_ec(), bot).state == chase_result::status::inconsistent);
  auto q = parse_cq(R"j({"answer":[],"body":["E(x)"]})j");
  CHECK(certain_answers(q, db_ec(), bot).state
        == certain_result::status::inconsistent);
  auto endless = parse_tgds(R"j([{"body":["E(x)"],"head":["R(x,y)","E(y)"],"exist":["y"]}])j");
  CHECK(chase(db_ec(), endless, 50).state == chase_result::status::cap_exceeded);
  CHECK(certain_answers(q, db_ec(), endless, 50).state
        == certain_result::status::unknown);
}

TEST_CASE("translated rules agree with the sentence on small structures")
{
  for (auto txt : {some_r,
                   "forall x . (E(x) -> A(x))",
                   "forall x y : R(x,y) . (A(x) -> A(y))",
                   "forall x . ((E(x) & exists y : R(x,y) . A(y)) -> bot)",
                   "forall x . (exists y : R(x,y) . (A(y) | E(y)) -> A(x))",
                   "forall x . (E(x) -> exists y : R(x,y) . (A(y) & "
                   "forall z : R(y,z) . E(z)))",
                   "exists x : E(x) . top",
                   "forall x . (E(x) -> exists y : R(x,y) . x = y)",
                   "forall x y : R(x,y) . (A(y) -> x = y)"})
    {
      CAPTURE(txt);
      check_against_chase(parse_gf(txt), vocab_er(), 2);
    }
}

TEST_CASE("equality in heads becomes a congruence")
{
  auto f = parse_gf("forall x y : R(x,y) . x = y");
  auto sigma = horngf_to_tgds(f);
  bool uses_e = false;
  for (auto& t : sigma)
    {
      CHECK(is_guarded(t));
      for (auto& a : t.head)
        {
          CHECK(a.pred != "=");
          uses_e = uses_e || a.pred == "__E";
        }
    }
  CHECK(uses_e);
  auto db = parse_structure(R"j({"domain":["c","d"],"unary":{"E":[],"A":["d"]},
                                "roles":{"R":[["c","d"]]}})j");
  auto c = chase(db, sigma);
  REQUIRE(c.state == chase_result::status::model);
  auto red = chase_reduct(c.s, vocab_er());
  CHECK(red.size() == 1);
  CHECK(eval_gf(f, red));
  CHECK(red.unary("A").count() == 1);
}

TEST_CASE("guarded rules become hornGF sentences")
{
  auto sigma = parse_tgds(R"j([{"body":["R(x,y)","A(y)"],"head":["E(x)"]}])j");
  auto f = tgds_to_horngf(sigma);
  CHECK(classify_gf(f).is_horn_gf);
  CHECK(free_vars(f).empty());
  REQUIRE(f->kind == gkind::conj);
  CHECK(f->kids.size() == 2);
  CHECK(to_string(parse_gf(to_string(f))) == to_string(f));
  auto neg = tgds_to_horngf(parse_tgds(R"j([{"body":["E(x)"],"head":[]}])j"));
  CHECK(classify_gf(neg).is_horn_gf);
  CHECK(to_string(neg).find("bot") != std::string::npos);
  tgd cross{{parse_atom("A(x)"), parse_atom("A(y)")}, {parse_atom("R(x,y)")}, {}};
  CHECK_THROWS_AS(tgds_to_horngf({cross}), error);
}

TEST_CASE("rule sets and their sentences agree on satisfaction")
{
  auto sigma = parse_tgds(R"j([
    {"body":["E(x)"],"head":["R(x,y)","A(y)"],"exist":["y"]},
    {"body":["R(x,y)","E(y)"],"head":["A(x)"]},
    {"body":["R(x,x)"],"head":[]},
    {"body":[],"head":["E(z)"],"exist":["z"]}])j");
  auto f = tgds_to_horngf(sigma);
  REQUIRE(classify_gf(f).is_horn_gf);
  auto full = vocab_er();
  full.merge(gf_vocab(f));
  rng_t rng(9);
  for (int i = 0; i < 300; ++i)
    {
      auto s = random_structure(full, 1 + i % 3, 0.35, rng);
      if (eval_gf(f, s))
        CHECK(satisfies(s, sigma));
    }
  for (int n = 1; n <= 2; ++n)
    for_each_structure(vocab_er(), n, false, [&](const structure& s) {
      if (!satisfies(s, sigma))
        return true;
      // Witness relations: every tuple satisfying the rule head.
      structure e = s;
      e.extend_vocab(gf_vocab(f));
      for (std::size_t r = 0; r < sigma.size(); ++r)
        {
          std::string aux = "__aux/" + std::to_string(r + 1);
          int k = e.vocab().has(aux) ? e.vocab().arity.at(aux) : -1;
          if (k < 0)
            continue;
          tuple_t t(k, 0);
          for (;;)
            {
              std::map<std::string, int> env;
              const auto& head = sigma[r].head;
              std::vector<std::string> vars;
              for (auto& a : sigma[r].body)
                for (auto& v : a.args)
                  if (std::find(vars.begin(), vars.end(), v) == vars.end())
                    for (auto& h : head)
                      if (std::find(h.args.begin(), h.args.end(), v) != h.args.end())
                        {
                          vars.push_back(v);
                          break;
                        }
              for (auto& z : sigma[r].exist)
                vars.push_back(z);
              for (int j = 0; j < k; ++j)
                env[vars[j]] = t[j];
              std::vector<gf_ptr> hs;
              for (auto& h : head)
                hs.push_back(g_atom(h.pred, h.args));
              if (eval_gf(g_and(hs), e, env))
                e.add_fact(aux, t);
              int j = k - 1;
              while (j >= 0 && ++t[j] == static_cast<int>(e.size()))
                t[j--] = 0;
              if (j < 0)
                break;
            }
        }
      CHECK(eval_gf(f, e));
      return true;
    });
}
