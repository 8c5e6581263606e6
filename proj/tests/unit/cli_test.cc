// SPDX-License-Identifier: MIT
#include <doctest.h>

#include "cli.hh"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{
  struct run_output
  {
    int code;
    std::string out, err;
  };

  run_output
  run(std::vector<std::string> args)
  {
    args.insert(args.begin(), "hornlog");
    std::vector<const char*> argv;
    for (auto& a : args)
      argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = hornlog::run_cli(static_cast<int>(argv.size()), argv.data(),
                                out, err);
    return {code, out.str(), err.str()};
  }

  /// Example files written once per process into a temporary directory.
  const fs::path&
  examples()
  {
    static const fs::path dir = [] {
      fs::path d = fs::temp_directory_path()
                   / ("hornlog_cli_test_" + std::to_string(::getpid()));
      fs::create_directories(d);
      auto r = run({"--examples", d.string()});
      REQUIRE(r.code == 0);
      std::ofstream(d / "single.json")
        << R"({"domain":["x"]})" << "\n";
      return d;
    }();
    return dir;
  }

  std::string
  ex(const std::string& name)
  {
    return (examples() / name).string();
  }
}

TEST_CASE("cli: A0 is Horn simulated by B0 from {a,d} to a'")
{
  auto r = run({"hornsim", ex("a0.json"), ex("b0.json"), "--X", "a,d", "--b",
                "a'"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: true") != std::string::npos);
}

TEST_CASE("cli: a one-element structure simulates itself")
{
  auto r = run({"hornsim", ex("single.json"), ex("single.json"), "--X", "x",
                "--b", "x"});
  CHECK(r.code == 0);
}

TEST_CASE("cli: no separator exists in the union of A0 and B0")
{
  auto r = run({"cbe", ex("a0_b0_union.json"), "--P", "a,d", "--b-neg", "a'",
                "--witness"});
  CHECK(r.code == 1);
  CHECK(r.out.find("no separator exists") != std::string::npos);
}

TEST_CASE("cli: JSON output carries verdict, witness and stats")
{
  auto r = run({"hornsim", ex("a0.json"), ex("b0.json"), "--X", "a,d", "--b",
                "a'", "--witness", "--json"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["verdict"] == true);
  CHECK(j["witness"].is_array());
  for (auto key : {"positions", "rounds", "millis"})
    CHECK(j["stats"].contains(key));
}

TEST_CASE("cli: the bundled relations pass the checker")
{
  CHECK(run({"check-relation", ex("a0.json"), ex("b0.json"),
             ex("a0_b0_relation.json")})
          .code
        == 0);
  CHECK(run({"check-relation", ex("a1.json"), ex("b1.json"),
             ex("a1_b1_relation.json")})
          .code
        == 0);
}

TEST_CASE("cli: a false entailment comes with a verified separator")
{
  auto r = run({"entail", ex("b0.json"), ex("a0.json"), "--X", "a'", "--b",
                "a", "--witness", "--json"});
  REQUIRE(r.code == 1);
  auto j = json::parse(r.out);
  CHECK(j["verdict"] == false);
  CHECK(j["separator_verified"] == true);
}

TEST_CASE("cli: eval reports extensions and TBox truth")
{
  auto r = run({"eval", ex("a0.json"), "--concept", "top", "--at", "a", "--json"});
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["answers"].size() == 5);
  CHECK(run({"eval", ex("a1.json"), "--tbox", ex("t_horn.txt")}).code == 0);
  CHECK(run({"eval", ex("b1.json"), "--tbox", ex("t_horn.txt")}).code == 1);
}

TEST_CASE("cli: machine verbs agree with the zoo")
{
  CHECK(run({"atm-accepts", ex("atm_accept-now.json")}).code == 0);
  CHECK(run({"atm-accepts", ex("atm_reject-now.json")}).code == 1);
  auto g = run({"gen-hardness", ex("atm_accept-now.json")});
  REQUIRE(g.code == 0);
  auto j = json::parse(g.out);
  for (auto key : {"A", "B", "X", "b"})
    CHECK(j.contains(key));
}

TEST_CASE("cli: constructors emit structures")
{
  auto u = run({"union", ex("a0.json"), ex("b0.json")});
  REQUIRE(u.code == 0);
  CHECK(json::parse(u.out)["domain"].size() == 7);
  auto p = run({"product", ex("single.json"), ex("a0.json")});
  REQUIRE(p.code == 0);
  CHECK(json::parse(p.out)["domain"].size() == 5);
  auto t = run({"unravel", ex("a0.json"), "--root", "a", "--depth", "0"});
  REQUIRE(t.code == 0);
  CHECK(json::parse(t.out)["domain"].size() == 1);
}

TEST_CASE("cli: both translation directions produce their artifacts")
{
  auto r = run({"translate-horngf",
                R"j([{"body":["A(x)"],"exist":["y"],"head":["R(x,y)","B(y)"]}])j"});
  CHECK(r.code == 0);
  CHECK(r.out.find("forall x : A(x)") != std::string::npos);
  auto t = run({"translate-tgd", "--gf",
                "forall x . (A(x) -> exists y : R(x,y) . B(y))"});
  REQUIRE(t.code == 0);
  CHECK(json::parse(t.out).is_array());
}

TEST_CASE("cli: usage and input errors exit with 2, caps with 3")
{
  CHECK(run({"hornsim"}).code == 2);
  CHECK(run({"no-such-verb"}).code == 2);
  CHECK(run({"hornsim", ex("a0.json"), ex("b0.json"), "--X", "zz", "--b",
             "a'"})
          .code
        == 2);
  CHECK(run({"eval", "/nonexistent.json", "--concept", "A"}).code == 2);
  CHECK(run({"product", ex("a0.json"), ex("a0.json"), ex("a0.json"),
             ex("a0.json"), "--cap", "10"})
          .code
        == 3);
}
