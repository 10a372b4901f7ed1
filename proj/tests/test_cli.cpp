#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "dforms/cli.hpp"
#include "dforms/error.hpp"

using nlohmann::json;

namespace {

struct RunOut {
  int code = 0;
  std::string out;
  std::string err;
};

RunOut run(const std::vector<std::string>& args) {
  std::ostringstream o, e;
  RunOut r;
  r.code = dforms::cli_run(args, o, e);
  r.out = o.str();
  r.err = e.str();
  return r;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("dimension table for the rank-2 binary ring") {
  RunOut r = run({"dims", "--q", "2", "--r", "2", "--k", "0..4"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["schema"] == "drinfeld-forms/1");
  CHECK(j["command"] == "dims");
  CHECK(j["q"] == 2);
  CHECK(j["r"] == 2);
  CHECK(j["status"] == "pass");
  REQUIRE(j["rows"].size() == 5);
  const int want[] = {1, 3, 5, 7, 9};
  for (int k = 0; k <= 4; ++k) {
    CHECK(j["rows"][size_t(k)]["k"] == k);
    CHECK(j["rows"][size_t(k)]["oracle"] == want[k]);
    CHECK(j["rows"][size_t(k)]["formula"] == want[k]);
    CHECK(j["rows"][size_t(k)]["match"] == true);
  }
}

TEST_CASE("rank-1 dimensions are constant") {
  RunOut r = run({"dims", "--q", "2", "--r", "1", "--k", "0..9"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 10);
  for (const auto& row : j["rows"]) {
    CHECK(row["oracle"] == 1);
    CHECK(row["formula"] == 1);
    CHECK(row["match"] == true);
  }
}

TEST_CASE("invalid field size is an input error") {
  RunOut r = run({"dims", "--q", "0", "--r", "2"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(!r.err.empty());
}

TEST_CASE("unipotent invariant dimensions count all monomials") {
  RunOut r = run({"invariants", "--q", "2", "--r", "2", "--group", "unipotent",
                  "--k", "0..5"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["group"] == "unipotent");
  CHECK(j["reference"] == "weighted-hilbert");
  REQUIRE(j["rows"].size() == 6);
  for (int k = 0; k <= 5; ++k) {
    CHECK(j["rows"][size_t(k)]["dim"] == k + 1);
    CHECK(j["rows"][size_t(k)]["match"] == true);
  }
}

TEST_CASE("special-linear invariants follow the weights 2 and 4") {
  RunOut r = run({"invariants", "--q", "3", "--r", "2", "--group", "sl", "--k",
                  "0..6"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  // multisets from weights {2,4}: degree 0,2,4,6 have 1,1,2,2; odd none
  const int want[] = {1, 0, 1, 0, 2, 0, 2};
  REQUIRE(j["rows"].size() == 7);
  for (int k = 0; k <= 6; ++k) {
    CHECK(j["rows"][size_t(k)]["dim"] == want[k]);
    CHECK(j["rows"][size_t(k)]["reference"] == want[k]);
    CHECK(j["rows"][size_t(k)]["match"] == true);
  }
}

TEST_CASE("missing subgroup file is an input error") {
  RunOut r = run({"invariants", "--group", "file:missing.txt"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find("missing.txt") != std::string::npos);
}

TEST_CASE("universal family report for the rank-2 binary ring") {
  RunOut r = run({"universal", "--q", "2", "--r", "2"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  REQUIRE(j["coefficients"].size() == 2);
  CHECK(j["coefficients"][0]["degree"] == 1);
  CHECK(j["coefficients"][0]["text"] == "u(1,0) + u(0,1) + u(1,1)");
  CHECK(j["coefficients"][1]["degree"] == 3);
  CHECK(j["coefficients"][1]["text"] == "u(1,0)*u(0,1)*u(1,1)");
  CHECK(j["checks"]["q_power_only"] == true);
  CHECK(j["checks"]["degrees"] == true);
  CHECK(j["checks"]["top_nonzero"] == true);
  CHECK(j["checks"]["invariant"] == true);
  CHECK(j["status"] == "pass");
}

TEST_CASE("stratum specialization to a line") {
  RunOut r = run({"strata", "--q", "2", "--r", "2", "--subspace", "1 0"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["rank"] == 1);
  REQUIRE(j["coefficients"].size() == 2);
  CHECK(j["coefficients"][0]["text"] == "u(1)");
  CHECK(j["coefficients"][1]["text"] == "0");
  CHECK(j["matches_universal"] == true);
  CHECK(j["status"] == "pass");
}

TEST_CASE("hecke product matches the convolution oracle") {
  RunOut r = run({"hecke", "--q", "2", "--r", "2", "--a", "0,1", "--b", "0,1"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["a"] == json::array({0, 1}));
  CHECK(j["b"] == json::array({0, 1}));
  REQUIRE(j["product"].size() == 2);
  CHECK(j["product"][0]["type"] == json::array({0, 2}));
  CHECK(j["product"][0]["mult"] == 1);
  CHECK(j["product"][1]["type"] == json::array({1, 1}));
  CHECK(j["product"][1]["mult"] == 3);
  CHECK(j["oracle_match"] == true);
}

TEST_CASE("json output is byte-identical across runs") {
  std::vector<std::string> args = {"dims", "--q", "3", "--r", "2",
                                   "--k",  "0..3"};
  RunOut a = run(args);
  RunOut b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  RunOut h1 = run({"hecke", "--q", "2", "--r", "2", "--a", "0,1", "--b", "0,2"});
  RunOut h2 = run({"hecke", "--q", "2", "--r", "2", "--a", "0,1", "--b", "0,2"});
  CHECK(h1.out == h2.out);
}

TEST_CASE("csv mirrors the table rows") {
  RunOut r = run({"dims", "--q", "2", "--r", "2", "--k", "0..2", "--format",
                  "csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out ==
        "k,oracle,formula,match\n"
        "0,1,1,true\n"
        "1,3,3,true\n"
        "2,5,5,true\n");
}

TEST_CASE("unknown format is an input error") {
  RunOut r = run({"dims", "--q", "2", "--r", "2", "--format", "xml"});
  CHECK(r.code == 2);
}

TEST_CASE("monomial cap aborts with a resource error") {
  RunOut r = run({"dims", "--q", "2", "--r", "2", "--k", "0..4",
                  "--cap-monomials", "1"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
}

TEST_CASE("caps can come from the environment") {
  setenv("DFORMS_CAPS", "monomials=1", 1);
  RunOut r = run({"dims", "--q", "2", "--r", "2", "--k", "0..4"});
  unsetenv("DFORMS_CAPS");
  CHECK(r.code == 2);

  setenv("DFORMS_CAPS", "monomials=banana", 1);
  RunOut bad = run({"dims", "--q", "2", "--r", "2"});
  unsetenv("DFORMS_CAPS");
  CHECK(bad.code == 2);

  // the guard restores the process-wide limits afterwards
  CHECK(dforms::caps().monomials == dforms::Caps{}.monomials);
  RunOut again = run({"dims", "--q", "2", "--r", "2", "--k", "0..4"});
  CHECK(again.code == 0);
}

TEST_CASE("subgroup files drive the invariant reference") {
  const char* path = "cli_test_subgroup.txt";
  {
    std::ofstream f(path);
    // the two-element shear subgroup inside GL_2(F_2)
    f << "2 2\n1 1 0 1\n";
  }
  RunOut r = run({"invariants", "--group", std::string("file:") + path, "--k",
                  "0..3"});
  std::remove(path);
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["reference"] == "level-formula");
  for (int k = 0; k <= 3; ++k) {
    CHECK(j["rows"][size_t(k)]["dim"] == k + 1);
    CHECK(j["rows"][size_t(k)]["match"] == true);
  }
}

TEST_CASE("verify runs every block and reports pass") {
  RunOut r = run({"verify", "--seed", "7"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["command"] == "verify");
  CHECK(j["seed"] == 7);
  CHECK(j["status"] == "pass");
  REQUIRE(j["rows"].size() == 9);
  for (const auto& row : j["rows"]) CHECK(row["pass"] == true);
}

TEST_CASE("help text lists the commands") {
  RunOut r = run({"--help"});
  CHECK(r.code == 0);
  for (const char* cmd : {"dims", "invariants", "universal", "strata", "hecke",
                          "verify"})
    CHECK(r.out.find(cmd) != std::string::npos);
}

TEST_CASE("malformed hecke flags are input errors") {
  CHECK(run({"hecke", "--q", "2", "--r", "2", "--a", "0,1"}).code == 2);
  CHECK(run({"hecke", "--q", "2", "--r", "2", "--a", "1,0", "--b", "0,1"})
            .code == 2);
  CHECK(run({"hecke", "--q", "2", "--r", "2", "--a", "0,1,2", "--b", "0,1"})
            .code == 2);
  CHECK(run({"nonsense"}).code == 2);
}

}  // TEST_SUITE
