#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

std::string cli_path() {
  const char* p = std::getenv("RISKDIFF_CLI");
  REQUIRE(p != nullptr);
  return p;
}

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("pvalue emits the fries numbers in json") {
  const auto r = run("pvalue --xt 8 --nt 15 --xc 3 --nc 15 --delta0 0");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(std::fabs(doc["results"]["fisher"].get<double>() - 0.128) < 5e-4);
  CHECK(std::fabs(doc["results"]["exact"].get<double>() - 0.034109) < 5e-5);
  // round-trip: parse(emit(x)) == x at full precision
  const auto again = nlohmann::json::parse(doc.dump());
  CHECK(again["results"]["exact"].get<double>() ==
        doc["results"]["exact"].get<double>());
}

TEST_CASE("pvalue reproduces the first table example") {
  const auto r = run("pvalue --xt 5 --nt 8 --xc 10 --nc 19 --delta0 0.10");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(std::fabs(doc["results"]["exact"].get<double>() - 0.200) < 5e-4);
  CHECK(std::fabs(doc["results"]["cz"].get<double>() - 0.370) < 5e-4);
  CHECK(std::fabs(doc["results"]["mn"].get<double>() - 0.172) < 5e-4);
  CHECK(std::fabs(doc["results"]["wald"].get<double>() - 0.167) < 5e-4);
  CHECK(!doc["results"].contains("fisher"));
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("pvalue --xt 8 --nt 15").exit_code == 2);
  CHECK(run("nonsense").exit_code == 2);
  CHECK(run("opchar").exit_code == 2);
}

TEST_CASE("invalid counts fail with a computational error") {
  CHECK(run("pvalue --xt 20 --nt 15 --xc 3 --nc 15 --delta0 0").exit_code ==
        1);
}

TEST_CASE("ci emits all four methods with monotone flags") {
  const auto r =
      run("ci --xt 8 --nt 15 --xc 3 --nc 15 --alpha 0.05 --delta0 0");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  for (const char* m : {"wald", "mn", "cz", "ec"}) {
    REQUIRE(doc.contains(m));
    CHECK(doc[m]["lower"].get<double>() <= doc[m]["upper"].get<double>());
    CHECK(doc[m].contains("monotone_ok"));
    CHECK(doc[m].contains("elapsed_ms"));
  }
  CHECK(doc["ec"]["upper"].get<double>() < doc["cz"]["upper"].get<double>());

  // ec without a margin is a usage error
  CHECK(run("ci --xt 8 --nt 15 --xc 3 --nc 15 --alpha 0.05 --method ec")
            .exit_code == 2);
}

TEST_CASE("ec-expectation files are bit-identical for a fixed seed") {
  const std::string prefix1 = "/tmp/riskdiff_ee_a";
  const std::string prefix2 = "/tmp/riskdiff_ee_b";
  const std::string flags =
      "opchar ec-expectation --nt 10 --nc 10 --delta0 0.1 --pt 0.5 --pc 0.5 "
      "--nsims 500 --seed 1 --out ";
  REQUIRE(run(flags + prefix1).exit_code == 0);
  REQUIRE(run(flags + prefix2).exit_code == 0);
  const std::string a_csv = slurp(prefix1 + ".csv");
  const std::string b_csv = slurp(prefix2 + ".csv");
  REQUIRE(!a_csv.empty());
  CHECK(a_csv == b_csv);
  // config header present and LF-terminated
  CHECK(a_csv.rfind("# config:", 0) == 0);
  CHECK(a_csv.find('\r') == std::string::npos);
  std::remove((prefix1 + ".csv").c_str());
  std::remove((prefix1 + ".json").c_str());
  std::remove((prefix2 + ".csv").c_str());
  std::remove((prefix2 + ".json").c_str());
}

TEST_CASE("csv output carries the full configuration") {
  const auto r = run(
      "pvalue --xt 5 --nt 6 --xc 2 --nc 6 --delta0 0.12 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("# config:", 0) == 0);
  CHECK(r.out.find("grid_pt=1001") != std::string::npos);
  CHECK(r.out.find("grid_delta=0.001") != std::string::npos);
  CHECK(r.out.find("exact,cz,mn,wald") != std::string::npos);
}
