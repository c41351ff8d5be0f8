#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "support.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(AMALGAM_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fx(const std::string& rel) { return "'" + support::fixture(rel) + "'"; }

nlohmann::json cli_json(const std::string& args, int expected_code = 0) {
  const Run r = cli("--json " + args);
  REQUIRE(r.code == expected_code);
  return nlohmann::json::parse(r.out);
}

}  // namespace

TEST_CASE("cli: group validation") {
  const auto z2 = cli_json("group validate " + fx("groups/z2.json"));
  CHECK(z2["verdicts"]["ok"] == true);
  CHECK(z2["verdicts"]["order"] == 2);
  const auto s3 = cli_json("group validate " + fx("groups/s3.json"));
  CHECK(s3["verdicts"]["order"] == 6);
  CHECK(s3["verdicts"]["abelian"] == false);
  const Run broken = cli("group validate " + fx("groups/broken.json"));
  CHECK(broken.code == 1);
  CHECK(broken.out.find("NotAssociative") != std::string::npos);
  CHECK(cli("group validate /nonexistent.json").code == 1);
}

TEST_CASE("cli: triangle analysis") {
  const auto k = cli_json("triangle analyze " + fx("triangles/z2z2z2.json"));
  CHECK(k["verdicts"]["verdict"] == "REALIZABLE");
  CHECK(k["verdicts"]["group_order"] == 8);
  const auto s = cli_json("triangle analyze " + fx("triangles/s3.json"));
  CHECK(s["verdicts"]["verdict"] == "REALIZABLE");
  CHECK(s["verdicts"]["reason"] == "angle-sum");
  for (const char* v : {"vertex_1", "vertex_2", "vertex_3"}) CHECK(s["verdicts"]["angles"][v]["theta"] == "pi/3");
  const auto u = cli_json("triangle analyze --max-cosets 1 --angle-bound 7 " + fx("triangles/collapsing.json"));
  CHECK(u["verdicts"]["verdict"] == "UNKNOWN");
  CHECK(u["verdicts"]["bounds"]["max_cosets"] == 1);
  CHECK(u["verdicts"]["bounds"]["angle_bound"] == 7);
  const auto c = cli_json("triangle analyze " + fx("triangles/collapsing.json"));
  CHECK(c["verdicts"]["verdict"] == "COLLAPSED");
  CHECK(cli("triangle analyze " + fx("triangles/not_fillable.json")).code == 1);
}

TEST_CASE("cli: output is deterministic") {
  for (const std::string args : {"triangle analyze " + fx("triangles/s3.json"), "--json fock moments " + fx("fock/z2_free.json"),
                                 "angle " + fx("angles/v4.json")}) {
    const Run a = cli(args), b = cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("timings") == std::string::npos);
  }
  CHECK(cli("--timings --json group validate " + fx("groups/z2.json")).out.find("timings") != std::string::npos);
}

TEST_CASE("cli: algebra triangles") {
  const auto t = cli_json("algebra amalgam " + fx("algebras/tensor.json"));
  CHECK(t["verdicts"]["dim"] == 64);
  const auto sd = cli_json("algebra amalgam " + fx("algebras/span_deficient.json"));
  CHECK(sd["verdicts"]["status"] == "SpanDeficient");
  CHECK(cli_json("algebra square-check " + fx("squares/eu_e0.json"))["verdicts"]["commuting_square"] == true);
}

TEST_CASE("cli: fock moments") {
  const auto suite = cli_json("fock moments " + fx("fock/z2_free.json"));
  CHECK(suite["verdicts"]["freeness"]["all_vanish"] == true);
  const auto& table = suite["verdicts"]["word_table"];
  CHECK(table.size() == 30);
  CHECK(table["1:a,2:a,2:a,1:a"][0] == "1");
  CHECK(table["1:a,2:a,1:a,2:a"][0] == "0");
  const auto empty = cli_json("fock moments " + fx("fock/z2_free.json") + " --word ''");
  CHECK(empty["verdicts"]["moment"] == nlohmann::json::array({"1"}));
  const Run deep = cli("fock moments " + fx("fock/z2_free.json") + " --word 1:a,2:a --depth 1");
  CHECK(deep.code == 1);
  CHECK(deep.out.find("DepthExceeded") != std::string::npos);
}
