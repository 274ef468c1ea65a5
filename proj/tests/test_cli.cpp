#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "test_support.hpp"
#include "weilkit/cli.hpp"

using namespace weilkit;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "weilkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

/// Same arguments, no cache, JSON output.
Run run_json(std::vector<std::string> args) {
  args.insert(args.begin(), {"--no-cache", "--format", "json", "--threads", "1"});
  return run(std::move(args));
}

std::string model(const std::string& stem) { return test::model_path(stem); }

Run run_binary(const std::string& args) {
  const std::string cmd = std::string(WEILKIT_CLI_BINARY) + " " + args + " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {-1, "", "popen failed"};
  std::string out;
  std::array<char, 4096> buf;
  while (auto n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out, ""};
}

std::filesystem::path temp_dir(const std::string& tag) {
  auto d = std::filesystem::temp_directory_path() / ("weilkit-cli-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(d);
  return d;
}

}  // namespace

TEST(Cli, CountProjectiveLine) {
  const auto r = run_json({"count", model("p1"), "--p", "2", "--rmax", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["schema"], "weilkit/1");
  EXPECT_EQ(j["command"], "count");
  EXPECT_EQ(j["table"]["counts"], Json({3, 5, 9, 17}));
  EXPECT_EQ(j["table"]["smooth_at_p"], true);
}

TEST(Cli, CountConifoldOverF3) {
  const auto r = run_json({"count", model("conifold"), "--p", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["table"]["counts"], Json({33}));
  EXPECT_EQ(r.json()["table"]["smooth_at_p"], false);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_json({"count", "/nonexistent/model.vty", "--p", "2"}).code, 2);
  EXPECT_EQ(run_json({"count", model("p1"), "--p", "4"}).code, 2);
  EXPECT_EQ(run_json({"count", model("p1")}).code, 2);
  EXPECT_EQ(run_json({"frobnicate"}).code, 2);
  EXPECT_EQ(run_json({"compare", "--example", "no_such_pair"}).code, 1);
  EXPECT_EQ(run_json({"--budget", "10", "count", model("ell5"), "--p", "5"}).code, 1);
  EXPECT_EQ(run_json({"integrate", model("conifold"), "--p", "3"}).code, 1);
  EXPECT_EQ(run_json({"zeta", model("conifold"), "--p", "3", "--betti"}).code, 1);
  EXPECT_EQ(run({"--version"}).code, 0);
  EXPECT_EQ(run({"--version"}).out, std::string(kVersion) + "\n");
}

TEST(Cli, ParseErrorsAndInvalidModels) {
  const auto dir = temp_dir("models");
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.vty") << "ambient A^2; vars x,y\neq y - x^\n";
  std::ofstream(dir / "inhom.vty") << "ambient P^2; vars x,y,z; eq x^2 + y\n";
  const auto bad = run_json({"validate", (dir / "bad.vty").string()});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 2, column 10"), std::string::npos) << bad.err;
  const auto inhom = run_json({"validate", (dir / "inhom.vty").string()});
  EXPECT_EQ(inhom.code, 1);
  EXPECT_EQ(inhom.json()["valid"], false);
  EXPECT_EQ(run_json({"count", (dir / "inhom.vty").string(), "--p", "3"}).code, 1);
  std::filesystem::remove_all(dir);
}

TEST(Cli, ZetaProjectiveLineBetti) {
  const auto r = run_json({"zeta", model("p1"), "--p", "2", "--rmax", "4", "--betti"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["zeta"]["numerator"], Json({1}));
  EXPECT_EQ(j["zeta"]["denominator"], Json({1, -3, 2}));
  EXPECT_EQ(j["betti"], Json({1, 0, 1}));
}

TEST(Cli, ZetaEllipticCurveHodge) {
  const auto r = run_json({"zeta", model("ell5"), "--p", "5", "--rmax", "2", "--hodge-curve"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["zeta"]["numerator"], Json({1, 2, 5}));
  EXPECT_EQ(j["hodge"]["genus"], 1);
  EXPECT_EQ(j["weil"]["purity_ok"], true);
}

TEST(Cli, IntegrateMatchesCount) {
  const auto r = run_json({"--level", "3", "integrate", model("gm"), "--p", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.json();
  EXPECT_EQ(j["integral"]["value"], "4/5");
  EXPECT_EQ(j["matches_count"], true);
  EXPECT_EQ(j["oracle_brackets"], true);
}

TEST(Cli, CompareExamples) {
  auto r = run_json({"compare", "--example", "conifold_flop", "--primes", "2,3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["report"]["verdict"], "consistent-with-K-equivalence");
  r = run_json({"compare", "--example", "blowup_control", "--primes", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["report"]["verdict"], "inconsistent-with-K-equivalence");
  EXPECT_EQ(r.json()["report"]["primes"][0]["difference"], Json({3}));
  r = run_json({"compare", "--example", "curve_pair", "--primes", "2,5", "--hodge"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["report"]["skipped"], Json({2}));
  ASSERT_EQ(r.json()["hodge"].size(), 1u);
  EXPECT_EQ(r.json()["hodge"][0]["equal"], true);
  EXPECT_EQ(run_json({"compare", "--example", "curve_pair", "--primes", "5,x"}).code, 2);
}

TEST(Cli, ModelsDirFlag) {
  EXPECT_EQ(run_json({"--models-dir", WEILKIT_DEFAULT_MODELS_DIR, "compare", "--example", "conifold_flop", "--primes",
                      "2"})
                .code,
            0);
  EXPECT_EQ(run_json({"--models-dir", "/nonexistent", "compare", "--example", "conifold_flop"}).code, 2);
}

TEST(Cli, TextAndCsvFormats) {
  const auto text = run({"--no-cache", "count", model("p1"), "--p", "2", "--rmax", "3"});
  ASSERT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("counts: 3 5 9"), std::string::npos) << text.out;
  const auto csv = run({"--no-cache", "--format", "csv", "count", model("p1"), "--p", "2", "--rmax", "3"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("key,value\n", 0), 0u);
  EXPECT_NE(csv.out.find("table.counts.2,9"), std::string::npos) << csv.out;
  EXPECT_EQ(run({"--format", "xml", "count", model("p1"), "--p", "2"}).code, 2);
}

TEST(Cli, DocumentedInvocationsWithDefaults) {
  auto r = run_json({"zeta", model("p1"), "--p", "2", "--betti"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["betti"], Json({1, 0, 1}));
  r = run_json({"zeta", model("ell5"), "--p", "5", "--hodge-curve"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.json()["hodge"]["h"], Json({{1, 1}, {1, 1}}));
  r = run_json({"zeta", model("conifold"), "--p", "3", "--betti"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("purity_ok false"), std::string::npos);
  r = run_json({"count", model("conifold"), "--p", "3", "--rmax", "1"});
  EXPECT_EQ(r.json()["table"]["counts"], Json({33}));
  r = run_json({"compare", "--example", "conifold_flop", "--primes", "2,3,5", "--rmax", "2"});
  for (const auto& pc : r.json()["report"]["primes"]) EXPECT_EQ(pc["verdict"], "equal");
  r = run_json({"compare", "--example", "blowup_control", "--primes", "3"});
  EXPECT_EQ(r.json()["report"]["primes"][0]["counts_x"], Json({9}));
  EXPECT_EQ(r.json()["report"]["primes"][0]["counts_y"], Json({12}));
}

// Properties

TEST(CliProperty, JsonOutputIsDeterministic) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"count", model("conifold_res1"), "--p", "3", "--rmax", "2"},
           {"zeta", model("p1xp1"), "--p", "2", "--rmax", "5", "--betti"},
           {"integrate", model("ell_affine"), "--p", "5"},
           {"compare", "--example", "conifold_flop", "--primes", "2,3"}}) {
    const auto a = run_json(args), b = run_json(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(CliProperty, CacheHitGivesIdenticalOutput) {
  const auto dir = temp_dir("cache");
  const std::vector<std::string> args{"--cache-dir", dir.string(), "--format", "json", "count",
                                      model("conifold_res2"), "--p", "3", "--rmax", "3"};
  const auto cold = run(args);
  ASSERT_EQ(cold.code, 0) << cold.err;
  EXPECT_FALSE(std::filesystem::is_empty(dir));
  const auto warm = run(args);
  EXPECT_EQ(warm.out, cold.out);
  EXPECT_EQ(run_json({"count", model("conifold_res2"), "--p", "3", "--rmax", "3"}).out, cold.out);
  std::filesystem::remove_all(dir);
}

TEST(CliBinary, ExitCodesFromTheInstalledTool) {
  const auto ok = run_binary("--no-cache --format json count " + model("p1") + " --p 2 --rmax 2");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(Json::parse(ok.out)["table"]["counts"], Json({3, 5}));
  EXPECT_EQ(run_binary("--no-cache count /nonexistent/model.vty --p 2").code, 2);
  EXPECT_EQ(run_binary("--no-cache --budget 10 count " + model("ell5") + " --p 5").code, 1);
  EXPECT_EQ(run_binary("--version").out, std::string(kVersion) + "\n");
}
