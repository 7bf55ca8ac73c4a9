#include "gps/io.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args, bool merge_stderr = false) {
  std::string cmd = std::string("\"") + GPS_CLI_PATH + "\" " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  Outcome r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), got);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gps_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
            std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return "\"" + p.string() + "\"";
  }

  static std::string fixture(const std::string& stem) {
    return std::string("\"") + GPS_FIXTURE_DIR + "/" + stem + ".json\"";
  }

  fs::path dir_;
};

const char* kAbelian = R"({"name": "flat", "dim": 2, "bracket": [],
  "phi": [["0","0","0","0"],["0","0","0","0"],["0","0","0","0"],["0","0","0","0"]]})";

}  // namespace

TEST_F(Cli, AnalyzeAbelianZeroMap) {
  Outcome r = run("analyze --json " + write("flat.json", kAbelian));
  ASSERT_EQ(r.code, 0) << r.out;
  auto rep = gps::parse_report(r.out);
  EXPECT_EQ(rep.name, "flat");
  EXPECT_EQ(rep.minpoly, (std::vector<std::string>{"0", "1"}));
  EXPECT_FALSE(rep.torsions.empty());
  for (const auto& t : rep.torsions) EXPECT_TRUE(t.t_vanishes && t.s_vanishes) << t.order;
  EXPECT_TRUE(rep.minimal_torsion.empty());
  EXPECT_TRUE(rep.verdicts.minimal);
  EXPECT_TRUE(rep.routes_agree);
}

TEST_F(Cli, AnalyzeMinimalHeisenbergExample) {
  Outcome r = run("analyze --json " + fixture("heisenberg_a"));
  ASSERT_EQ(r.code, 0);
  auto rep = gps::parse_report(r.out);
  EXPECT_TRUE(rep.verdicts.minimal);
  EXPECT_TRUE(rep.verdicts.courant_witness.empty());
  EXPECT_EQ(rep.minpoly_text, "x^5");
  EXPECT_EQ(rep.block_type, "Delta_5^+(0) + Delta_1^-(0)");
  ASSERT_EQ(rep.blocks.size(), 2u);
  EXPECT_EQ(rep.blocks[0].degree, 5);
}

TEST_F(Cli, AnalyzeNonMinimalReportsWitness) {
  Outcome r = run("analyze --json " + fixture("heisenberg_b"));
  ASSERT_EQ(r.code, 0);
  auto rep = gps::parse_report(r.out);
  EXPECT_FALSE(rep.verdicts.minimal);
  EXPECT_EQ(rep.verdicts.courant_witness.size(), 3u);
  EXPECT_FALSE(rep.minimal_torsion.empty());
  ASSERT_GE(rep.torsions.size(), 5u);
  EXPECT_FALSE(rep.torsions[3].t_vanishes);
  EXPECT_TRUE(rep.torsions[4].t_vanishes);
}

TEST_F(Cli, TorsionOrderOption) {
  Outcome r = run("analyze --json --torsion-max 2 " + fixture("heisenberg_c"));
  ASSERT_EQ(r.code, 0);
  auto rep = gps::parse_report(r.out);
  EXPECT_EQ(rep.torsion_max, 2);
  EXPECT_EQ(rep.torsions.size(), 2u);
  EXPECT_EQ(run("analyze --torsion-max 99 " + fixture("heisenberg_c")).code, 2);
}

TEST_F(Cli, ReportRoundTripAndDeterminism) {
  Outcome a = run("analyze --json " + fixture("pointwise_b"));
  Outcome b = run("analyze --json " + fixture("pointwise_b"));
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(gps::print_report(gps::parse_report(a.out)), a.out);
}

TEST_F(Cli, HumanReadableOutput) {
  Outcome r = run("analyze " + fixture("heisenberg_b"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("minimal polynomial: x^5"), std::string::npos);
  EXPECT_NE(r.out.find("minimal: no"), std::string::npos);
}

TEST_F(Cli, MalformedJsonReportsLocation) {
  Outcome r = run("analyze " + write("bad.json", "{\n  \"name\": \"x\",\n  \"dim\": }\n"), true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("line 3, column 10"), std::string::npos) << r.out;
}

TEST_F(Cli, SchemaErrorsReportPath) {
  Outcome r = run("analyze " + write("extra.json", R"({"name": "x", "dim": 1, "bracket": [], "phi": [["0","0"],["0","0"]], "color": 1})"), true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("color"), std::string::npos) << r.out;
  Outcome d = run("analyze " + write("dim.json", R"({"name": "x", "dim": 0, "bracket": [], "phi": []})"), true);
  EXPECT_EQ(d.code, 2);
  EXPECT_NE(d.out.find("/dim"), std::string::npos) << d.out;
}

TEST_F(Cli, RejectsNonSkewMap) {
  Outcome r = run("analyze " + write("ns.json", R"({"name": "x", "dim": 1, "bracket": [], "phi": [["1","0"],["0","0"]]})"), true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("skew"), std::string::npos) << r.out;
}

TEST_F(Cli, RejectsJacobiViolation) {
  const char* doc = R"({"name": "x", "dim": 3,
    "bracket": [[1, 2, 1, "1"], [2, 3, 2, "1"], [1, 3, 3, "1"]],
    "phi": [["0","0","0","0","0","0"],["0","0","0","0","0","0"],["0","0","0","0","0","0"],
            ["0","0","0","0","0","0"],["0","0","0","0","0","0"],["0","0","0","0","0","0"]]})";
  Outcome r = run("analyze " + write("jac.json", doc), true);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("Jacobi"), std::string::npos) << r.out;
}

TEST_F(Cli, UnsupportedSpectrum) {
  // f + (-f^T) with f the companion matrix of x^2 - x - 1: eigenvalues are irrational
  const char* doc = R"({"name": "golden", "dim": 2, "bracket": [],
    "phi": [["0","1","0","0"],["1","1","0","0"],["0","0","0","-1"],["0","0","-1","-1"]]})";
  EXPECT_EQ(run("analyze " + write("golden.json", doc)).code, 3);
}

TEST_F(Cli, MissingFileAndUsage) {
  EXPECT_EQ(run("analyze " + (dir_ / "absent.json").string()).code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, FixturesFilter) {
  Outcome r = run("fixtures --filter heisenberg");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("PASS criterion 1 "), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("criterion 5 "), std::string::npos) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST_F(Cli, FixturesFromDirectoryMatchEmbedded) {
  Outcome a = run("fixtures --filter heisenberg_a");
  Outcome b = run(std::string("fixtures --filter heisenberg_a --fixture-dir \"") + GPS_FIXTURE_DIR + "\"");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, FaultInjectionNamesFailingEntry) {
  fs::path fx = dir_ / "fixtures";
  fs::create_directories(fx);
  for (const auto& e : fs::directory_iterator(GPS_FIXTURE_DIR)) fs::copy_file(e.path(), fx / e.path().filename());
  fs::path target = fx / "heisenberg_b.json";
  std::string text;
  {
    std::ifstream in(target);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto pos = text.find("\"prefactor\": \"1/2\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 18, "\"prefactor\": \"1/3\"");
  std::ofstream(target) << text;

  Outcome r = run("fixtures --filter heisenberg_b --fixture-dir \"" + fx.string() + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAIL [2] heisenberg_b :: <2 T^(4), b5 b4 b5> = 10 :: expected 10, got 15"), std::string::npos)
      << r.out;
}

TEST_F(Cli, FixtureDirectoryWithBrokenFile) {
  fs::path fx = dir_ / "fixtures";
  fs::create_directories(fx);
  fs::copy_file(fs::path(GPS_FIXTURE_DIR) / "heisenberg_a.json", fx / "heisenberg_a.json");
  std::ofstream(fx / "broken.json") << "{";
  Outcome r = run("fixtures --fixture-dir \"" + fx.string() + "\"");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("fixture error: "), std::string::npos) << r.out;
}

TEST_F(Cli, BlocksSubcommand) {
  Outcome r = run("blocks " + fixture("nilpotent4"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("blocks: Delta_4^0(0,0)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("chain 2:"), std::string::npos) << r.out;
}

TEST_F(Cli, DLambdaSubcommand) {
  Outcome r = run("dlambda " + fixture("heisenberg_c"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("sum of d_lambda is d: yes"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("d_i:"), std::string::npos) << r.out;
  Outcome b = run("dlambda " + fixture("heisenberg_b"));
  EXPECT_NE(b.out.find("is a generalized vector: no"), std::string::npos) << b.out;
}
