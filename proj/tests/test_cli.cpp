#include "commands.hpp"
#include "config.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace glin::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("glin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  Overrides out() const {
    Overrides o;
    o.output = (dir_ / "out").string();
    return o;
  }
  std::string slurp(const std::string& name) const {
    std::ifstream in(dir_ / "out" / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
  std::ostringstream so_, se_;
};

const char* kSphere = R"(# cosine on S^2
seed = 3
manifold.kind = sphere
manifold.dim = 2
witness.count = 32
problem.functional = cosine
problem.p = 0, 0, 1
)";

}  // namespace

TEST(Config, ParsesCommentsAndTypes) {
  std::istringstream in("a_comment_only = 1 # nope\n");
  EXPECT_THROW(Config::parse(in, "x.conf"), ConfigError);
  std::istringstream ok("# header\n\nseed = 12  # trailing\ndescent.eps=1e-9\nproblem.p = 1, 2 ,3\n");
  const Config c = Config::parse(ok, "x.conf");
  EXPECT_EQ(c.get_u64("seed", 0), 12u);
  EXPECT_EQ(c.get_double("descent.eps", 0.0), 1e-9);
  EXPECT_EQ(c.get_list("problem.p", {}), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(c.get_int("descent.n_max", 7), 7);
}

TEST(Config, DiagnosticsNameLineAndField) {
  std::istringstream unknown("seed = 1\n\ndescent.epsilon = 3\n");
  try {
    Config::parse(unknown, "bad.conf");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bad.conf:3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("descent.epsilon"), std::string::npos);
  }
  std::istringstream typed("seed = 1\ndescent.eps = fast\n");
  const Config c = Config::parse(typed, "t.conf");
  try {
    (void)c.get_double("descent.eps", 0.0);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t.conf:2: field 'descent.eps'"), std::string::npos);
  }
  std::istringstream noeq("seed 1\n");
  EXPECT_THROW(Config::parse(noeq, "n.conf"), ConfigError);
  std::istringstream dup("seed = 1\nseed = 2\n");
  EXPECT_THROW(Config::parse(dup, "d.conf"), ConfigError);
}

TEST(Config, ChoiceValidation) {
  std::istringstream in("manifold.kind = hyperbolic\n");
  const Config c = Config::parse(in, "k.conf");
  try {
    load_problem(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("k.conf:1: field 'manifold.kind'"), std::string::npos);
  }
}

TEST_F(CliTest, SolveSphereCosine) {
  const std::string cfg = write("s.conf", kSphere);
  EXPECT_EQ(cmd_solve(cfg, out(), so_, se_), 0) << se_.str();
  EXPECT_NE(so_.str().find("monotone: PASS"), std::string::npos);
  const std::string csv = slurp("trace.csv");
  EXPECT_EQ(csv.rfind("# glin-trace v1\n", 0), 0u);
  EXPECT_FALSE(slurp("report.txt").empty());
}

TEST_F(CliTest, IterationCapExitsTwo) {
  const std::string cfg = write("s.conf", std::string(kSphere) + "problem.start = 1, 0, -0.3\n");
  Overrides o = out();
  o.max_iter = 1;
  EXPECT_EQ(cmd_solve(cfg, o, so_, se_), 2);
  EXPECT_NE(so_.str().find("maximum number of iterations"), std::string::npos);
}

TEST_F(CliTest, MalformedConfigExitsOne) {
  const std::string cfg = write("bad.conf", "seed = 1\nmanifold.dimension = 3\n");
  EXPECT_EQ(cmd_solve(cfg, out(), so_, se_), 1);
  EXPECT_NE(se_.str().find("bad.conf:2"), std::string::npos);
  EXPECT_NE(se_.str().find("manifold.dimension"), std::string::npos);
  EXPECT_EQ(cmd_solve((dir_ / "missing.conf").string(), out(), so_, se_), 1);
}

TEST_F(CliTest, MismatchedFunctionalExitsOne) {
  const std::string cfg = write("t.conf", "manifold.kind = torus\nproblem.functional = cosine\n");
  EXPECT_EQ(cmd_solve(cfg, out(), so_, se_), 1);
  EXPECT_NE(se_.str().find("problem.functional"), std::string::npos);
}

TEST_F(CliTest, OverridesWinOverConfig) {
  const std::string cfg = write("s.conf", std::string(kSphere) + "descent.n_max = 1\n");
  Overrides o = out();
  o.max_iter = 50;
  o.tol = 1e-3;
  o.seed = 11;
  EXPECT_EQ(cmd_solve(cfg, o, so_, se_), 0);
  EXPECT_NE(so_.str().find("seed: 11"), std::string::npos);
}

TEST_F(CliTest, ReproducibleTraceBytes) {
  const std::string cfg = write("s.conf", kSphere);
  ASSERT_EQ(cmd_solve(cfg, out(), so_, se_), 0);
  const std::string first = slurp("trace.csv");
  ASSERT_EQ(cmd_solve(cfg, out(), so_, se_), 0);
  EXPECT_EQ(first, slurp("trace.csv"));
}

TEST_F(CliTest, EnvironmentSetsDefaultOutput) {
  const std::string cfg = write("s.conf", kSphere);
  const fs::path env_dir = dir_ / "env";
  setenv("GLIN_OUTPUT_DIR", env_dir.c_str(), 1);
  const int code = cmd_solve(cfg, Overrides{}, so_, se_);
  unsetenv("GLIN_OUTPUT_DIR");
  EXPECT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(env_dir / "trace.csv"));
}

TEST_F(CliTest, FixedPointContractionAndRotation) {
  const std::string c = write("c.conf",
                              "manifold.kind = sphere\nmanifold.dim = 2\nproblem.p = 0, 0, 1\n"
                              "problem.start = 0.6, 0, 0.8\nfixed_point.map = contraction\ndescent.eps = 1e-12\n");
  EXPECT_EQ(cmd_fixed_point(c, out(), so_, se_), 0) << se_.str();
  EXPECT_NE(so_.str().find("fixed_point_found: yes"), std::string::npos);
  so_.str("");
  const std::string r = write("r.conf", "manifold.kind = torus\nmanifold.dim = 1\nfixed_point.map = rotation\n");
  EXPECT_EQ(cmd_fixed_point(r, out(), so_, se_), 0) << se_.str();
  EXPECT_NE(so_.str().find("no fixed point found"), std::string::npos);
  EXPECT_NE(so_.str().find("iterations: 0"), std::string::npos);
  EXPECT_EQ(cmd_fixed_point(write("b.conf", "fixed_point.map = reflection\n"), out(), so_, se_), 1);
}

TEST_F(CliTest, MetricPassFailAndEmptyWitnesses) {
  const std::string base = "manifold.kind = sphere\nmanifold.dim = 2\nwitness.count = 128\nmetric.triples = 100\n";
  EXPECT_EQ(cmd_metric(write("m.conf", base), out(), so_, se_), 0) << se_.str();
  EXPECT_EQ(slurp("metric.csv").rfind("# glin-metric v1\n", 0), 0u);
  EXPECT_EQ(cmd_metric(write("n.conf", base + "gap.shape = null_cone\n"), out(), so_, se_), 1);
  EXPECT_EQ(cmd_metric(write("e.conf", "witness.count = 0\n"), out(), so_, se_), 1);
  EXPECT_NE(se_.str().find("witness.count"), std::string::npos);
}

TEST_F(CliTest, LoopProblem) {
  const std::string cfg = write("l.conf",
                                "manifold.kind = sphere\nmanifold.dim = 1\nproblem.kind = mapping\nmapping.m = 32\n"
                                "mapping.perturbation = 0.2\ndescent.n_max = 20\n");
  const int code = cmd_solve(cfg, out(), so_, se_);
  EXPECT_TRUE(code == 0 || code == 2) << se_.str();
  EXPECT_NE(so_.str().find("winding_constant: PASS"), std::string::npos);
  EXPECT_EQ(slurp("final_map.csv").rfind("# glin-map v1\n", 0), 0u);
  EXPECT_EQ(slurp("trace.csv").rfind("# glin-mapping-trace v1\n", 0), 0u);
}

TEST_F(CliTest, CheckSuite) {
  CheckOptions c;
  c.list = true;
  EXPECT_EQ(cmd_check(c, {}, so_, se_), 0);
  EXPECT_NE(so_.str().find("metric.sphere"), std::string::npos);
  c.list = false;
  so_.str("");
  EXPECT_EQ(cmd_check(c, out(), so_, se_), 0) << so_.str();
  EXPECT_NE(slurp("check_report.txt").find("verdict: PASS"), std::string::npos);
  for (const std::string& name : check_names()) {
    c.inject_fault = name;
    EXPECT_EQ(cmd_check(c, {}, so_, se_), 1) << name;
  }
  c.inject_fault = "nonexistent";
  EXPECT_EQ(cmd_check(c, {}, so_, se_), 1);
}

TEST(ExitCodes, FollowStopReason) {
  EXPECT_EQ(exit_code(glin::StopReason::ToleranceReached), 0);
  EXPECT_EQ(exit_code(glin::StopReason::ExactCriticalPoint), 0);
  EXPECT_EQ(exit_code(glin::StopReason::MaxIterations), 2);
  EXPECT_EQ(exit_code(glin::StopReason::EvaluationFailed), 1);
}
