#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "romshaper/learn/cmaes.h"
#include "romshaper/learn/task_grid.h"

namespace romshaper {
namespace {

double Sphere(const Eigen::VectorXd& x, const Eigen::VectorXd& opt) {
  return (x - opt).squaredNorm();
}

double Rosenbrock(const Eigen::VectorXd& x) {
  double f = 0.0;
  for (int i = 0; i + 1 < x.size(); ++i) {
    f += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1.0 - x(i), 2);
  }
  return f;
}

// Best fitness reached before the evaluation budget runs out.
template <typename F>
double Minimize(CmaState state, F f, int budget, double target) {
  int evals = 0;
  double best = std::numeric_limits<double>::infinity();
  while (evals + state.popsize <= budget) {
    const auto samples = CmaesAsk(state);
    std::vector<double> fit;
    for (const auto& s : samples) {
      fit.push_back(f(s));
      best = std::min(best, fit.back());
    }
    evals += state.popsize;
    if (best < target) break;
    CmaesTell(state, samples, fit, false);
  }
  return best;
}

void ExpectSameState(const CmaState& a, const CmaState& b) {
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.cov, b.cov);
  EXPECT_EQ(a.sigma, b.sigma);
  EXPECT_EQ(a.path_sigma, b.path_sigma);
  EXPECT_EQ(a.path_c, b.path_c);
  EXPECT_EQ(a.generation, b.generation);
  EXPECT_TRUE(a.rng == b.rng);
}

TEST(CmaesTest, DefaultPopsize) {
  EXPECT_EQ(DefaultPopsize(90), 17);
  EXPECT_EQ(DefaultPopsize(1), 4);
  EXPECT_EQ(DefaultPopsize(32), 14);
}

TEST(CmaesTest, InitialState) {
  const Eigen::VectorXd theta0 = Eigen::VectorXd::LinSpaced(6, -1.0, 1.0);
  const CmaState s = CmaesInit(theta0, 1e-3, 5);
  EXPECT_EQ(s.sigma, 1e-3);
  EXPECT_EQ(s.mean, theta0);
  EXPECT_TRUE(s.cov.isIdentity());
  EXPECT_TRUE(s.path_sigma.isZero());
  EXPECT_TRUE(s.path_c.isZero());
  EXPECT_EQ(s.popsize, DefaultPopsize(6));
  EXPECT_THROW(CmaesInit(theta0, 0.0, 5), std::invalid_argument);
  EXPECT_THROW(CmaesInit(theta0, -1.0, 5), std::invalid_argument);
}

TEST(CmaesTest, ConstantsFollowTheStandardSettings) {
  const CmaConstants c = CmaConstants::Make(10, 10);
  EXPECT_EQ(c.mu, 5);
  EXPECT_NEAR(c.weights.sum(), 1.0, 1e-15);
  for (int i = 1; i < c.mu; ++i) EXPECT_LT(c.weights(i), c.weights(i - 1));
  EXPECT_NEAR(c.mu_eff, 1.0 / c.weights.squaredNorm(), 1e-12);
  EXPECT_NEAR(c.chi_n, std::sqrt(10.0) * (1 - 1 / 40.0 + 1 / 2100.0), 1e-12);
  EXPECT_NEAR(c.c_sigma, (c.mu_eff + 2) / (10 + c.mu_eff + 5), 1e-12);
  EXPECT_NEAR(c.c_1, 2 / (std::pow(10 + 1.3, 2) + c.mu_eff), 1e-12);
}

TEST(CmaesTest, SampleMeanIsCentered) {
  const int n = 4;
  const Eigen::VectorXd theta0 = Eigen::Vector4d(0.5, -1.0, 2.0, 0.0);
  CmaState s = CmaesInit(theta0, 0.3, 99, 100);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  const int draws = 100000;
  for (int k = 0; k < draws / 100; ++k) {
    for (const auto& x : CmaesAsk(s)) sum += x;
  }
  const Eigen::VectorXd mean = sum / draws;
  for (int i = 0; i < n; ++i) {
    EXPECT_LE(std::abs(mean(i) - theta0(i)), 3 * 0.3 / std::sqrt(double(draws)));
  }
}

TEST(CmaesTest, AskCountsAndDegenerateSpread) {
  CmaState s = CmaesInit(Eigen::VectorXd::Zero(90), 1e-3, 1);
  EXPECT_EQ(CmaesAsk(s).size(), 17u);

  const Eigen::VectorXd m = Eigen::VectorXd::Constant(5, 0.25);
  CmaState tiny = CmaesInit(m, 1e-300, 1);
  for (const auto& x : CmaesAsk(tiny)) EXPECT_EQ(x, m);
}

TEST(CmaesTest, SameSeedSameSamples) {
  CmaState a = CmaesInit(Eigen::VectorXd::Zero(8), 0.5, 123);
  CmaState b = CmaesInit(Eigen::VectorXd::Zero(8), 0.5, 123);
  EXPECT_EQ(CmaesAsk(a), CmaesAsk(b));
  CmaState c = CmaesInit(Eigen::VectorXd::Zero(8), 0.5, 124);
  EXPECT_NE(CmaesAsk(a), CmaesAsk(c));
}

TEST(CmaesTest, SphereConverges) {
  Eigen::VectorXd opt(10);
  opt << 0.3, -0.2, 0.1, 0.5, -0.4, 0.0, 0.25, -0.1, 0.2, -0.3;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double best =
        Minimize(CmaesInit(Eigen::VectorXd::Zero(10), 0.5, seed),
                 [&](const Eigen::VectorXd& x) { return Sphere(x, opt); }, 2000,
                 1e-9);
    EXPECT_LT(best, 1e-9) << "seed " << seed;
  }
}

TEST(CmaesTest, SphereMeanConverges) {
  CmaState s = CmaesInit(Eigen::VectorXd::Ones(10), 0.5, 3);
  for (int evals = 0; evals + s.popsize <= 2000; evals += s.popsize) {
    const auto samples = CmaesAsk(s);
    std::vector<double> fit;
    for (const auto& x : samples) fit.push_back(x.squaredNorm());
    CmaesTell(s, samples, fit, false);
  }
  EXPECT_LT(s.mean.squaredNorm(), 1e-9);
}

TEST(CmaesTest, RosenbrockNineOfTen) {
  int solved = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double best =
        Minimize(CmaesInit(Eigen::VectorXd::Zero(10), 0.5, seed), Rosenbrock,
                 50000, 1e-6);
    solved += best < 1e-6;
  }
  EXPECT_GE(solved, 9);
}

TEST(CmaesTest, EqualFitnessStaysFinite) {
  CmaState s = CmaesInit(Eigen::VectorXd::Zero(5), 0.5, 8);
  const double sigma0 = s.sigma;
  const auto samples = CmaesAsk(s);
  std::vector<double> fit(samples.size(), 3.0);
  CmaesTell(s, samples, fit, false);
  EXPECT_TRUE(s.mean.allFinite());
  EXPECT_TRUE(s.cov.allFinite());
  EXPECT_NE(s.sigma, sigma0);
  EXPECT_EQ(s.generation, 1);
  // Ties rank by sample index, so the mean is the weighted first mu samples.
  const CmaConstants c = s.constants();
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < c.mu; ++i) expected += c.weights(i) * samples[i];
  EXPECT_LT((s.mean - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CmaesTest, RankingIsStable) {
  EXPECT_EQ(RankSamples({2.0, 1.0, 2.0, 1.0}, false),
            (std::vector<int>{1, 3, 0, 2}));
  EXPECT_EQ(RankSamples({2.0, 1.0, 2.0, 1.0}, true),
            (std::vector<int>{0, 2, 1, 3}));
}

TEST(CmaesTest, MaximizeEqualsMinimizingNegation) {
  CmaState a = CmaesInit(Eigen::VectorXd::Zero(6), 0.4, 21);
  CmaState b = a;
  for (int g = 0; g < 20; ++g) {
    const auto sa = CmaesAsk(a);
    const auto sb = CmaesAsk(b);
    ASSERT_EQ(sa, sb);
    std::vector<double> f, neg;
    for (const auto& x : sa) {
      f.push_back(-x.squaredNorm() + x(0));
      neg.push_back(-f.back());
    }
    CmaesTell(a, sa, f, true);
    CmaesTell(b, sb, neg, false);
    ExpectSameState(a, b);
  }
}

TEST(CmaesTest, RankInvariance) {
  CmaState a = CmaesInit(Eigen::VectorXd::Ones(7), 0.4, 22);
  CmaState b = a;
  for (int g = 0; g < 20; ++g) {
    const auto sa = CmaesAsk(a);
    const auto sb = CmaesAsk(b);
    std::vector<double> f, tf;
    for (const auto& x : sa) {
      f.push_back(Rosenbrock(x));
      tf.push_back(std::exp(0.01 * f.back()) * 3.0 + 7.0);
    }
    CmaesTell(a, sa, f, false);
    CmaesTell(b, sb, tf, false);
    ExpectSameState(a, b);
  }
}

TEST(CmaesTest, NonFiniteFitnessNamesTheSample) {
  CmaState s = CmaesInit(Eigen::VectorXd::Zero(3), 0.5, 1);
  const auto samples = CmaesAsk(s);
  std::vector<double> f(samples.size(), 1.0);
  f[4] = std::nan("");
  try {
    CmaesTell(s, samples, f, false);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
  }
}

TEST(CmaesTest, CovarianceStaysSymmetricPositiveDefinite) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n(0.0, 1.0);
  int updates = 0;
  for (int seq = 0; seq < 100; ++seq) {
    CmaState s = CmaesInit(Eigen::VectorXd::Zero(5), 0.5, seq + 1);
    for (int g = 0; g < 100; ++g) {
      const auto samples = CmaesAsk(s);
      std::vector<double> f;
      for (size_t i = 0; i < samples.size(); ++i) f.push_back(n(rng));
      CmaesTell(s, samples, f, seq % 2 == 0);
      ++updates;
      ASSERT_LT((s.cov - s.cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      ASSERT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s.cov)
                    .eigenvalues()
                    .minCoeff(),
                0.0);
      ASSERT_GT(s.sigma, 0.0);
    }
  }
  EXPECT_EQ(updates, 10000);
}

TEST(CmaesTest, TrajectoryIsReproducible) {
  auto run = [] {
    CmaState s = CmaesInit(Eigen::VectorXd::Zero(4), 0.3, 2024);
    for (int g = 0; g < 30; ++g) {
      const auto samples = CmaesAsk(s);
      std::vector<double> f;
      for (const auto& x : samples) f.push_back(Rosenbrock(x));
      CmaesTell(s, samples, f, false);
    }
    return s;
  };
  ExpectSameState(run(), run());
}

TaskGrid StrideGrid(const std::vector<int>& cells) {
  TaskGrid g(Axis{0.1, -0.2, 0.5}, Axis{0.1, -0.3, 0.3});
  for (int i : cells) g.Activate({i, 0});
  return g;
}

TEST(TaskGridTest, SampledTaskCounts) {
  EXPECT_EQ(NumSampledTasks(40, 0.1), 4);
  EXPECT_EQ(NumSampledTasks(5, 0.1), 1);
  EXPECT_EQ(NumSampledTasks(4, 0.1), 1);
  EXPECT_EQ(NumSampledTasks(7, 1.0), 7);

  TaskGrid g(Axis{0.1, -0.2, 0.5}, Axis{0.1, -0.3, 0.3});
  for (const Cell& c : TaskGrid::CellsInRange(g, -0.2, 0.5, -0.3, 0.3)) g.Activate(c);
  ASSERT_EQ(g.size(), 56);
  std::mt19937_64 rng(1);
  EXPECT_EQ(SampleTasks(g, 0.1, rng).size(), 5u);
  const auto all = SampleTaskCells(g, 1.0, rng);
  EXPECT_EQ(std::set<Cell>(all.begin(), all.end()), g.active());
  EXPECT_EQ(all.size(), 56u);
}

TEST(TaskGridTest, SamplingIsUniformWithoutReplacement) {
  TaskGrid g = StrideGrid({-1, 0, 1, 2, 3});
  std::mt19937_64 rng(5);
  std::map<Cell, int> counts;
  for (int k = 0; k < 20000; ++k) {
    const auto cells = SampleTaskCells(g, 0.4, rng);
    ASSERT_EQ(cells.size(), 2u);
    ASSERT_NE(cells[0], cells[1]);
    for (const Cell& c : cells) ++counts[c];
  }
  for (const auto& [cell, n] : counts) EXPECT_NEAR(n / 40000.0, 0.2, 0.01);
}

TEST(TaskGridTest, CellCentersAndLookup) {
  const TaskGrid g = StrideGrid({-1, 0, 1, 2});
  EXPECT_NEAR(g.TaskAt({2, 0}).stride, 0.2, 1e-15);
  EXPECT_NEAR(g.TaskAt({0, -3}).incline, -0.3, 1e-15);
  EXPECT_EQ(g.CellOf(Task{0.3, -0.1}), Cell(3, -1));
  EXPECT_TRUE(g.InBounds({5, 3}));
  EXPECT_FALSE(g.InBounds({6, 0}));
  EXPECT_FALSE(g.InBounds({0, -4}));
}

TEST(TaskGridTest, ExpansionAddsAxisNeighboursOfSuccesses) {
  TaskGrid g(Axis{0.1, -0.2, 0.5}, Axis{0.1, 0.0, 0.0});
  for (int i : {-1, 0, 1, 2}) {
    g.Activate({i, 0});
    g.SetSuccess({i, 0}, true);
  }
  const TaskGrid e = CurriculumExpand(g);
  std::set<Cell> expected;
  for (int i = -2; i <= 3; ++i) expected.insert({i, 0});
  EXPECT_EQ(e.active(), expected);
}

TEST(TaskGridTest, NoSuccessesNoChange) {
  TaskGrid g = StrideGrid({-1, 0, 1, 2});
  g.SetSuccess({0, 0}, false);
  EXPECT_EQ(CurriculumExpand(g), g);
}

TEST(TaskGridTest, ExpansionRespectsBoundsAndIncludesInclineNeighbours) {
  TaskGrid g = StrideGrid({5});
  g.SetSuccess({5, 0}, true);
  const TaskGrid e = CurriculumExpand(g);
  EXPECT_EQ(e.active(), (std::set<Cell>{{4, 0}, {5, -1}, {5, 0}, {5, 1}}));
}

TEST(TaskGridTest, SizeNeverDecreases) {
  std::mt19937_64 rng(9);
  std::bernoulli_distribution coin(0.3);
  TaskGrid g = StrideGrid({-1, 0, 1, 2});
  int prev = g.size();
  for (int round = 0; round < 50; ++round) {
    for (const Cell& c : g.active()) g.SetSuccess(c, coin(rng));
    g = CurriculumExpand(g);
    EXPECT_GE(g.size(), prev);
    prev = g.size();
  }
  EXPECT_THROW(g.Activate({9, 0}), std::invalid_argument);
}

}  // namespace
}  // namespace romshaper
