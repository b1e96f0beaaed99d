// End-to-end acceptance suite. Each criterion prints one line:
//   <id> PASS|FAIL <summary>
// and the process exits non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <set>
#include <vector>

#include <CLI11.hpp>

#include "romshaper/app/checkpoint.h"
#include "romshaper/app/commands.h"
#include "romshaper/app/csv.h"
#include "romshaper/biped/dynamics.h"
#include "romshaper/control/rom_planner.h"
#include "romshaper/eval/gait.h"
#include "romshaper/eval/landscape.h"
#include "romshaper/eval/training.h"
#include "romshaper/learn/cmaes.h"
#include "support/lip_oracle.h"
#include "support/osc_oracle.h"

namespace romshaper {
namespace {

namespace fs = std::filesystem;
using namespace oracle;  // NOLINT

// Tolerances and budgets of every criterion.
constexpr int kA1Features = 30;
constexpr int kA1Params = 90;
constexpr int kA1Popsize = 17;
constexpr double kA2TolK5 = 1e-3;
constexpr double kA2TolK20 = 1e-5;
constexpr double kA2Seconds = 1.0;
constexpr int kA3Configurations = 1000;
constexpr double kA3EnergyDrift = 1e-3;
constexpr int kA3Touchdowns = 1000;
constexpr double kA3FootDrift = 1e-3;
constexpr int kA4Scenarios = 100;
constexpr double kA4AccelTol = 1e-6;
constexpr double kA4DynamicsTol = 1e-8;
constexpr double kA4OracleTol = 1e-6;
constexpr double kA5SphereTarget = 1e-9;
constexpr int kA5SphereBudget = 2000;
constexpr double kA5RosenTarget = 1e-6;
constexpr int kA5RosenBudget = 50000;
constexpr int kA5Required = 9;
constexpr int kA6Period = 30;
constexpr double kA6Fraction = 0.1;
constexpr int kA7Iterations = 100;
constexpr double kA7Sigma0 = 1e-3;
constexpr double kA7CostReduction = 0.05;
constexpr double kA8Pitch = 0.3;
constexpr int kA9Iterations = 60;

struct Verdict {
  bool pass = false;
  std::string summary;
};

struct Context {
  fs::path work_dir;
};

std::string Fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss << std::setprecision(precision) << v;
  return ss.str();
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "romshaper");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

// ---------------------------------------------------------------------------

Verdict A1() {
  const FeatureBasis basis = BuildFeatureBasis(3);
  const int params = RomParams(basis).num_params();
  const int pop = DefaultPopsize(params);
  const bool ok = basis.num_features() == kA1Features && params == kA1Params &&
                  pop == kA1Popsize;
  return {ok, "features(dim_y=3)=" + std::to_string(basis.num_features()) +
                  " params=" + std::to_string(params) +
                  " popsize(90)=" + std::to_string(pop)};
}

Verdict A2() {
  const auto start = std::chrono::steady_clock::now();
  const RomState y0(Eigen::Vector2d(0.0, 0.9), Eigen::Vector2d(0.3, 0.0));
  const LipOracle lip = LipOracle::ForHeight(9.81, 0.9);
  auto max_error = [&](int knots) {
    PlannerConfig cfg;
    cfg.footsteps_in_horizon = 1;
    cfg.knots_per_phase = knots;
    const PlanSolution sol = Plan(LipInit(9.81), y0, Vec2::Zero(),
                                  ComputeFsmState(0.0, FsmSchedule{}),
                                  Task{0.1, 0.0}, cfg);
    double err = 0.0;
    for (size_t i = 0; i < sol.knot_times.size(); ++i) {
      err = std::max(err, std::abs(sol.com_knots[i].y(0) -
                                   lip.Pos(0.0, 0.3, sol.knot_times[i])));
      err = std::max(err, std::abs(sol.com_knots[i].y(1) - 0.9));
    }
    return err;
  };
  const double e5 = max_error(5);
  const double e20 = max_error(20);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = e5 <= kA2TolK5 && e20 <= kA2TolK20 && secs < kA2Seconds;
  return {ok, "max|err| K=5 " + Fmt(e5) + " (<=" + Fmt(kA2TolK5) + "), K=20 " +
                  Fmt(e20) + " (<=" + Fmt(kA2TolK20) + "), " + Fmt(secs, 3) + " s"};
}

Verdict A3() {
  const BipedModel m;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_state = [&] {
    FullState x;
    x.q << u(rng), 1.0 + 0.2 * u(rng), 0.5 * u(rng), 0.6 * u(rng),
        0.8 + 0.25 * u(rng), 0.6 * u(rng), 0.8 + 0.25 * u(rng);
    for (int i = 0; i < kNq; ++i) x.v(i) = u(rng);
    return x;
  };

  int spd = 0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kA3Configurations; ++i) {
    const Mat7 mass = m.MassMatrix(random_state().q);
    const double e = Eigen::SelfAdjointEigenSolver<Mat7>(mass).eigenvalues().minCoeff();
    min_eig = std::min(min_eig, e);
    spd += (mass - mass.transpose()).cwiseAbs().maxCoeff() < 1e-12 && e > 0.0;
  }

  double worst_drift = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    FullState x = random_state();
    x.q(kBaseZ) = 1.5;
    x.q(kLeftLeg) = x.q(kRightLeg) = 0.8;
    x.v(kLeftLeg) = x.v(kRightLeg) = 0.0;
    const double e0 = m.KineticEnergy(x) + m.PotentialEnergy(x.q);
    for (int k = 0; k < 1000; ++k) {
      x = IntegrateStep(m, x, TorqueCommand{}, ContactMode::None());
    }
    const double e1 = m.KineticEnergy(x) + m.PotentialEnergy(x.q);
    worst_drift = std::max(worst_drift, std::abs(e1 - e0) / std::abs(e0));
  }

  int ke_ok = 0;
  for (int i = 0; i < kA3Touchdowns; ++i) {
    const FullState x = random_state();
    const FullState plus = ImpactMap(m, x, i % 2 ? Foot::kLeft : Foot::kRight);
    ke_ok += m.KineticEnergy(plus) <= m.KineticEnergy(x) + 1e-12;
  }

  const RolloutTrace walk = Rollout(LipInit(9.81), Task{0.1, 0.0}, RolloutConfig{});
  double foot_drift = 0.0;
  for (const TickRecord& tick : walk.ticks) {
    const Foot stance = StanceFoot(tick.fsm);
    Vec2 anchor = m.FootPosition(walk.ticks.front().x.q, Foot::kLeft);
    for (const StepRecord& s : walk.steps) {
      if (s.land_time <= tick.t + 1e-9) anchor = s.position;
    }
    if (tick.fsm.step_index == 0 && stance != Foot::kLeft) continue;
    foot_drift = std::max(foot_drift, (m.FootPosition(tick.x.q, stance) - anchor).norm());
  }

  const bool ok = spd == kA3Configurations && worst_drift < kA3EnergyDrift &&
                  ke_ok == kA3Touchdowns && foot_drift < kA3FootDrift &&
                  walk.outcome == Outcome::kCompleted;
  return {ok, "SPD " + std::to_string(spd) + "/" + std::to_string(kA3Configurations) +
                  " (min eig " + Fmt(min_eig) + "), flight drift " +
                  Fmt(100 * worst_drift) + "%, impact KE non-increase " +
                  std::to_string(ke_ok) + "/" + std::to_string(kA3Touchdowns) +
                  ", stance drift " + Fmt(1000 * foot_drift) + " mm"};
}

Verdict A4() {
  const BipedModel m;
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> uu(-1.0, 1.0);

  // Feasible: targets generated by an in-box torque with the contact force
  // inside the cone; tiny effort weight so the tracking optimum is exact.
  OscConfig exact_cfg;
  exact_cfg.effort_weight = 1e-12;
  double worst_acc = 0.0, worst_dyn = 0.0;
  int feasible = 0;
  while (feasible < kA4Scenarios) {
    const FullState x = RandomStance(rng);
    const Foot stance = feasible % 2 ? Foot::kRight : Foot::kLeft;
    const ContactMode c = ContactMode::Single(stance, m.FootPosition(x.q, stance));
    TorqueCommand u_true;
    u_true.u << 20 * uu(rng), 150 + 80 * uu(rng), 20 * uu(rng), 60 * uu(rng);
    const DynamicsResult truth = Dynamics(m, x, u_true, c, exact_cfg.baumgarte_omega);
    if (!InCone(truth.contact_force[static_cast<int>(stance)], m.params().friction,
                -1e-3)) {
      continue;
    }
    DesiredOutputs desired;
    desired.outputs = OutputSet(m, x, stance);
    for (TrackedOutput& o : desired.outputs) {
      const OutputKinematics k = EvalOutput(m, x, o.kind, o.foot);
      o.acc_ff = k.jac * truth.vdot + k.jdot_v;
    }
    const OscResult res = OscSolve(m, x, desired, c, exact_cfg);
    for (const TrackedOutput& o : desired.outputs) {
      const OutputKinematics k = EvalOutput(m, x, o.kind, o.foot);
      worst_acc = std::max(
          worst_acc, (k.jac * res.vdot + k.jdot_v - o.acc_ff).cwiseAbs().maxCoeff());
    }
    worst_dyn = std::max(worst_dyn, res.dynamics_residual);
    ++feasible;
  }

  // Saturating: large demands, default effort weight, compared with the
  // active-set enumeration over the torque box.
  const OscConfig cfg;
  double worst_oracle = 0.0;
  int saturating = 0, saturated = 0;
  for (int attempt = 0; attempt < 5000 && saturating < kA4Scenarios; ++attempt) {
    const FullState x = RandomStance(rng);
    const Foot stance = attempt % 2 ? Foot::kRight : Foot::kLeft;
    const ContactMode c = ContactMode::Single(stance, m.FootPosition(x.q, stance));
    DesiredOutputs desired;
    desired.outputs = OutputSet(m, x, stance);
    for (TrackedOutput& o : desired.outputs) {
      for (int i = 0; i < o.acc_ff.size(); ++i) o.acc_ff(i) = 60.0 * uu(rng);
    }
    const AffineDynamics a = Linearize(m, x, c, stance, cfg.baumgarte_omega);
    const Quadratic q = BuildObjective(m, x, desired.outputs, a, cfg.effort_weight);
    const Eigen::Vector4d ref = EnumerateBox(q, m.torque_limits());
    if (!InCone(a.force0 + a.dforce * ref, m.params().friction, -1e-6)) continue;
    bool at_bound = false;
    for (int i = 0; i < kNu; ++i) {
      at_bound |= std::abs(std::abs(ref(i)) - m.torque_limits()(i)) < 1e-12;
    }
    if (!at_bound) continue;
    const OscResult res = OscSolve(m, x, desired, c, cfg);
    worst_oracle = std::max(worst_oracle, (res.u.u - ref).cwiseAbs().maxCoeff());
    worst_dyn = std::max(worst_dyn, res.dynamics_residual);
    ++saturating;
    saturated += (res.u.u.cwiseAbs() - m.torque_limits()).cwiseAbs().minCoeff() < 1e-9;
  }
  const bool ok = worst_acc <= kA4AccelTol && worst_dyn <= kA4DynamicsTol &&
                  saturating == kA4Scenarios && worst_oracle <= kA4OracleTol &&
                  saturated == saturating;
  return {ok, "feasible " + std::to_string(feasible) + ": max accel err " +
                  Fmt(worst_acc) + "; dynamics residual " + Fmt(worst_dyn) +
                  "; saturating " + std::to_string(saturating) +
                  ": max |u - oracle| " + Fmt(worst_oracle)};
}

template <typename F>
double BestWithin(CmaState s, F f, int budget, double target) {
  int evals = 0;
  double best = std::numeric_limits<double>::infinity();
  while (evals + s.popsize <= budget) {
    const auto samples = CmaesAsk(s);
    std::vector<double> fit;
    for (const auto& x : samples) {
      fit.push_back(f(x));
      best = std::min(best, fit.back());
    }
    evals += s.popsize;
    if (best < target) break;
    CmaesTell(s, samples, fit, false);
  }
  return best;
}

double Rosenbrock(const Eigen::VectorXd& x) {
  double f = 0.0;
  for (int i = 0; i + 1 < x.size(); ++i) {
    f += 100.0 * std::pow(x(i + 1) - x(i) * x(i), 2) + std::pow(1.0 - x(i), 2);
  }
  return f;
}

Verdict A5() {
  int sphere = 0, rosen = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Eigen::VectorXd opt = Eigen::VectorXd::LinSpaced(10, -0.5, 0.5);
    sphere += BestWithin(CmaesInit(Eigen::VectorXd::Zero(10), 0.5, seed),
                         [&](const Eigen::VectorXd& x) { return (x - opt).squaredNorm(); },
                         kA5SphereBudget, kA5SphereTarget) < kA5SphereTarget;
    rosen += BestWithin(CmaesInit(Eigen::VectorXd::Zero(10), 0.5, seed), Rosenbrock,
                        kA5RosenBudget, kA5RosenTarget) < kA5RosenTarget;
  }
  // Rank invariance: a strictly increasing transform of the fitness leaves
  // every state bit-identical.
  CmaState a = CmaesInit(Eigen::VectorXd::Ones(10), 0.3, 77);
  CmaState b = a;
  bool invariant = true;
  for (int g = 0; g < 50; ++g) {
    const auto sa = CmaesAsk(a);
    const auto sb = CmaesAsk(b);
    std::vector<double> f, tf;
    for (const auto& x : sa) {
      f.push_back(Rosenbrock(x));
      tf.push_back(std::cbrt(f.back()) * 5.0 - 2.0);
    }
    CmaesTell(a, sa, f, false);
    CmaesTell(b, sb, tf, false);
    invariant &= sa == sb && a.mean == b.mean && a.cov == b.cov && a.sigma == b.sigma;
  }
  const bool ok = sphere >= kA5Required && rosen >= kA5Required && invariant;
  return {ok, "sphere " + std::to_string(sphere) + "/10, rosenbrock " +
                  std::to_string(rosen) + "/10, rank invariance " +
                  (invariant ? "exact" : "violated")};
}

Verdict A6() {
  TrainConfig cfg;
  cfg.iterations = 91;
  cfg.seed = 6;
  TrainingState s = InitTraining(cfg, LipInit(9.81));
  std::set<Cell> initial;
  for (int i = -1; i <= 2; ++i) initial.insert({i, 0});
  const bool initial_ok = s.grid.active() == initial && cfg.expansion_period == kA6Period &&
                          cfg.task_fraction == kA6Fraction;
  auto stub = [](const RomParams& p, const Task& t, std::uint64_t) {
    return TaskResult{t, -p.Flatten().squaredNorm(), true};
  };
  std::vector<int> growth;
  bool counts_ok = true, monotone = true;
  int prev = s.grid.size();
  RunTraining(s, cfg, stub, WorkerPool(1),
              [&](const TrainingState& st, const IterationLog& log) {
                const int before = log.grid_size;
                counts_ok &= static_cast<int>(log.tasks.size()) ==
                             std::max(1, static_cast<int>(std::floor(
                                             kA6Fraction * before)));
                monotone &= log.grid_size >= prev;
                if (log.grid_size > prev) growth.push_back(st.iteration - 1);
                prev = log.grid_size;
              });
  const bool ok = initial_ok && counts_ok && monotone &&
                  growth == std::vector<int>{30, 60, 90};
  std::string at;
  for (int g : growth) at += (at.empty() ? "" : ",") + std::to_string(g);
  return {ok, "initial strides -0.1..0.2 @ incline 0: " +
                  std::string(initial_ok ? "yes" : "no") + ", expansions at iterations {" +
                  at + "}, N_gamma formula " + (counts_ok ? "holds" : "violated") +
                  ", |grid| " + (monotone ? "non-decreasing" : "decreased")};
}

// --- Training fixture shared by A7 and A8 -----------------------------------

fs::path TrainingDir(const Context& ctx) { return ctx.work_dir / "a7_training"; }

std::string TrainingConfigText() {
  // Expansion period beyond the budget keeps training on the initial grid.
  return "train:\n  iterations: " + std::to_string(kA7Iterations) +
         "\n  sigma0: " + Fmt(kA7Sigma0) + "\n  expansion_period: " +
         std::to_string(kA7Iterations + 1) + "\n  seed: 7\n";
}

Verdict TrainFixture(const Context& ctx) {
  const fs::path dir = TrainingDir(ctx);
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "train.yaml";
  std::ofstream(cfg) << TrainingConfigText();
  const auto start = std::chrono::steady_clock::now();
  const CliRun r = Cli({"--config", cfg.string(), "-o", (dir / "run").string(), "train"});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = r.code == 0 &&
                  fs::exists(dir / "run" / "checkpoints" / CheckpointFileName(kA7Iterations));
  return {ok, std::to_string(kA7Iterations) + " iterations in " + Fmt(secs, 3) + " s" +
                  (ok ? "" : " (exit " + std::to_string(r.code) + ": " + r.err + ")")};
}

fs::path FinalCheckpoint(const Context& ctx) {
  return TrainingDir(ctx) / "run" / "checkpoints" / CheckpointFileName(kA7Iterations);
}

Verdict A7(const Context& ctx) {
  if (!fs::exists(FinalCheckpoint(ctx))) return {false, "training checkpoint missing"};
  const Checkpoint ckpt = LoadCheckpoint(FinalCheckpoint(ctx).string());
  const RunConfig cfg = LoadConfig((TrainingDir(ctx) / "run" / "config.yaml").string());
  const RomParams theta0 = LipInit(cfg.rollout.biped.gravity);
  const RomParams best = ckpt.BestParams();

  // Mean return over the whole initial grid with shared per-task seeds.
  std::vector<Task> grid;
  std::vector<std::uint64_t> seeds;
  for (const Cell& c : ckpt.state.grid.active()) {
    grid.push_back(ckpt.state.grid.TaskAt(c));
    seeds.push_back(EpisodeSeed(cfg.train.seed, 0, 0, static_cast<int>(seeds.size())));
  }
  const double r0 = EvalReturn(theta0, grid, cfg.rollout, seeds).mean_return;
  const double r_best = EvalReturn(best, grid, cfg.rollout, seeds).mean_return;

  const auto history = ParseCsv(ReadFile(TrainingDir(ctx) / "run" / "history.csv"));
  const double logged0 = history.size() > 1 ? std::stod(history[1][2]) : NAN;

  RolloutConfig rc = cfg.rollout;
  rc.episode.seed = 11;
  const Task flat{0.1, 0.0};
  const auto h_lip = QualifiedGait(Rollout(theta0, flat, rc), cfg.periodicity);
  const auto h_best = QualifiedGait(Rollout(best, flat, rc), cfg.periodicity);
  double reduction = NAN;
  if (h_lip && h_best) reduction = 1.0 - h_best->cost / h_lip->cost;

  const bool return_ok = r_best > r0;
  const bool cost_ok = h_lip && h_best && reduction >= kA7CostReduction;
  std::string summary = "grid mean return LIP " + Fmt(r0, 6) + " -> best " +
                        Fmt(r_best, 6) + " (" + (return_ok ? "improved" : "not improved") +
                        "; first logged iteration sampled mean " + Fmt(logged0, 6) + "); H(0.1 m, flat) ";
  if (h_lip && h_best) {
    summary += "LIP " + Fmt(h_lip->cost, 6) + " -> " + Fmt(h_best->cost, 6) +
               ", reduction " + Fmt(100 * reduction, 3) + "% (need >= " +
               Fmt(100 * kA7CostReduction) + "%)";
  } else {
    summary += std::string("no periodic gait for ") + (h_lip ? "trained model" : "LIP");
  }
  return {return_ok && cost_ok, summary};
}

Verdict A8(const Context& ctx) {
  if (!fs::exists(FinalCheckpoint(ctx))) return {false, "training checkpoint missing"};
  const auto start = std::chrono::steady_clock::now();
  const fs::path cfg = TrainingDir(ctx) / "run" / "config.yaml";
  const CliRun r = Cli({"--config", cfg.string(), "retarget", "--params",
                        "ckpt:" + FinalCheckpoint(ctx).string(), "--pitch",
                        Fmt(kA8Pitch), "--stride", "0.1", "--incline", "0"});
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool completed = r.code == 0 &&
                         r.out.find("outcome: Completed") != std::string::npos &&
                         r.out.find("ticks: 100") != std::string::npos;
  std::string pitch = "n/a";
  if (const auto pos = r.out.find("mean_torso_pitch: "); pos != std::string::npos) {
    pitch = r.out.substr(pos + 18, r.out.find('\n', pos) - pos - 18);
  }
  return {completed, std::string(completed ? "Completed 100/100 ticks" : "did not complete") +
                         " with pitch override " + Fmt(kA8Pitch) +
                         " rad, mean torso pitch " + pitch + " rad, " + Fmt(secs, 3) + " s"};
}

Verdict A9(const Context& ctx) {
  // Traces: same (params, task, seed) twice, compared through the
  // round-trip exact CSV form.
  RolloutConfig rc;
  rc.episode.seed = 99;
  std::ostringstream t1, t2;
  WriteTraceCsv(t1, Rollout(LipInit(9.81), Task{0.2, 0.1}, rc));
  WriteTraceCsv(t2, Rollout(LipInit(9.81), Task{0.2, 0.1}, rc));
  const bool traces = t1.str() == t2.str();

  const fs::path dir = ctx.work_dir / "a9_persistence";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "train.yaml";
  std::ofstream(cfg) << "train:\n  seed: 3\n";
  const std::string n = std::to_string(kA9Iterations);
  const std::string half = std::to_string(kA9Iterations / 2);
  const CliRun straight = Cli({"--config", cfg.string(), "-o", (dir / "straight").string(),
                               "train", "--iterations", n});
  const CliRun first = Cli({"--config", cfg.string(), "-o", (dir / "split").string(),
                            "train", "--iterations", half});
  const fs::path mid = dir / "split" / "checkpoints" / CheckpointFileName(kA9Iterations / 2);
  const CliRun second = Cli({"--config", cfg.string(), "-o", (dir / "split").string(),
                             "train", "--resume", mid.string(), "--iterations", n});
  const bool ran = straight.code == 0 && first.code == 0 && second.code == 0;
  int identical = 0;
  for (int i = 1; i <= kA9Iterations; ++i) {
    const std::string name = CheckpointFileName(i);
    const std::string a = ReadFile(dir / "straight" / "checkpoints" / name);
    identical += !a.empty() && a == ReadFile(dir / "split" / "checkpoints" / name);
  }
  const bool history = ReadFile(dir / "straight" / "history.csv") ==
                       ReadFile(dir / "split" / "history.csv");
  const bool ok = traces && ran && identical == kA9Iterations && history;
  return {ok, std::string("repeated trace ") + (traces ? "bit-identical" : "differs") +
                  "; train-" + n + " vs train-" + half + "+resume-" + half + ": " +
                  std::to_string(identical) + "/" + n + " checkpoints byte-identical, history " +
                  (history ? "identical" : "differs")};
}

Verdict A10() {
  // Self-comparison on real rollouts.
  const RomParams lip = LipInit(9.81);
  const LandscapeGrid self =
      CostLandscape(lip, lip, TaskRange(-0.1, 0.2, 0.1, 0.0, 0.0, 0.1), RolloutConfig{},
                    {}, WorkerPool(0));
  int both = 0;
  bool ratios = true;
  for (const LandscapeCell& c : self.cells) {
    if (c.label == RegionLabel::kBoth) {
      ++both;
      ratios &= c.ratio && *c.ratio == 1.0;
    } else {
      ratios &= c.label == RegionLabel::kNeither;
    }
  }
  ratios &= both > 0;

  // Labels from constructed step sequences.
  auto steps = [](std::vector<double> strides) {
    RolloutTrace t;
    for (double s : strides) {
      StepRecord r;
      r.stride = s;
      r.mean_pelvis_height = 0.95;
      r.effort = 100.0;
      r.sim_steps = 350;
      t.steps.push_back(r);
    }
    return t;
  };
  const PeriodicityCriteria crit;
  const auto good = QualifiedGait(steps({0.2, 0.2, 0.2, 0.2}), crit);
  const auto bad = QualifiedGait(steps({0.18, 0.21, 0.18, 0.21}), crit);
  const Task t{0.2, 0.0};
  const bool labels = ClassifyCell(t, good, bad).label == RegionLabel::kGainedByA &&
                      ClassifyCell(t, bad, good).label == RegionLabel::kLostByA &&
                      ClassifyCell(t, good, good).label == RegionLabel::kBoth &&
                      ClassifyCell(t, bad, bad).label == RegionLabel::kNeither;

  // Each threshold rejects a range equal to it and accepts one just below.
  auto window = [](int field, double spread) {
    std::vector<StepRecord> s(4);
    for (StepRecord& r : s) {
      r.stride = 0.0;
      r.mean_pelvis_height = 0.0;
      r.mean_pitch = 0.0;
    }
    double* v = field == 0 ? &s[1].stride
                           : field == 1 ? &s[1].mean_pelvis_height : &s[1].mean_pitch;
    *v = spread;
    return ExtractPeriodicGait(s, PeriodicityCriteria{}).has_value();
  };
  const double limits[3] = {0.02, 0.03, 0.1};
  bool thresholds = crit.stride_range == 0.02 && crit.pelvis_height_range == 0.03 &&
                    crit.pitch_range == 0.1 && crit.window == 4;
  for (int f = 0; f < 3; ++f) {
    thresholds &= !window(f, limits[f]) && window(f, std::nextafter(limits[f], 0.0));
  }
  const std::vector<StepRecord> three(3);
  thresholds &= !ExtractPeriodicGait(three, crit).has_value();

  const bool ok = ratios && labels && thresholds;
  return {ok, "self-comparison: " + std::to_string(both) + " Both cells, ratios " +
                  (ratios ? "all 1.0" : "not 1.0") + "; synthetic labels " +
                  (labels ? "correct" : "wrong") + "; thresholds 0.02/0.03/0.1/4 " +
                  (thresholds ? "exact" : "violated")};
}

}  // namespace
}  // namespace romshaper

int main(int argc, char** argv) {
  using namespace romshaper;
  CLI::App app{"romshaper acceptance suite"};
  std::string work_dir = (fs::temp_directory_path() / "romshaper_acceptance").string();
  std::vector<std::string> ids;
  app.add_option("--work-dir", work_dir, "Scratch directory for training runs");
  app.add_option("ids", ids, "Criteria to run (A1..A10, train); default all");
  CLI11_PARSE(app, argc, argv);

  const Context ctx{work_dir};
  fs::create_directories(ctx.work_dir);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> all = {
      {"A1", A1},
      {"A2", A2},
      {"A3", A3},
      {"A4", A4},
      {"A5", A5},
      {"A6", A6},
      {"train", [&] { return TrainFixture(ctx); }},
      {"A7", [&] { return A7(ctx); }},
      {"A8", [&] { return A8(ctx); }},
      {"A9", [&] { return A9(ctx); }},
      {"A10", A10},
  };
  if (ids.empty()) {
    for (const auto& [id, fn] : all) ids.push_back(id);
  }
  bool all_pass = true;
  for (const std::string& id : ids) {
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const auto& e) { return e.first == id; });
    if (it == all.end()) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    Verdict v;
    try {
      v = it->second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    all_pass &= v.pass;
    std::cout << std::left << std::setw(6) << id << (v.pass ? "PASS  " : "FAIL  ")
              << v.summary << std::endl;
  }
  return all_pass ? 0 : 1;
}
