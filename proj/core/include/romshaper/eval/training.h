#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "romshaper/eval/rollout.h"
#include "romshaper/eval/worker_pool.h"
#include "romshaper/learn/cmaes.h"
#include "romshaper/learn/task_grid.h"
#include "romshaper/rom/rom.h"

namespace romshaper {

struct TrainConfig {
  double sigma0 = 1e-3;
  /// Fraction of active cells evaluated per iteration.
  double task_fraction = 0.1;
  /// The grid grows every this many iterations.
  int expansion_period = 30;
  int iterations = 100;
  /// 0 selects DefaultPopsize.
  int popsize = 0;
  std::uint64_t seed = 1;
  /// 0 selects the hardware concurrency.
  int workers = 0;
  int dim_y = 2;
  /// Global task bounds and discretization.
  Axis stride_axis{0.1, -0.2, 0.5};
  Axis incline_axis{0.1, -0.3, 0.3};
  /// Initially active rectangle.
  double initial_stride_lo = -0.1;
  double initial_stride_hi = 0.2;
  double initial_incline_lo = 0.0;
  double initial_incline_hi = 0.0;
};

/// Everything needed to continue training bit-identically.
struct TrainingState {
  /// Completed iterations; the next one has this 0-based index.
  int iteration = 0;
  CmaState cma;
  TaskGrid grid;
  Eigen::VectorXd best_theta;
  double best_return = -std::numeric_limits<double>::infinity();
  std::mt19937_64 task_rng;
};

struct IterationLog {
  /// 1-based number of the completed iteration.
  int iteration = 0;
  double best_return = 0.0;
  double mean_return = 0.0;
  int grid_size = 0;
  /// Step size after the update.
  double sigma = 0.0;
  std::vector<Task> tasks;
};

/// Return and success flag of one episode.
using EpisodeEvaluator =
    std::function<TaskResult(const RomParams&, const Task&, std::uint64_t)>;

/// Evaluator running the full ROM-MPC rollout.
EpisodeEvaluator RolloutEvaluator(const RolloutConfig& cfg);

/// Seed of one episode from (master seed, iteration, sample, task).
std::uint64_t EpisodeSeed(std::uint64_t master, int iteration, int sample,
                          int task);

/// Search centered on `initial` (normally LipInit) with the initial task
/// rectangle active.
TrainingState InitTraining(const TrainConfig& cfg, const RomParams& initial);

/// One generation: optional curriculum growth, task sampling, ask,
/// parallel evaluation, tell (maximizing the mean return), success flags.
IterationLog TrainIteration(TrainingState& state, const TrainConfig& cfg,
                            const EpisodeEvaluator& evaluate,
                            const WorkerPool& pool);

/// Runs until cfg.iterations are complete, calling on_iteration after each.
void RunTraining(
    TrainingState& state, const TrainConfig& cfg,
    const EpisodeEvaluator& evaluate, const WorkerPool& pool,
    const std::function<void(const TrainingState&, const IterationLog&)>&
        on_iteration = {});

}  // namespace romshaper
