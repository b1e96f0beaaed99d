#include "romshaper/eval/training.h"

#include <stdexcept>

namespace romshaper {
namespace {

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

EpisodeEvaluator RolloutEvaluator(const RolloutConfig& cfg) {
  return [cfg](const RomParams& params, const Task& task, std::uint64_t seed) {
    RolloutConfig c = cfg;
    c.episode.seed = seed;
    const RolloutTrace trace = Rollout(params, task, c);
    return TaskResult{task, EpisodeReturn(trace), EpisodeSucceeded(trace, c)};
  };
}

std::uint64_t EpisodeSeed(std::uint64_t master, int iteration, int sample,
                          int task) {
  std::uint64_t h = SplitMix(master);
  h = SplitMix(h ^ static_cast<std::uint64_t>(iteration));
  h = SplitMix(h ^ static_cast<std::uint64_t>(sample));
  return SplitMix(h ^ static_cast<std::uint64_t>(task));
}

TrainingState InitTraining(const TrainConfig& cfg, const RomParams& initial) {
  if (initial.dim_y() != cfg.dim_y) {
    throw std::invalid_argument("InitTraining: initial ROM has the wrong dim_y");
  }
  TrainingState s;
  s.cma = CmaesInit(initial.Flatten(), cfg.sigma0, SplitMix(cfg.seed),
                    cfg.popsize);
  s.grid = TaskGrid(cfg.stride_axis, cfg.incline_axis);
  const auto cells = TaskGrid::CellsInRange(
      s.grid, cfg.initial_stride_lo, cfg.initial_stride_hi,
      cfg.initial_incline_lo, cfg.initial_incline_hi);
  if (cells.empty()) {
    throw std::invalid_argument("InitTraining: empty initial task set");
  }
  for (const Cell& c : cells) s.grid.Activate(c);
  s.best_theta = s.cma.mean;
  s.task_rng.seed(SplitMix(cfg.seed ^ 0x5eedULL));
  return s;
}

IterationLog TrainIteration(TrainingState& state, const TrainConfig& cfg,
                            const EpisodeEvaluator& evaluate,
                            const WorkerPool& pool) {
  const int iter = state.iteration;
  if (cfg.expansion_period > 0 && iter % cfg.expansion_period == 0) {
    state.grid = CurriculumExpand(state.grid);
  }
  const std::vector<Cell> cells =
      SampleTaskCells(state.grid, cfg.task_fraction, state.task_rng);
  const std::vector<Eigen::VectorXd> samples = CmaesAsk(state.cma);
  const int n_samples = static_cast<int>(samples.size());
  const int n_tasks = static_cast<int>(cells.size());
  const RomParams base(BuildFeatureBasis(cfg.dim_y));

  std::vector<TaskResult> results(n_samples * n_tasks);
  pool.ParallelFor(n_samples * n_tasks, [&](int k) {
    const int i = k / n_tasks;
    const int j = k % n_tasks;
    const RomParams params = base.WithFlat(samples[i]);
    results[k] = evaluate(params, state.grid.TaskAt(cells[j]),
                          EpisodeSeed(cfg.seed, iter, i, j));
  });

  IterationLog log;
  log.iteration = iter + 1;
  log.best_return = -std::numeric_limits<double>::infinity();
  std::vector<double> fitness(n_samples, 0.0);
  int best = 0;
  for (int i = 0; i < n_samples; ++i) {
    for (int j = 0; j < n_tasks; ++j) fitness[i] += results[i * n_tasks + j].episode_return;
    fitness[i] /= n_tasks;
    log.mean_return += fitness[i] / n_samples;
    if (fitness[i] > log.best_return) {
      log.best_return = fitness[i];
      best = i;
    }
  }
  // The last sample in index order is the most recent episode on a cell.
  for (int j = 0; j < n_tasks; ++j) {
    state.grid.SetSuccess(cells[j],
                          results[(n_samples - 1) * n_tasks + j].success);
    log.tasks.push_back(state.grid.TaskAt(cells[j]));
  }
  if (log.best_return > state.best_return) {
    state.best_return = log.best_return;
    state.best_theta = samples[best];
  }
  CmaesTell(state.cma, samples, fitness, /*maximize=*/true);
  log.grid_size = state.grid.size();
  log.sigma = state.cma.sigma;
  state.iteration = iter + 1;
  return log;
}

void RunTraining(
    TrainingState& state, const TrainConfig& cfg,
    const EpisodeEvaluator& evaluate, const WorkerPool& pool,
    const std::function<void(const TrainingState&, const IterationLog&)>&
        on_iteration) {
  while (state.iteration < cfg.iterations) {
    // Work on a copy so a failed generation leaves the state untouched.
    TrainingState next = state;
    const IterationLog log = TrainIteration(next, cfg, evaluate, pool);
    state = std::move(next);
    if (on_iteration) on_iteration(state, log);
  }
}

}  // namespace romshaper
