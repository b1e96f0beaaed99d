#include "romshaper/app/commands.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "romshaper/app/checkpoint.h"
#include "romshaper/app/csv.h"
#include "romshaper/biped/dynamics.h"
#include "romshaper/control/osc.h"
#include "romshaper/eval/landscape.h"
#include "romshaper/eval/training.h"

namespace romshaper {
namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string out;
};

struct TaskOptions {
  double stride = 0.0;
  double incline = 0.0;
};

RunConfig LoadRunConfig(const GlobalOptions& g) {
  RunConfig cfg = g.config_path.empty() ? RunConfig{} : LoadConfig(g.config_path);
  if (g.seed) {
    cfg.rollout.episode.seed = *g.seed;
    cfg.train.seed = *g.seed;
  }
  return cfg;
}

void PrintTrace(std::ostream& out, const RolloutTrace& trace) {
  out << "outcome: " << ToString(trace.outcome);
  if (trace.outcome == Outcome::kFell) {
    out << " at t=" << trace.fall_time << " s (" << trace.diagnostic << ")";
  }
  out << "\nticks: " << trace.size() << "\nreturn: " << EpisodeReturn(trace)
      << "\naccumulated_h: " << trace.total_h() << "\n";
}

void WriteTrace(const std::string& path, const RolloutTrace& trace) {
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  WriteTraceCsv(f, trace);
}

// Rewrites history.csv keeping the rows of iterations <= keep.
void TrimHistory(const fs::path& path, int keep) {
  std::vector<std::vector<std::string>> rows;
  if (fs::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    rows = ParseCsv(ss.str());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  WriteHistoryHeader(out);
  for (size_t i = 1; i < rows.size(); ++i) {
    if (!rows[i].empty() && std::atoi(rows[i][0].c_str()) <= keep) {
      WriteCsvRow(out, rows[i]);
    }
  }
}

int CmdTrain(const GlobalOptions& g, const std::string& resume,
             int iterations, std::ostream& out, std::ostream& err) {
  RunConfig cfg = LoadRunConfig(g);
  if (iterations >= 0) cfg.train.iterations = iterations;
  const fs::path dir = g.out.empty() ? fs::path(cfg.output_dir) : fs::path(g.out);
  const std::uint64_t hash = ConfigHash(cfg);

  TrainingState state;
  if (!resume.empty()) {
    Checkpoint ckpt = LoadCheckpoint(resume);
    if (ckpt.config_hash != hash) {
      err << "error: checkpoint '" << resume
          << "' was written with a different configuration\n";
      return kExitStateMismatch;
    }
    state = std::move(ckpt.state);
    out << "resuming at iteration " << state.iteration + 1 << "\n";
  } else {
    state = InitTraining(cfg.train,
                         LipInit(cfg.rollout.biped.gravity, cfg.train.dim_y));
  }

  fs::create_directories(dir / "checkpoints");
  SaveConfig(cfg, (dir / "config.yaml").string());
  const fs::path history_path = dir / "history.csv";
  TrimHistory(history_path, resume.empty() ? 0 : state.iteration);
  std::ofstream history(history_path, std::ios::binary | std::ios::app);

  const WorkerPool pool(ResolveWorkers(g.workers, cfg));
  out << "training with " << pool.workers() << " workers\n";
  try {
    RunTraining(state, cfg.train, RolloutEvaluator(cfg.rollout), pool,
                [&](const TrainingState& s, const IterationLog& log) {
                  SaveCheckpoint(
                      {s, hash},
                      (dir / "checkpoints" / CheckpointFileName(s.iteration))
                          .string());
                  WriteHistoryRow(history, log);
                  history.flush();
                  out << "iter " << log.iteration << " best " << log.best_return
                      << " mean " << log.mean_return << " tasks "
                      << log.grid_size << " sigma " << log.sigma << "\n";
                });
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    err << "error: training failed: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int CmdRollout(const GlobalOptions& g, const std::string& source,
               const TaskOptions& task, std::ostream& out) {
  const RunConfig cfg = LoadRunConfig(g);
  const RomParams params = ResolveParams(source, cfg);
  const RolloutTrace trace =
      Rollout(params, Task{task.stride, task.incline}, cfg.rollout);
  WriteTrace(g.out, trace);
  PrintTrace(out, trace);
  return kExitOk;
}

int CmdRetarget(const GlobalOptions& g, const std::string& source,
                double pitch, const TaskOptions& task, std::ostream& out,
                std::ostream& err) {
  if (!(std::abs(pitch) <= 0.5)) {
    err << "error: --pitch " << pitch << " is outside [-0.5, 0.5] rad\n";
    return kExitUsage;
  }
  RunConfig cfg = LoadRunConfig(g);
  const RomParams params = ResolveParams(source, cfg);
  cfg.rollout.controller.retarget = RetargetOverrides{pitch, {}, {}};
  const RolloutTrace trace =
      Rollout(params, Task{task.stride, task.incline}, cfg.rollout);
  WriteTrace(g.out, trace);
  PrintTrace(out, trace);
  double mean_pitch = 0.0;
  for (const auto& t : trace.ticks) mean_pitch += t.x.q(kPitch);
  if (!trace.ticks.empty()) mean_pitch /= trace.size();
  out << "mean_torso_pitch: " << mean_pitch << "\n";
  return kExitOk;
}

int CmdLandscape(const GlobalOptions& g, const std::string& source_a,
                 const std::string& source_b, const double (&range)[6],
                 std::ostream& out) {
  const RunConfig cfg = LoadRunConfig(g);
  const RomParams a = ResolveParams(source_a, cfg);
  const RomParams b = ResolveParams(source_b, cfg);
  const std::vector<Task> tasks =
      TaskRange(range[0], range[1], range[2], range[3], range[4], range[5]);
  const WorkerPool pool(ResolveWorkers(g.workers, cfg));
  const LandscapeGrid grid =
      CostLandscape(a, b, tasks, cfg.rollout, cfg.periodicity, pool);
  if (!g.out.empty()) {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + g.out + "'");
    WriteLandscapeCsv(f, grid);
  }
  const LandscapeSummary s = grid.Summary();
  out << "cells: " << grid.cells.size() << "\nboth: " << s.both
      << "\ngained_by_a: " << s.gained << "\nlost_by_a: " << s.lost
      << "\nneither: " << s.neither << "\nregion_a: " << s.region_a
      << "\nregion_b: " << s.region_b << "\nmean_ratio: ";
  if (s.mean_ratio) {
    out << *s.mean_ratio;
  } else {
    out << "n/a";
  }
  out << "\nregion_change_percent: ";
  if (s.region_change) {
    out << 100.0 * *s.region_change;
  } else {
    out << "n/a";
  }
  out << "\n";
  return kExitOk;
}

}  // namespace

RomParams ResolveParams(const std::string& source, const RunConfig& config) {
  if (source == "lip") {
    return LipInit(config.rollout.biped.gravity, config.train.dim_y);
  }
  if (source.rfind("best:", 0) == 0) {
    return LoadCheckpoint(source.substr(5)).BestParams();
  }
  const std::string path =
      source.rfind("ckpt:", 0) == 0 ? source.substr(5) : source;
  return LoadCheckpoint(path).MeanParams();
}

int ResolveWorkers(int flag, const RunConfig& config) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("ROMSHAPER_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return config.train.workers;
}

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Reduced-order model learning for a planar biped"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Run configuration (YAML)");
  app.add_option("--seed", g.seed, "Seed override");
  app.add_option("--workers", g.workers, "Worker threads (0: auto)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("-o,--out", g.out,
                 "Output directory (train) or output file (other commands)");

  std::string resume;
  int iterations = -1;
  auto* train = app.add_subcommand("train", "Run CMA-ES training");
  train->fallthrough();
  train->add_option("--resume", resume, "Checkpoint to continue from");
  train->add_option("--iterations", iterations, "Override the iteration budget")
      ->check(CLI::NonNegativeNumber);

  std::string params = "lip";
  TaskOptions task;
  auto* rollout = app.add_subcommand("rollout", "Run one episode");
  rollout->fallthrough();
  rollout->add_option("--params", params, "lip | ckpt:<path> | best:<path>");
  rollout->add_option("--stride", task.stride, "Stride length (m)")->required();
  rollout->add_option("--incline", task.incline, "Ground incline (rad)")
      ->required();

  std::string source_a, source_b = "lip";
  double range[6] = {-0.2, 0.5, 0.1, -0.3, 0.3, 0.1};
  auto* landscape =
      app.add_subcommand("landscape", "Compare two models over a task grid");
  landscape->fallthrough();
  landscape->add_option("--a", source_a, "Model A")->required();
  landscape->add_option("--b", source_b, "Model B");
  landscape->add_option("--stride-min", range[0]);
  landscape->add_option("--stride-max", range[1]);
  landscape->add_option("--stride-step", range[2])->check(CLI::PositiveNumber);
  landscape->add_option("--incline-min", range[3]);
  landscape->add_option("--incline-max", range[4]);
  landscape->add_option("--incline-step", range[5])->check(CLI::PositiveNumber);

  double pitch = 0.0;
  std::string retarget_params;
  TaskOptions retarget_task;
  auto* retarget = app.add_subcommand(
      "retarget", "Run one episode with a torso pitch override");
  retarget->fallthrough();
  retarget->add_option("--params", retarget_params, "ckpt:<path> | lip")
      ->required();
  retarget->add_option("--pitch", pitch, "Torso pitch target (rad)")
      ->required();
  retarget->add_option("--stride", retarget_task.stride)->required();
  retarget->add_option("--incline", retarget_task.incline)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*train) return CmdTrain(g, resume, iterations, out, err);
    if (*rollout) return CmdRollout(g, params, task, out);
    if (*landscape) return CmdLandscape(g, source_a, source_b, range, out);
    if (*retarget) {
      return CmdRetarget(g, retarget_params, pitch, retarget_task, out, err);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SimulationDiverged& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const OscError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DegenerateComHeight& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace romshaper
