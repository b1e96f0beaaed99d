#include "romshaper/app/checkpoint.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace romshaper {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kFormat = "romshaper-checkpoint";
constexpr int kVersion = 1;

Json VectorToJson(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json MatrixToJson(const Eigen::MatrixXd& m) {
  Json a = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
  }
  return a;
}

Eigen::VectorXd VectorFromJson(const Json& j, Eigen::Index n,
                               const char* what) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n) {
    throw CheckpointError(std::string("checkpoint: bad size of ") + what);
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd MatrixFromJson(const Json& j, Eigen::Index n,
                               const char* what) {
  const Eigen::VectorXd flat = VectorFromJson(j, n * n, what);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = flat(r * n + c);
  }
  return m;
}

std::string EngineToString(const std::mt19937_64& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

std::mt19937_64 EngineFromString(const std::string& s) {
  std::istringstream is(s);
  std::mt19937_64 rng;
  is >> rng;
  if (is.fail()) throw CheckpointError("checkpoint: bad RNG state");
  return rng;
}

Json AxisToJson(const Axis& a) {
  return Json{{"step", a.step}, {"min", a.lo}, {"max", a.hi}};
}

Axis AxisFromJson(const Json& j) {
  return {j.at("step").get<double>(), j.at("min").get<double>(),
          j.at("max").get<double>()};
}

int DimYForParams(Eigen::Index n) {
  for (int d : {2, 3}) {
    if (d * BuildFeatureBasis(d).num_features() == n) return d;
  }
  throw CheckpointError("checkpoint: parameter count matches no ROM basis");
}

std::string HashToHex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

RomParams Checkpoint::MeanParams() const {
  return RomParams(BuildFeatureBasis(DimYForParams(state.cma.mean.size())))
      .WithFlat(state.cma.mean);
}

RomParams Checkpoint::BestParams() const {
  return RomParams(BuildFeatureBasis(DimYForParams(state.best_theta.size())))
      .WithFlat(state.best_theta);
}

std::string SerializeCheckpoint(const Checkpoint& ckpt) {
  const TrainingState& s = ckpt.state;
  const CmaState& c = s.cma;
  Json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["iteration"] = s.iteration;
  j["config_hash"] = HashToHex(ckpt.config_hash);
  j["basis"] = Json{{"dim_y", DimYForParams(c.mean.size())},
                    {"num_params", c.mean.size()}};
  Json cma;
  cma["generation"] = c.generation;
  cma["popsize"] = c.popsize;
  cma["sigma"] = c.sigma;
  cma["mean"] = VectorToJson(c.mean);
  cma["cov"] = MatrixToJson(c.cov);
  cma["basis"] = MatrixToJson(c.basis);
  cma["scales"] = VectorToJson(c.scales);
  cma["path_sigma"] = VectorToJson(c.path_sigma);
  cma["path_c"] = VectorToJson(c.path_c);
  cma["rng"] = EngineToString(c.rng);
  j["cma"] = std::move(cma);

  Json grid;
  grid["stride"] = AxisToJson(s.grid.stride_axis());
  grid["incline"] = AxisToJson(s.grid.incline_axis());
  Json active = Json::array();
  for (const Cell& cell : s.grid.active()) {
    active.push_back(Json::array({cell.first, cell.second}));
  }
  grid["active"] = std::move(active);
  Json success = Json::array();
  for (const auto& [cell, ok] : s.grid.success()) {
    success.push_back(Json::array({cell.first, cell.second, ok}));
  }
  grid["success"] = std::move(success);
  j["grid"] = std::move(grid);

  Json best;
  best["theta"] = VectorToJson(s.best_theta);
  if (std::isfinite(s.best_return)) {
    best["return"] = s.best_return;
  } else {
    best["return"] = nullptr;
  }
  j["best"] = std::move(best);
  j["task_rng"] = EngineToString(s.task_rng);
  return j.dump(1) + "\n";
}

Checkpoint ParseCheckpoint(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormat ||
        j.at("version").get<int>() != kVersion) {
      throw CheckpointError("checkpoint: unsupported format or version");
    }
    Checkpoint ckpt;
    TrainingState& s = ckpt.state;
    s.iteration = j.at("iteration").get<int>();
    ckpt.config_hash =
        std::stoull(j.at("config_hash").get<std::string>(), nullptr, 16);
    const Eigen::Index n = j.at("basis").at("num_params").get<Eigen::Index>();
    if (DimYForParams(n) != j.at("basis").at("dim_y").get<int>()) {
      throw CheckpointError("checkpoint: basis descriptor mismatch");
    }

    const Json& cj = j.at("cma");
    CmaState& c = s.cma;
    c.generation = cj.at("generation").get<int>();
    c.popsize = cj.at("popsize").get<int>();
    c.sigma = cj.at("sigma").get<double>();
    c.mean = VectorFromJson(cj.at("mean"), n, "cma.mean");
    c.cov = MatrixFromJson(cj.at("cov"), n, "cma.cov");
    c.basis = MatrixFromJson(cj.at("basis"), n, "cma.basis");
    c.scales = VectorFromJson(cj.at("scales"), n, "cma.scales");
    c.path_sigma = VectorFromJson(cj.at("path_sigma"), n, "cma.path_sigma");
    c.path_c = VectorFromJson(cj.at("path_c"), n, "cma.path_c");
    c.rng = EngineFromString(cj.at("rng").get<std::string>());
    if (!(c.sigma > 0.0) || c.popsize < 2) {
      throw CheckpointError("checkpoint: invalid CMA-ES state");
    }

    const Json& gj = j.at("grid");
    s.grid = TaskGrid(AxisFromJson(gj.at("stride")),
                      AxisFromJson(gj.at("incline")));
    for (const Json& cell : gj.at("active")) {
      s.grid.Activate({cell.at(0).get<int>(), cell.at(1).get<int>()});
    }
    for (const Json& cell : gj.at("success")) {
      s.grid.SetSuccess({cell.at(0).get<int>(), cell.at(1).get<int>()},
                        cell.at(2).get<bool>());
    }

    const Json& bj = j.at("best");
    s.best_theta = VectorFromJson(bj.at("theta"), n, "best.theta");
    s.best_return = bj.at("return").is_null()
                        ? -std::numeric_limits<double>::infinity()
                        : bj.at("return").get<double>();
    s.task_rng = EngineFromString(j.at("task_rng").get<std::string>());
    return ckpt;
  } catch (const Json::exception& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  const std::string text = SerializeCheckpoint(ckpt);
  // Written beside the target and renamed into place.
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw CheckpointError("cannot write checkpoint '" + path + "'");
    out << text;
    if (!out) throw CheckpointError("cannot write checkpoint '" + path + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw CheckpointError("cannot write checkpoint '" + path + "'");
  }
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read checkpoint '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseCheckpoint(ss.str());
}

std::string CheckpointFileName(int iteration) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "iter_%04d.ckpt", iteration);
  return buf;
}

}  // namespace romshaper
