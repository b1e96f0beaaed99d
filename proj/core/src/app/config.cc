#include "romshaper/app/config.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include <yaml-cpp/yaml.h>

namespace romshaper {
namespace {

// Returns an error message for an out-of-range value, empty if valid.
using Check = std::function<std::string(double)>;

Check Positive() {
  return [](double v) { return v > 0.0 ? "" : std::string("must be > 0"); };
}
Check NonNegative() {
  return [](double v) { return v >= 0.0 ? "" : std::string("must be >= 0"); };
}
Check AtLeast(double lo) {
  return [lo](double v) {
    return v >= lo ? "" : "must be >= " + std::to_string(static_cast<long long>(lo));
  };
}
Check InRange(double lo, double hi) {
  return [lo, hi](double v) {
    if (v >= lo && v <= hi) return std::string();
    std::ostringstream os;
    os << "must be in [" << lo << ", " << hi << "]";
    return os.str();
  };
}
Check Finite() {
  return [](double v) { return std::isfinite(v) ? "" : std::string("must be finite"); };
}

std::string FormatDouble(double v) {
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

class Reader {
 public:
  explicit Reader(const YAML::Node& root) { frames_.push_back({root, "", {}}); }

  template <typename F>
  void Section(const char* key, F&& body) {
    const YAML::Node child = Lookup(key);
    if (child.IsDefined() && !child.IsNull() && !child.IsMap()) {
      Fail(Join(key), "expected a mapping", child);
    }
    frames_.push_back({child, Join(key), {}});
    body();
    RejectUnknown(frames_.back());
    frames_.pop_back();
  }

  void Field(const char* key, double& value, const Check& check = Finite()) {
    const YAML::Node n = Lookup(key);
    if (!n.IsDefined() || n.IsNull()) return;
    double v = 0.0;
    try {
      v = n.as<double>();
    } catch (const YAML::Exception&) {
      Fail(Join(key), "expected a number", n);
    }
    Validate(key, v, check, n);
    value = v;
  }

  void Field(const char* key, int& value, const Check& check = nullptr) {
    const YAML::Node n = Lookup(key);
    if (!n.IsDefined() || n.IsNull()) return;
    int v = 0;
    try {
      v = n.as<int>();
    } catch (const YAML::Exception&) {
      Fail(Join(key), "expected an integer", n);
    }
    Validate(key, v, check, n);
    value = v;
  }

  void Field(const char* key, std::uint64_t& value, const Check& = nullptr) {
    const YAML::Node n = Lookup(key);
    if (!n.IsDefined() || n.IsNull()) return;
    try {
      value = n.as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      Fail(Join(key), "expected a non-negative integer", n);
    }
  }

  void Field(const char* key, std::string& value, const Check& = nullptr) {
    const YAML::Node n = Lookup(key);
    if (!n.IsDefined() || n.IsNull()) return;
    if (!n.IsScalar()) Fail(Join(key), "expected a string", n);
    value = n.Scalar();
  }

  void Reward(const char* key, std::optional<RewardWeights>& value) {
    const YAML::Node n = Lookup(key);
    if (!n.IsDefined() || n.IsNull()) return;
    if (n.IsScalar() && n.Scalar() == "auto") {
      value.reset();
      return;
    }
    if (!n.IsMap()) Fail(Join(key), "expected 'auto' or a mapping", n);
    RewardWeights w;
    bool has_w = false;
    Section(key, [&] {
      has_w = Lookup("w").IsDefined();
      Field("w", w.w, Positive());
      Field("stride_weight", w.W(0), NonNegative());
      Field("speed_weight", w.W(1), NonNegative());
    });
    if (!has_w) Fail(Join(key) + ".w", "required unless reward is 'auto'", n);
    value = w;
  }

  void Finish() { RejectUnknown(frames_.front()); }

  [[noreturn]] void Fail(const std::string& path, const std::string& msg,
                         const YAML::Node& node) const {
    const int line = node.IsDefined() ? node.Mark().line + 1 : 0;
    std::ostringstream os;
    os << "config";
    if (line > 0) os << ":" << line;
    os << ": " << path << ": " << msg;
    throw ConfigError(os.str(), line);
  }

 private:
  struct Frame {
    YAML::Node node;
    std::string path;
    std::set<std::string> used;
  };

  YAML::Node Lookup(const char* key) {
    Frame& top = frames_.back();
    top.used.insert(key);
    if (!top.node.IsDefined() || !top.node.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
    const YAML::Node& cnode = top.node;
    return cnode[key];
  }

  std::string Join(const std::string& key) const {
    const std::string& base = frames_.back().path;
    return base.empty() ? key : base + "." + key;
  }

  void Validate(const char* key, double v, const Check& check,
                const YAML::Node& n) const {
    if (!check) return;
    const std::string err = check(v);
    if (!err.empty()) Fail(Join(key), err, n);
  }

  void RejectUnknown(const Frame& f) const {
    if (!f.node.IsDefined() || !f.node.IsMap()) return;
    for (auto it = f.node.begin(); it != f.node.end(); ++it) {
      const std::string k = it->first.Scalar();
      if (f.used.count(k) == 0) {
        const std::string path = f.path.empty() ? k : f.path + "." + k;
        Fail(path, "unknown key", it->first);
      }
    }
  }

  std::vector<Frame> frames_;
};

class Writer {
 public:
  Writer() { out_ << YAML::BeginMap; }

  template <typename F>
  void Section(const char* key, F&& body) {
    out_ << YAML::Key << key << YAML::Value << YAML::BeginMap;
    body();
    out_ << YAML::EndMap;
  }
  void Field(const char* key, double& v, const Check& = nullptr) {
    out_ << YAML::Key << key << YAML::Value << FormatDouble(v);
  }
  void Field(const char* key, int& v, const Check& = nullptr) {
    out_ << YAML::Key << key << YAML::Value << v;
  }
  void Field(const char* key, std::uint64_t& v, const Check& = nullptr) {
    out_ << YAML::Key << key << YAML::Value << v;
  }
  void Field(const char* key, std::string& v, const Check& = nullptr) {
    out_ << YAML::Key << key << YAML::Value << YAML::DoubleQuoted << v;
  }
  void Reward(const char* key, std::optional<RewardWeights>& value) {
    if (!value) {
      out_ << YAML::Key << key << YAML::Value << "auto";
      return;
    }
    Section(key, [&] {
      Field("w", value->w);
      Field("stride_weight", value->W(0));
      Field("speed_weight", value->W(1));
    });
  }
  std::string Finish() {
    out_ << YAML::EndMap;
    return std::string(out_.c_str()) + "\n";
  }

 private:
  YAML::Emitter out_;
};

void Gains(auto& v, const char* key, PdGains& gains, double& weight) {
  v.Section(key, [&] {
    v.Field("kp", gains.kp, NonNegative());
    v.Field("kd", gains.kd, NonNegative());
    v.Field("weight", weight, NonNegative());
  });
}

template <typename V>
void VisitConfig(V& v, RunConfig& c) {
  v.Field("output_dir", c.output_dir);

  BipedParams& b = c.rollout.biped;
  v.Section("biped", [&] {
    v.Field("torso_mass", b.torso_mass, Positive());
    v.Field("torso_inertia", b.torso_inertia, Positive());
    v.Field("foot_mass", b.foot_mass, Positive());
    v.Field("hip_offset", b.hip_offset, NonNegative());
    v.Field("leg_min", b.leg_min, Positive());
    v.Field("leg_max", b.leg_max, Positive());
    v.Field("hip_torque_max", b.hip_torque_max, Positive());
    v.Field("leg_force_max", b.leg_force_max, Positive());
    v.Field("gravity", b.gravity, Positive());
    v.Field("friction", b.friction, Positive());
    v.Field("limit_stiffness", b.limit_stiffness, NonNegative());
    v.Field("limit_damping", b.limit_damping, NonNegative());
  });

  ControllerConfig& ctl = c.rollout.controller;
  v.Section("schedule", [&] {
    v.Field("single_support", ctl.schedule.single_support, Positive());
    v.Field("double_support", ctl.schedule.double_support, [](double x) {
      return x == 0.0 ? std::string()
                      : std::string("must be 0 (touchdown is an impact event)");
    });
  });

  PlannerConfig& p = ctl.planner;
  v.Section("planner", [&] {
    v.Field("footsteps_in_horizon", p.footsteps_in_horizon, AtLeast(1));
    v.Field("knots_per_phase", p.knots_per_phase, AtLeast(3));
    v.Field("reach_limit", p.reach_limit, Positive());
    v.Field("min_height", p.min_height, Positive());
    v.Field("max_height", p.max_height, Positive());
    v.Field("velocity_weight", p.velocity_weight, NonNegative());
    v.Field("footstep_weight", p.footstep_weight, NonNegative());
    v.Field("accel_weight", p.accel_weight, NonNegative());
    v.Field("penalty_weight", p.penalty_weight, NonNegative());
    v.Field("raibert_gain", p.raibert_gain, Finite());
    v.Field("max_iterations", p.max_iterations, AtLeast(1));
    v.Field("tolerance", p.tolerance, Positive());
  });

  v.Section("osc", [&] {
    v.Field("effort_weight", ctl.osc.effort_weight, Positive());
    v.Field("baumgarte_omega", ctl.osc.baumgarte_omega, NonNegative());
    v.Field("swing_apex", ctl.swing_apex, NonNegative());
    Gains(v, "com", ctl.com_gains, ctl.com_weight);
    Gains(v, "swing_foot", ctl.swing_gains, ctl.swing_weight);
    Gains(v, "torso_pitch", ctl.pitch_gains, ctl.pitch_weight);
    Gains(v, "leg_length", ctl.leg_gains, ctl.leg_weight);
  });

  v.Section("regularization", [&] {
    v.Field("torso_pitch", ctl.regularization.torso_pitch, InRange(-0.5, 0.5));
    v.Field("stance_leg_length", ctl.regularization.stance_leg_length,
            Positive());
    v.Field("swing_leg_length", ctl.regularization.swing_leg_length,
            Positive());
  });

  v.Reward("reward", c.rollout.reward);

  EpisodeConfig& e = c.rollout.episode;
  v.Section("episode", [&] {
    v.Field("horizon", e.horizon, AtLeast(1));
    v.Field("planner_rate", e.planner_rate, Positive());
    v.Field("sim_rate", e.sim_rate, Positive());
    v.Field("settle_time", e.settle_time, NonNegative());
    v.Field("initial_com_height", e.initial_com_height, Positive());
    v.Field("seed", e.seed);
  });

  PeriodicityCriteria& g = c.periodicity;
  v.Section("periodicity", [&] {
    v.Field("stride_range", g.stride_range, Positive());
    v.Field("pelvis_height_range", g.pelvis_height_range, Positive());
    v.Field("pitch_range", g.pitch_range, Positive());
    v.Field("window", g.window, AtLeast(1));
  });

  TrainConfig& t = c.train;
  v.Section("train", [&] {
    v.Field("sigma0", t.sigma0, Positive());
    v.Field("task_fraction", t.task_fraction, [](double x) {
      return x > 0.0 && x <= 1.0 ? std::string() : std::string("must be in (0, 1]");
    });
    v.Field("expansion_period", t.expansion_period, AtLeast(1));
    v.Field("iterations", t.iterations, AtLeast(0));
    v.Field("popsize", t.popsize, [](double x) {
      return x == 0.0 || x >= 2.0 ? std::string()
                                  : std::string("must be 0 (default) or >= 2");
    });
    v.Field("seed", t.seed);
    v.Field("workers", t.workers, AtLeast(0));
    v.Field("dim_y", t.dim_y, [](double x) {
      return x == 2.0 ? std::string()
                      : std::string("must be 2 (the planner is planar)");
    });
    v.Section("grid", [&] {
      v.Field("stride_step", t.stride_axis.step, Positive());
      v.Field("stride_min", t.stride_axis.lo);
      v.Field("stride_max", t.stride_axis.hi);
      v.Field("incline_step", t.incline_axis.step, Positive());
      v.Field("incline_min", t.incline_axis.lo, InRange(-0.5, 0.5));
      v.Field("incline_max", t.incline_axis.hi, InRange(-0.5, 0.5));
    });
    v.Section("initial_tasks", [&] {
      v.Field("stride_min", t.initial_stride_lo);
      v.Field("stride_max", t.initial_stride_hi);
      v.Field("incline_min", t.initial_incline_lo);
      v.Field("incline_max", t.initial_incline_hi);
    });
  });
}

void CrossValidate(const RunConfig& c) {
  const auto& b = c.rollout.biped;
  if (!(b.leg_min < b.leg_max)) {
    throw ConfigError("config: biped.leg_min must be < biped.leg_max");
  }
  const auto& p = c.rollout.controller.planner;
  if (!(p.min_height < p.max_height)) {
    throw ConfigError("config: planner.min_height must be < planner.max_height");
  }
  const double ratio = c.rollout.episode.sim_rate / c.rollout.episode.planner_rate;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
    throw ConfigError(
        "config: episode.sim_rate must be a multiple of episode.planner_rate");
  }
  const auto& t = c.train;
  if (t.stride_axis.lo > t.stride_axis.hi || t.incline_axis.lo > t.incline_axis.hi) {
    throw ConfigError("config: train.grid minimum exceeds maximum");
  }
  if (t.initial_stride_lo > t.initial_stride_hi ||
      t.initial_incline_lo > t.initial_incline_hi) {
    throw ConfigError("config: train.initial_tasks minimum exceeds maximum");
  }
}

}  // namespace

RunConfig ParseConfig(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("config:" + std::to_string(e.mark.line + 1) + ": " + e.msg,
                      e.mark.line + 1);
  }
  if (root.IsDefined() && !root.IsNull() && !root.IsMap()) {
    throw ConfigError("config: top level must be a mapping", 1);
  }
  RunConfig c;
  Reader reader(root);
  VisitConfig(reader, c);
  reader.Finish();
  c.rollout.controller.planner.single_support =
      c.rollout.controller.schedule.single_support;
  CrossValidate(c);
  return c;
}

RunConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

std::string EmitConfig(const RunConfig& config) {
  RunConfig copy = config;
  Writer writer;
  VisitConfig(writer, copy);
  return writer.Finish();
}

void SaveConfig(const RunConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  out << EmitConfig(config);
}

std::uint64_t ConfigHash(const RunConfig& config) {
  RunConfig c = config;
  c.train.iterations = 0;
  c.train.workers = 0;
  c.output_dir.clear();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : EmitConfig(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace romshaper
