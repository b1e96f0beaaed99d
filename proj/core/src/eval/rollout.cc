#include "romshaper/eval/rollout.h"

#include <cmath>
#include <stdexcept>

#include "romshaper/control/swing_foot.h"
#include "romshaper/rom/com_embedding.h"

namespace romshaper {
namespace {

struct FallDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Running sums over one single-support phase.
struct PhaseStats {
  double start_time = 0.0;
  Vec2 torso_start = Vec2::Zero();
  double pelvis = 0.0;
  double pitch = 0.0;
  double effort = 0.0;
  int count = 0;
};

Vec2 ProjectToGround(const BipedModel& model, const Vec2& p) {
  const Vec2 n = model.ground_normal();
  return p - n * n.dot(p);
}

double PelvisHeight(const BipedModel& model, const FullState& x) {
  return x.q(kBaseZ) - model.GroundPoint(x.q(kBaseX)).y();
}

TrackedOutput MakeOutput(OutputKind kind, Foot foot, Eigen::VectorXd pos,
                         Eigen::VectorXd vel, Eigen::VectorXd acc,
                         const PdGains& gains, double weight) {
  TrackedOutput o;
  o.kind = kind;
  o.foot = foot;
  o.pos_des = std::move(pos);
  o.vel_des = std::move(vel);
  o.acc_ff = std::move(acc);
  o.gains = gains;
  o.weight = weight;
  return o;
}

Eigen::VectorXd Scalar(double v) { return Eigen::VectorXd::Constant(1, v); }

}  // namespace

int EpisodeConfig::substeps() const {
  const double ratio = sim_rate / planner_rate;
  const int n = static_cast<int>(std::lround(ratio));
  if (n < 1 || std::abs(ratio - n) > 1e-9) {
    throw std::invalid_argument(
        "EpisodeConfig: sim rate must be a multiple of the planner rate");
  }
  return n;
}

RewardWeights RolloutConfig::reward_weights() const {
  if (reward) return *reward;
  return RewardWeights::Default(biped, episode.tick_dt(),
                                controller.schedule.single_support);
}

const char* ToString(Outcome outcome) {
  return outcome == Outcome::kCompleted ? "Completed" : "Fell";
}

double RolloutTrace::total_h() const {
  double sum = 0.0;
  for (const auto& t : ticks) sum += t.h;
  return sum;
}

FullState NominalStance(const BipedModel& model, double com_height) {
  const BipedParams& p = model.params();
  // Both feet at the ground origin, legs vertical, torso level.
  const double torso_z = com_height * model.total_mass() / p.torso_mass;
  FullState x;
  x.q(kBaseZ) = torso_z;
  x.q(kLeftLeg) = torso_z - p.hip_offset;
  x.q(kRightLeg) = torso_z - p.hip_offset;
  return x;
}

RolloutTrace Rollout(const RomParams& params, const Task& task,
                     const RolloutConfig& cfg) {
  if (params.dim_y() != 2) {
    throw std::invalid_argument("Rollout: the planar biped needs a 2-D ROM");
  }
  BipedParams biped = cfg.biped;
  biped.incline = task.incline;
  const BipedModel model(biped);
  const ControllerConfig& ctl = cfg.controller;
  const EpisodeConfig& ep = cfg.episode;
  const RewardWeights weights = cfg.reward_weights();
  const double dt = ep.sim_dt();
  const int substeps = ep.substeps();
  const double t_ss = ctl.schedule.single_support;
  const Vec2 tangent = model.ground_tangent();
  const RegularizationTargets targets =
      ComputeRegularizationTargets(task, ctl.retarget, ctl.regularization);
  const double omega = ctl.osc.baumgarte_omega;

  RolloutTrace trace;
  FullState x = NominalStance(model, ep.initial_com_height);
  Vec2 anchor_left = ProjectToGround(model, model.FootPosition(x.q, Foot::kLeft));
  Vec2 anchor_right =
      ProjectToGround(model, model.FootPosition(x.q, Foot::kRight));

  const int settle_steps = static_cast<int>(std::lround(ep.settle_time / dt));
  double t = 0.0;
  try {
    const Vec2 com_hold = model.ComPosition(x.q);
    DesiredOutputs hold;
    hold.outputs.push_back(MakeOutput(OutputKind::kCom, Foot::kLeft, com_hold,
                                      Vec2::Zero(), Vec2::Zero(),
                                      ctl.com_gains, ctl.com_weight));
    hold.outputs.push_back(MakeOutput(
        OutputKind::kTorsoPitch, Foot::kLeft, Scalar(targets.torso_pitch),
        Scalar(0.0), Scalar(0.0), ctl.pitch_gains, ctl.pitch_weight));
    const ContactMode both = ContactMode::Double(anchor_left, anchor_right);
    for (int n = 0; n < settle_steps; ++n) {
      x.t = (n - settle_steps) * dt;
      const OscResult res = OscSolve(model, x, hold, both, ctl.osc);
      x = IntegrateStep(model, x, res.u, both, dt, omega);
    }
  } catch (const std::exception& e) {
    trace.outcome = Outcome::kFell;
    trace.fall_time = x.t;
    trace.diagnostic = std::string("settle: ") + e.what();
    return trace;
  }
  x.t = 0.0;

  Foot stance = Foot::kLeft;
  Vec2 stance_pos = anchor_left;
  Vec2 swing_start = model.FootPosition(x.q, Foot::kRight);
  int current_step = 0;
  long n = 0;
  PhaseStats phase;
  phase.torso_start = x.q.head<2>();
  const Vec2 torso_origin = x.q.head<2>();
  std::optional<PlanSolution> warm;

  auto touchdown = [&](const FsmState& fsm) {
    const Foot landing = Other(stance);
    const BipedParams& bp = model.params();
    // Extend or shorten the landing leg so its foot lies on the ground.
    const Vec2 hip = model.HipPosition(x.q);
    const double phi = x.q(kPitch) + x.q(HipIndex(landing));
    const Vec2 dir(std::sin(phi), -std::cos(phi));
    const Vec2 normal = model.ground_normal();
    const double denom = normal.dot(dir);
    if (denom < -1e-6) {
      const double len = -normal.dot(hip) / denom;
      x.q(LegIndex(landing)) = std::clamp(len, bp.leg_min, bp.leg_max);
    }
    const Vec2 land = ProjectToGround(model, model.FootPosition(x.q, landing));
    x = ImpactMap(model, x, landing);

    StepRecord rec;
    rec.land_time = t;
    rec.foot = landing;
    rec.position = land;
    rec.stride = tangent.dot(land - stance_pos);
    const double duration = t - phase.start_time;
    rec.speed = duration > 0.0
                    ? tangent.dot(Vec2(x.q.head<2>()) - phase.torso_start) /
                          duration
                    : 0.0;
    if (phase.count > 0) {
      rec.mean_pelvis_height = phase.pelvis / phase.count;
      rec.mean_pitch = phase.pitch / phase.count;
    }
    rec.effort = phase.effort;
    rec.sim_steps = phase.count;
    trace.steps.push_back(rec);

    swing_start = model.FootPosition(x.q, stance);
    stance = landing;
    stance_pos = land;
    current_step = fsm.step_index;
    phase = PhaseStats{};
    phase.start_time = t;
    phase.torso_start = x.q.head<2>();
  };

  auto achieved_now = [&]() {
    AchievedTask a;
    if (!trace.steps.empty()) {
      a.stride = trace.steps.back().stride;
      a.speed = trace.steps.back().speed;
    } else if (t > 0.0) {
      a.speed = tangent.dot(Vec2(x.q.head<2>()) - torso_origin) / t;
    }
    return a;
  };

  for (int tick = 0; tick < ep.horizon; ++tick) {
    TickRecord rec;
    rec.tick = tick;
    rec.task = task;
    PlanSolution plan;
    double t_plan = 0.0;
    double h = 0.0;
    try {
      for (int s = 0; s < substeps; ++s) {
        t = static_cast<double>(n) * dt;
        x.t = t;
        const FsmState fsm = ComputeFsmState(t, ctl.schedule);
        if (fsm.step_index != current_step) touchdown(fsm);
        x.t = t;
        if (s == 0) {
          rec.t = tick * ep.tick_dt();
          rec.x = x;
          rec.fsm = fsm;
          const RomState y0 = ComEmbedding(model, x, stance_pos);
          plan = Plan(params, y0, stance_pos, fsm, task, ctl.planner,
                      warm ? &*warm : nullptr);
          warm = plan;
          t_plan = t;
          rec.plan_status = plan.solve_status;
        }

        const ComSample com = SampleComPlan(plan, t - t_plan);
        Eigen::VectorXd com_ff = Eigen::VectorXd::Zero(2);
        try {
          com_ff = RomAccel(params, RomState(Eigen::VectorXd(com.pos - stance_pos),
                                             Eigen::VectorXd(com.vel)));
        } catch (const DegenerateComHeight&) {
        }
        const Foot swing = Other(stance);
        const SwingSample sw = SwingFootTrajectory(
            swing_start, plan.next_footstep, ctl.swing_apex, fsm.phase, t_ss);

        DesiredOutputs outputs;
        outputs.outputs.push_back(MakeOutput(OutputKind::kCom, swing, com.pos,
                                             com.vel, com_ff, ctl.com_gains,
                                             ctl.com_weight));
        outputs.outputs.push_back(MakeOutput(OutputKind::kSwingFoot, swing,
                                             sw.pos, sw.vel, sw.acc,
                                             ctl.swing_gains,
                                             ctl.swing_weight));
        outputs.outputs.push_back(MakeOutput(
            OutputKind::kTorsoPitch, swing, Scalar(targets.torso_pitch),
            Scalar(0.0), Scalar(0.0), ctl.pitch_gains, ctl.pitch_weight));
        outputs.outputs.push_back(MakeOutput(
            OutputKind::kStanceLegLength, stance,
            Scalar(targets.stance_leg_length), Scalar(0.0), Scalar(0.0),
            ctl.leg_gains, ctl.leg_weight));
        outputs.outputs.push_back(MakeOutput(
            OutputKind::kSwingLegLength, swing,
            Scalar(targets.swing_leg_length), Scalar(0.0), Scalar(0.0),
            ctl.leg_gains, ctl.leg_weight));

        const ContactMode contacts = ContactMode::Single(stance, stance_pos);
        const OscResult res = OscSolve(model, x, outputs, contacts, ctl.osc);
        if (s == 0) {
          rec.u = res.u;
          rec.contact_force = res.contact_force;
        }
        x = IntegrateStep(model, x, res.u, contacts, dt, omega);
        ++n;
        t = static_cast<double>(n) * dt;
        x.t = t;
        const double uu = res.u.u.squaredNorm();
        h += uu * dt;
        phase.effort += uu;
        phase.pelvis += PelvisHeight(model, x);
        phase.pitch += x.q(kPitch);
        ++phase.count;
        if (IsFallen(model, x)) throw FallDetected("fell");
      }
    } catch (const FallDetected&) {
      trace.outcome = Outcome::kFell;
      trace.fall_time = t;
      trace.diagnostic = "fallen";
      break;
    } catch (const std::exception& e) {
      trace.outcome = Outcome::kFell;
      trace.fall_time = t;
      trace.diagnostic = e.what();
      break;
    }
    rec.h = h;
    rec.achieved = achieved_now();
    rec.r = Reward(h, task, rec.achieved, weights, t_ss);
    trace.ticks.push_back(rec);
  }
  return trace;
}

double EpisodeReturn(const RolloutTrace& trace) {
  double sum = 0.0;
  for (const auto& t : trace.ticks) sum += t.r;
  return sum;
}

double MeanTaskTerm(const RolloutTrace& trace, const RolloutConfig& cfg) {
  if (trace.ticks.empty()) return 0.0;
  const RewardWeights w = cfg.reward_weights();
  double sum = 0.0;
  for (const auto& t : trace.ticks) {
    sum += TaskTerm(t.task, t.achieved, w,
                    cfg.controller.schedule.single_support);
  }
  return sum / static_cast<double>(trace.ticks.size());
}

bool EpisodeSucceeded(const RolloutTrace& trace, const RolloutConfig& cfg,
                      double task_threshold) {
  return trace.outcome == Outcome::kCompleted &&
         trace.size() == cfg.episode.horizon &&
         MeanTaskTerm(trace, cfg) >= task_threshold;
}

EvalResult EvalReturn(const RomParams& params, const std::vector<Task>& tasks,
                      const RolloutConfig& cfg,
                      const std::vector<std::uint64_t>& seeds) {
  if (tasks.empty()) throw std::invalid_argument("EvalReturn: no tasks");
  if (!seeds.empty() && seeds.size() != tasks.size()) {
    throw std::invalid_argument("EvalReturn: one seed per task required");
  }
  EvalResult out;
  double sum = 0.0;
  for (size_t i = 0; i < tasks.size(); ++i) {
    RolloutConfig c = cfg;
    if (!seeds.empty()) c.episode.seed = seeds[i];
    const RolloutTrace trace = Rollout(params, tasks[i], c);
    TaskResult r;
    r.task = tasks[i];
    r.episode_return = EpisodeReturn(trace);
    r.success = EpisodeSucceeded(trace, c);
    sum += r.episode_return;
    out.per_task.push_back(r);
  }
  out.mean_return = sum / static_cast<double>(tasks.size());
  return out;
}

}  // namespace romshaper
