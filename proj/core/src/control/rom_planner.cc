#include "romshaper/control/rom_planner.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace romshaper {
namespace {

constexpr int kRk4Substeps = 8;

struct KnotField {
  Eigen::VectorXd f;
  Eigen::MatrixXd dfdz;
};

KnotField Field(const RomParams& params, const Eigen::VectorXd& z) {
  KnotField k;
  RomVectorField(params, z, &k.f, &k.dfdz);
  return k;
}

Eigen::VectorXd FieldOnly(const RomParams& params, const Eigen::VectorXd& z) {
  Eigen::VectorXd f;
  RomVectorField(params, z, &f, nullptr);
  return f;
}

// RK4 through one phase; writes `knots` states (first = z0). Returns false if
// the ROM hit the height guard, in which case the last valid state is held.
bool IntegratePhase(const RomParams& params, const Eigen::VectorXd& z0,
                    double duration, int knots,
                    std::vector<Eigen::VectorXd>* out) {
  out->assign(knots, z0);
  const double h = duration / (knots - 1) / kRk4Substeps;
  Eigen::VectorXd z = z0;
  try {
    for (int k = 1; k < knots; ++k) {
      for (int s = 0; s < kRk4Substeps; ++s) {
        const Eigen::VectorXd k1 = FieldOnly(params, z);
        const Eigen::VectorXd k2 = FieldOnly(params, z + 0.5 * h * k1);
        const Eigen::VectorXd k3 = FieldOnly(params, z + 0.5 * h * k2);
        const Eigen::VectorXd k4 = FieldOnly(params, z + h * k3);
        z += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      }
      if (!z.allFinite()) throw DegenerateComHeight("non-finite ROM state");
      (*out)[k] = z;
    }
  } catch (const DegenerateComHeight&) {
    for (int k = 1; k < knots; ++k) {
      if (!(*out)[k].allFinite()) (*out)[k] = (*out)[k - 1];
    }
    return false;
  }
  return true;
}

double Merit(const TranscriptionEval& e, double mu) {
  return 0.5 * e.residuals.squaredNorm() + mu * e.constraints.lpNorm<1>();
}

}  // namespace

const char* ToString(PlanStatus status) {
  switch (status) {
    case PlanStatus::kConverged:
      return "converged";
    case PlanStatus::kMaxIter:
      return "max_iter";
    case PlanStatus::kInfeasible:
      return "infeasible";
  }
  return "?";
}

Vec2 TranscriptionProblem::FootstepPosition(const Eigen::VectorXd& decision,
                                            int footstep) const {
  if (footstep == 0) return stance0;
  const double x = decision(FootstepOffset(footstep));
  return Vec2(x, x * std::tan(incline));
}

TranscriptionEval TranscriptionResiduals(const RomParams& params,
                                         const Eigen::VectorXd& decision,
                                         const TranscriptionProblem& pr) {
  const int nz = pr.state_dim();
  const int d = nz / 2;
  const int num_k = pr.knots;
  const int num_p = pr.num_phases();
  const int nx = pr.num_decisions();
  if (decision.size() != nx) {
    throw std::invalid_argument("TranscriptionResiduals: decision size");
  }
  if (d != 2) {
    throw std::invalid_argument("TranscriptionResiduals: planar ROM only");
  }
  const double slope = std::tan(pr.incline);
  const Vec2 tangent(std::cos(pr.incline), std::sin(pr.incline));
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(nz, nz);

  auto knot = [&](int p, int k) {
    return decision.segment(pr.KnotOffset(p, k), nz);
  };

  std::vector<KnotField> fields(num_p * num_k);
  for (int p = 0; p < num_p; ++p) {
    for (int k = 0; k < num_k; ++k) fields[p * num_k + k] = Field(params, knot(p, k));
  }

  const int n_con = nz + num_p * (num_k - 1) * nz + (num_p - 1) * nz;
  TranscriptionEval e;
  e.constraints = Eigen::VectorXd::Zero(n_con);
  e.constraint_jac = Eigen::MatrixXd::Zero(n_con, nx);
  int row = 0;

  e.constraints.segment(row, nz) = knot(0, 0) - pr.y0.Stacked();
  e.constraint_jac.block(row, pr.KnotOffset(0, 0), nz, nz) = eye;
  row += nz;

  for (int p = 0; p < num_p; ++p) {
    const double h = pr.phase_durations[p] / (num_k - 1);
    for (int k = 0; k + 1 < num_k; ++k) {
      const KnotField& fa = fields[p * num_k + k];
      const KnotField& fb = fields[p * num_k + k + 1];
      const Eigen::VectorXd za = knot(p, k), zb = knot(p, k + 1);
      const Eigen::VectorXd zm = 0.5 * (za + zb) + h / 8.0 * (fa.f - fb.f);
      const KnotField fm = Field(params, zm);
      e.constraints.segment(row, nz) =
          (zb - za) / h - (fa.f + 4.0 * fm.f + fb.f) / 6.0;
      e.constraint_jac.block(row, pr.KnotOffset(p, k), nz, nz) =
          -eye / h - (fa.dfdz + 4.0 * fm.dfdz * (0.5 * eye + h / 8.0 * fa.dfdz)) / 6.0;
      e.constraint_jac.block(row, pr.KnotOffset(p, k + 1), nz, nz) =
          eye / h - (fb.dfdz + 4.0 * fm.dfdz * (0.5 * eye - h / 8.0 * fb.dfdz)) / 6.0;
      row += nz;
    }
  }

  for (int p = 0; p + 1 < num_p; ++p) {
    const Vec2 from = pr.FootstepPosition(decision, p);
    const Vec2 to = pr.FootstepPosition(decision, p + 1);
    const Eigen::VectorXd end = knot(p, num_k - 1);
    Eigen::VectorXd expected = end;
    expected.head(d) += from - to;
    e.constraints.segment(row, nz) = knot(p + 1, 0) - expected;
    e.constraint_jac.block(row, pr.KnotOffset(p + 1, 0), nz, nz) = eye;
    e.constraint_jac.block(row, pr.KnotOffset(p, num_k - 1), nz, nz) = -eye;
    if (p >= 1) {
      e.constraint_jac(row, pr.FootstepOffset(p)) -= 1.0;
      e.constraint_jac(row + 1, pr.FootstepOffset(p)) -= slope;
    }
    e.constraint_jac(row, pr.FootstepOffset(p + 1)) += 1.0;
    e.constraint_jac(row + 1, pr.FootstepOffset(p + 1)) += slope;
    row += nz;
  }

  const int n_res = 3 * (num_p - 1) + num_p * num_k * (d + 1);
  e.residuals = Eigen::VectorXd::Zero(n_res);
  e.residual_jac = Eigen::MatrixXd::Zero(n_res, nx);
  row = 0;
  const double sv = std::sqrt(pr.velocity_weight);
  const double sf = std::sqrt(pr.footstep_weight);
  const double sp = std::sqrt(pr.penalty_weight);

  for (int p = 1; p < num_p; ++p) {
    const double dur = pr.phase_durations[p];
    const Eigen::VectorXd first = knot(p, 0), last = knot(p, num_k - 1);
    e.residuals(row) =
        sv * (tangent.dot(Vec2(last.head(2) - first.head(2))) / dur -
              pr.desired_speed);
    for (int i = 0; i < 2; ++i) {
      e.residual_jac(row, pr.KnotOffset(p, num_k - 1) + i) = sv * tangent(i) / dur;
      e.residual_jac(row, pr.KnotOffset(p, 0) + i) = -sv * tangent(i) / dur;
    }
    ++row;
  }

  for (int p = 1; p < num_p; ++p) {
    const double x = decision(pr.FootstepOffset(p));
    if (p == 1) {
      e.residuals(row) = sf * (x - pr.nominal_first_step_x);
    } else {
      const double prev = decision(pr.FootstepOffset(p - 1));
      e.residuals(row) = sf * (x - prev - pr.stride * tangent.x());
      e.residual_jac(row, pr.FootstepOffset(p - 1)) = -sf;
    }
    e.residual_jac(row, pr.FootstepOffset(p)) = sf;
    ++row;
  }

  for (int p = 1; p < num_p; ++p) {
    const Vec2 prev = pr.FootstepPosition(decision, p - 1);
    const Eigen::VectorXd end = knot(p - 1, num_k - 1);
    const double s = decision(pr.FootstepOffset(p)) - (prev.x() + end(0));
    const double excess = std::abs(s) - pr.reach_limit;
    if (excess > 0.0) {
      const double sign = s >= 0.0 ? 1.0 : -1.0;
      e.residuals(row) = sp * excess;
      e.residual_jac(row, pr.FootstepOffset(p)) = sp * sign;
      e.residual_jac(row, pr.KnotOffset(p - 1, num_k - 1)) = -sp * sign;
      if (p >= 2) e.residual_jac(row, pr.FootstepOffset(p - 1)) = -sp * sign;
    }
    ++row;
  }

  for (int p = 0; p < num_p; ++p) {
    const double h = pr.phase_durations[p] / (num_k - 1);
    const double sa = std::sqrt(pr.accel_weight * h);
    for (int k = 0; k < num_k; ++k) {
      const KnotField& fk = fields[p * num_k + k];
      const int off = pr.KnotOffset(p, k);
      e.residuals.segment(row, d) = sa * fk.f.tail(d);
      e.residual_jac.block(row, off, d, nz) = sa * fk.dfdz.bottomRows(d);
      row += d;
      const double height = decision(off + d - 1);
      if (height < pr.min_height) {
        e.residuals(row) = sp * (pr.min_height - height);
        e.residual_jac(row, off + d - 1) = -sp;
      } else if (height > pr.max_height) {
        e.residuals(row) = sp * (height - pr.max_height);
        e.residual_jac(row, off + d - 1) = sp;
      }
      ++row;
    }
  }
  return e;
}

Eigen::VectorXd RolloutDecision(const RomParams& params,
                                const TranscriptionProblem& pr,
                                const std::vector<double>& footstep_x) {
  const int nz = pr.state_dim();
  const int d = nz / 2;
  Eigen::VectorXd decision(pr.num_decisions());
  for (int p = 1; p < pr.num_phases(); ++p) {
    decision(pr.FootstepOffset(p)) = footstep_x.at(p - 1);
  }
  Eigen::VectorXd z = pr.y0.Stacked();
  std::vector<Eigen::VectorXd> knots;
  for (int p = 0; p < pr.num_phases(); ++p) {
    if (p > 0) {
      z.head(d) += pr.FootstepPosition(decision, p - 1) -
                   pr.FootstepPosition(decision, p);
    }
    IntegratePhase(params, z, pr.phase_durations[p], pr.knots, &knots);
    for (int k = 0; k < pr.knots; ++k) {
      decision.segment(pr.KnotOffset(p, k), nz) = knots[k];
    }
    z = knots.back();
  }
  return decision;
}

PlanSolution Plan(const RomParams& params, const RomState& y0,
                  const Vec2& stance_pos, const FsmState& fsm,
                  const Task& task, const PlannerConfig& cfg,
                  const PlanSolution* warm) {
  if (params.dim_y() != 2) {
    throw std::invalid_argument("Plan: only the planar ROM is supported");
  }
  if (cfg.footsteps_in_horizon < 1 || cfg.knots_per_phase < 3) {
    throw std::invalid_argument("Plan: need N_s >= 1 and K >= 3");
  }
  const int num_k = cfg.knots_per_phase;
  const int num_p = cfg.footsteps_in_horizon;

  TranscriptionProblem pr;
  pr.y0 = y0;
  pr.stance0 = stance_pos;
  pr.knots = num_k;
  pr.incline = task.incline;
  pr.stride = task.stride;
  pr.desired_speed = task.stride / cfg.single_support;
  pr.reach_limit = cfg.reach_limit;
  pr.min_height = cfg.min_height;
  pr.max_height = cfg.max_height;
  pr.velocity_weight = cfg.velocity_weight;
  pr.footstep_weight = cfg.footstep_weight;
  pr.accel_weight = cfg.accel_weight;
  pr.penalty_weight = cfg.penalty_weight;
  pr.phase_durations.assign(num_p, cfg.single_support);
  pr.phase_durations[0] =
      std::max(cfg.single_support - fsm.time_in_mode, 1e-3);

  const double cos_incline = std::cos(task.incline);
  const double vx_des = pr.desired_speed * cos_incline;

  PlanSolution sol;
  sol.step_index = fsm.step_index;
  sol.first_phase_duration = pr.phase_durations[0];

  auto fill_output = [&](const Eigen::VectorXd& x) {
    const int nz = pr.state_dim();
    sol.knot_times.clear();
    sol.com_knots.clear();
    sol.knot_stance.clear();
    sol.footsteps.clear();
    double t0 = 0.0;
    for (int p = 0; p < num_p; ++p) {
      const double h = pr.phase_durations[p] / (num_k - 1);
      const Vec2 stance = pr.FootstepPosition(x, p);
      for (int k = p == 0 ? 0 : 1; k < num_k; ++k) {
        sol.knot_times.push_back(t0 + k * h);
        sol.com_knots.push_back(
            RomState::FromStacked(x.segment(pr.KnotOffset(p, k), nz)));
        sol.knot_stance.push_back(stance);
      }
      t0 += pr.phase_durations[p];
      if (p >= 1) sol.footsteps.push_back(stance);
    }
    sol.current_phase_knots = num_k;
    sol.decision = x;
  };

  const bool height_ok =
      y0.y.allFinite() && y0.ydot.allFinite() &&
      std::abs(y0.y(1)) >= params.basis().min_height();
  if (!height_ok) {
    sol.solve_status = PlanStatus::kInfeasible;
    const Vec2 com = stance_pos + (y0.y.allFinite() ? Vec2(y0.y) : Vec2::Zero());
    const double x = com.x();
    sol.next_footstep = Vec2(x, x * std::tan(task.incline));
    sol.knot_times = {0.0};
    sol.com_knots = {y0};
    sol.knot_stance = {stance_pos};
    sol.current_phase_knots = 1;
    return sol;
  }

  // Nominal first footstep from the predicted touchdown state.
  std::vector<Eigen::VectorXd> phase0;
  IntegratePhase(params, y0.Stacked(), pr.phase_durations[0], num_k, &phase0);
  const Eigen::VectorXd& z_switch = phase0.back();
  const double vx = z_switch(2);
  pr.nominal_first_step_x = stance_pos.x() + z_switch(0) +
                            vx * cfg.single_support / 2.0 +
                            cfg.raibert_gain * (vx - vx_des);

  const bool same_step = warm != nullptr && warm->step_index == fsm.step_index &&
                         warm->solve_status != PlanStatus::kInfeasible;
  Eigen::VectorXd x;
  if (same_step && warm->decision.size() == pr.num_decisions() &&
      warm->first_phase_duration == pr.phase_durations[0]) {
    x = warm->decision;
  } else {
    std::vector<double> steps;
    double prev = pr.nominal_first_step_x;
    for (int p = 1; p < num_p; ++p) {
      double guess = p == 1 ? pr.nominal_first_step_x
                            : prev + task.stride * cos_incline;
      if (same_step && static_cast<int>(warm->footsteps.size()) >= p) {
        guess = warm->footsteps[p - 1].x();
      }
      steps.push_back(guess);
      prev = guess;
    }
    x = RolloutDecision(params, pr, steps);
  }
  const int nz = pr.state_dim();
  x.segment(pr.KnotOffset(0, 0), nz) = y0.Stacked();

  auto evaluate = [&](const Eigen::VectorXd& dec,
                      TranscriptionEval* out) -> bool {
    try {
      *out = TranscriptionResiduals(params, dec, pr);
    } catch (const DegenerateComHeight&) {
      return false;
    }
    return out->constraints.allFinite() && out->residuals.allFinite() &&
           out->constraint_jac.allFinite() && out->residual_jac.allFinite();
  };

  TranscriptionEval eval;
  if (!evaluate(x, &eval)) {
    // Initial guess left the valid region; hold the initial state.
    for (int p = 0; p < num_p; ++p) {
      for (int k = 0; k < num_k; ++k) {
        x.segment(pr.KnotOffset(p, k), nz) = y0.Stacked();
      }
    }
    if (!evaluate(x, &eval)) {
      sol.solve_status = PlanStatus::kInfeasible;
      fill_output(x);
      sol.next_footstep = pr.FootstepPosition(x, std::min(1, num_p - 1));
      return sol;
    }
  }

  const int nx = pr.num_decisions();
  const int nc = static_cast<int>(eval.constraints.size());
  double mu = 1.0;
  sol.solve_status = PlanStatus::kMaxIter;
  int it = 0;
  for (it = 1; it <= cfg.max_iterations; ++it) {
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nx + nc, nx + nc);
    kkt.topLeftCorner(nx, nx) = eval.residual_jac.transpose() * eval.residual_jac;
    kkt.topLeftCorner(nx, nx).diagonal().array() += 1e-9;
    kkt.topRightCorner(nx, nc) = eval.constraint_jac.transpose();
    kkt.bottomLeftCorner(nc, nx) = eval.constraint_jac;
    Eigen::VectorXd rhs(nx + nc);
    rhs.head(nx) = -eval.residual_jac.transpose() * eval.residuals;
    rhs.tail(nc) = -eval.constraints;
    const Eigen::VectorXd step = kkt.partialPivLu().solve(rhs);
    if (!step.allFinite()) break;
    const Eigen::VectorXd dx = step.head(nx);
    const double nu_max = step.tail(nc).cwiseAbs().maxCoeff();
    mu = std::max(mu, 2.0 * nu_max);

    const double scale = 1.0 + x.cwiseAbs().maxCoeff();
    if (dx.cwiseAbs().maxCoeff() <= cfg.tolerance * scale &&
        eval.constraints.cwiseAbs().maxCoeff() <= cfg.tolerance) {
      sol.solve_status = PlanStatus::kConverged;
      break;
    }

    const double merit0 = Merit(eval, mu);
    double alpha = 1.0;
    bool accepted = false;
    TranscriptionEval trial;
    for (int ls = 0; ls < 12; ++ls, alpha *= 0.5) {
      Eigen::VectorXd cand = x + alpha * dx;
      cand.segment(pr.KnotOffset(0, 0), nz) = y0.Stacked();
      if (evaluate(cand, &trial) && Merit(trial, mu) < merit0) {
        x = std::move(cand);
        eval = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  sol.iterations = std::min(it, cfg.max_iterations);
  fill_output(x);
  sol.next_footstep = num_p > 1 ? pr.FootstepPosition(x, 1)
                                : Vec2(pr.nominal_first_step_x,
                                       pr.nominal_first_step_x *
                                           std::tan(task.incline));
  return sol;
}

ComSample SampleComPlan(const PlanSolution& plan, double t) {
  const int n = static_cast<int>(plan.knot_times.size());
  ComSample out;
  auto world = [&](int k) {
    return Vec2(plan.knot_stance[k] + Vec2(plan.com_knots[k].y));
  };
  if (n < 2) {
    out.relative = plan.com_knots.front();
    out.pos = world(0);
    out.vel = out.relative.ydot;
    return out;
  }
  const double tc = std::clamp(t, 0.0, plan.knot_times[n - 1]);
  int k = 0;
  while (k + 2 < n && tc > plan.knot_times[k + 1]) ++k;
  const double h = plan.knot_times[k + 1] - plan.knot_times[k];
  const double s = (tc - plan.knot_times[k]) / h;
  const Vec2 pa = world(k), pb = world(k + 1);
  const Vec2 va = plan.com_knots[k].ydot, vb = plan.com_knots[k + 1].ydot;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
  const double d00 = (6 * s2 - 6 * s) / h, d10 = 3 * s2 - 4 * s + 1;
  const double d01 = (-6 * s2 + 6 * s) / h, d11 = 3 * s2 - 2 * s;
  out.pos = h00 * pa + h10 * h * va + h01 * pb + h11 * h * vb;
  out.vel = d00 * pa + d10 * va + d01 * pb + d11 * vb;
  const Vec2& stance = plan.knot_stance[s > 0.0 ? k + 1 : k];
  out.relative = RomState(Eigen::VectorXd(out.pos - stance),
                          Eigen::VectorXd(out.vel));
  return out;
}

}  // namespace romshaper
