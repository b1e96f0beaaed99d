#include "romshaper/eval/reward.h"

#include <cmath>
#include <stdexcept>

namespace romshaper {

AchievedTask CommandedFeedback(const Task& task, double single_support) {
  return {task.stride, task.stride / single_support};
}

RewardWeights RewardWeights::Default(const BipedParams& biped, double tick_dt,
                                     double single_support) {
  const double supported =
      (biped.torso_mass + biped.foot_mass) * biped.gravity;
  RewardWeights w;
  w.w = 1.0 / (tick_dt * supported * supported);
  w.W = Eigen::Vector2d(25.0, 25.0 * single_support * single_support);
  return w;
}

double TaskTerm(const Task& task, const AchievedTask& achieved,
                const RewardWeights& weights, double single_support) {
  const AchievedTask cmd = CommandedFeedback(task, single_support);
  const Eigen::Vector2d e(cmd.stride - achieved.stride,
                          cmd.speed - achieved.speed);
  const double norm = std::sqrt(e.dot(weights.W.cwiseProduct(e)));
  return 0.5 * std::exp(-norm);
}

double Reward(double h, const Task& task, const AchievedTask& achieved,
              const RewardWeights& weights, double single_support) {
  if (h < 0.0) throw std::invalid_argument("Reward: h < 0");
  return std::exp(-weights.w * h) +
         TaskTerm(task, achieved, weights, single_support);
}

}  // namespace romshaper
