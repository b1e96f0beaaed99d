#pragma once

#include <Eigen/Dense>

namespace romshaper {

struct PdGains {
  double kp = 0.0;
  double kd = 0.0;
};

/// a_des = a_ff + Kp (p_des - p) + Kd (v_des - v).
inline Eigen::VectorXd PdDesiredAccel(const Eigen::VectorXd& pos_des,
                                      const Eigen::VectorXd& vel_des,
                                      const Eigen::VectorXd& acc_ff,
                                      const Eigen::VectorXd& pos,
                                      const Eigen::VectorXd& vel,
                                      const PdGains& gains) {
  return acc_ff + gains.kp * (pos_des - pos) + gains.kd * (vel_des - vel);
}

}  // namespace romshaper
