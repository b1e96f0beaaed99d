#include "romshaper/control/swing_foot.h"

#include <algorithm>

namespace romshaper {

SwingSample SwingFootTrajectory(const Vec2& start, const Vec2& target,
                                double apex_height, double phase,
                                double duration) {
  const double s = std::clamp(phase, 0.0, 1.0);
  // Quintic blend 10s^3 - 15s^4 + 6s^5.
  const double s2 = s * s, s3 = s2 * s;
  const double blend = s3 * (10.0 - 15.0 * s + 6.0 * s2);
  const double blend_d = 30.0 * s2 * (1.0 - s) * (1.0 - s);
  const double blend_dd = 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);

  // Two cubic segments meeting at the apex with zero slope.
  double bump, bump_d, bump_dd;
  if (s <= 0.5) {
    const double a = 2.0 * s;
    bump = apex_height * a * a * (3.0 - 2.0 * a);
    bump_d = apex_height * 2.0 * 6.0 * a * (1.0 - a);
    bump_dd = apex_height * 4.0 * 6.0 * (1.0 - 2.0 * a);
  } else {
    const double a = 2.0 * s - 1.0;
    bump = apex_height * (1.0 - a * a * (3.0 - 2.0 * a));
    bump_d = -apex_height * 2.0 * 6.0 * a * (1.0 - a);
    bump_dd = -apex_height * 4.0 * 6.0 * (1.0 - 2.0 * a);
  }

  const Vec2 delta = target - start;
  const Vec2 up(0.0, 1.0);
  SwingSample out;
  out.pos = start + blend * delta + bump * up;
  out.vel = (blend_d * delta + bump_d * up) / duration;
  out.acc = (blend_dd * delta + bump_dd * up) / (duration * duration);
  return out;
}

}  // namespace romshaper
