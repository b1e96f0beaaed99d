#include "romshaper/rom/com_embedding.h"

namespace romshaper {

RomState ComEmbedding(const BipedModel& model, const FullState& x,
                      const Vec2& stance_foot) {
  const Vec2 com = model.ComPosition(x.q);
  Mat2x7 jac = Mat2x7::Zero();
  jac(0, kBaseX) = jac(1, kBaseZ) = model.params().torso_mass;
  jac += model.params().foot_mass * (model.FootJacobian(x.q, Foot::kLeft) +
                                     model.FootJacobian(x.q, Foot::kRight));
  jac /= model.total_mass();
  return RomState(com - stance_foot, jac * x.v);
}

}  // namespace romshaper
