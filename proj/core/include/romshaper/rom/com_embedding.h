#pragma once

#include "romshaper/biped/biped_model.h"
#include "romshaper/rom/rom.h"

namespace romshaper {

/// y = CoM(q) - stance_foot, ydot = J_com(q) v.
RomState ComEmbedding(const BipedModel& model, const FullState& x,
                      const Vec2& stance_foot);

}  // namespace romshaper
