#pragma once

#include <functional>

#include "cwkb/config.hpp"
#include "cwkb/grids.hpp"
#include "cwkb/trajectories.hpp"

namespace cwkb {

/* Pointwise chord evaluator chi(y, t) for the configured method; every
   method/state combination accepted by validate_method is supported. */
std::function<complexd(const Vec2&, double)> make_chord_evaluator(
    const RunConfig& cfg, const ShootingOptions& shoot = {});

/* Evaluate the configured grid at one time on a worker pool (threads = 0
   resolves to CHORDWKB_THREADS or the hardware count); assembly order is
   deterministic. */
ChordGrid evaluate_grid(const RunConfig& cfg, double t, const ShootingOptions& shoot = {});

}  // namespace cwkb
