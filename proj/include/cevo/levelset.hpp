// Implicit curve representation: the evolving curve is the zero set of a
// signed distance function Phi (negative inside, positive outside, outward
// normal grad(Phi)/|grad(Phi)|).
//
// Evolution is a first-order explicit step with Godunov upwinding of
// |grad Phi|; reinitialization rebuilds the signed distance to the current
// zero set (exact point-to-segment distances in a band around the extracted
// contour, fast sweeping outside). A curve that shrinks away leaves an empty
// zero set; that is a terminal outcome, reported as std::nullopt, never an
// exception.
#pragma once

#include <optional>
#include <vector>

#include "cevo/curve.hpp"
#include "cevo/field.hpp"

namespace cevo {

struct LevelSetFunction {
    ScalarField phi;
    int steps_since_reinit = 0;
};

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

// Exact signed distance to a circle: Phi = |x - c| - radius.
LevelSetFunction init_circle(const GridSpec& grid, double cx, double cy, double radius);

// Pointwise minimum of circle SDFs (union of interiors).
LevelSetFunction init_multi_circle(const GridSpec& grid, const std::vector<Circle>& circles);

// One explicit step of Phi_t = -beta |grad Phi|, upwinding switched by the
// sign of beta per node. Requires dt * max|beta| <= 0.5 h (CFL), beta finite,
// beta sized like the grid; throws std::invalid_argument otherwise.
LevelSetFunction evolve_step(const LevelSetFunction& ls, const std::vector<double>& beta,
                             double dt);

// Signed distance to the current zero set. Returns std::nullopt when the
// zero set is empty (the curve vanished).
std::optional<LevelSetFunction> reinitialize(const LevelSetFunction& ls);

bool has_zero_crossing(const ScalarField& phi);

// Marching squares on the level `level` of a scalar field. Closed contours
// are oriented CCW with the (phi < level) side on the left; per-vertex N is
// the sampled, normalized gradient (points toward increasing phi) and
// T = rot90ccw(N). Saddle cells are split by the cell-center sample sign.
std::vector<CurvePolyline> extract_level_curves(const ScalarField& phi, double level);

// extract_level_curves at level 0.
std::vector<CurvePolyline> extract_curves(const LevelSetFunction& ls);

}  // namespace cevo
