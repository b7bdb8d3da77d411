// Convergence-stability analysis of curve evolutions in a vector field.
//
// The central quantity is J_nn = N^T J[F] N sampled along a converged curve:
// negative means a perturbation of the curve decays (stable), positive means
// it grows (unstable), zero is the marginal case. The module also carries
// the two experiment-style checks: the perturbation-decay contraction fit
// and the Gronwall-type divergence bound between paired marker evolutions.
#pragma once

#include <string>
#include <vector>

#include "cevo/curve.hpp"
#include "cevo/field.hpp"
#include "cevo/marker.hpp"

namespace cevo {

enum class Classification { Stable, MarginallyStable, Unstable };
std::string classification_name(Classification c);

// The documented composite rule: Unstable when mean > +tol; Stable when
// mean < -tol and max < +tol; MarginallyStable otherwise.
Classification classify_jnn(double mean, double min, double max, double marginal_tol);

struct StabilityReport {
    std::vector<double> samples;  // J_nn per (valid) vertex
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    Classification classification = Classification::MarginallyStable;
    double marginal_tol = 0.0;
    int clipped = 0;  // vertices too close to the boundary, skipped
};

// J_nn at each vertex via jacobian_at and the vertex normal.
// marginal_tol <= 0 selects the default 0.05 * max ||J[F]||_inf over the
// curve. Vertices outside the derivative-safe domain are skipped and
// counted. Throws std::invalid_argument for an empty curve.
StabilityReport jnn_along_curve(const VectorField& f, const CurvePolyline& c,
                                double marginal_tol = 0.0);

struct MarginalityResult {
    double mean_abs_jnn = 0.0;  // NaN when no valid vertex
    int valid = 0;
    int skipped = 0;  // zero-gradient or boundary-clipped vertices
};

// Mean |J_nn| along c_star for the quarter-turn-rotated gradient field of g,
// normalized to unit length when `normalized` (the marginal-stability
// statement for the equilibrium flow). Vertices where |grad g| is below
// 1e-6 * max are skipped and counted.
MarginalityResult ef_marginality_check(const ScalarField& g, const CurvePolyline& c_star,
                                       bool normalized = true);

// max over vertices of <Hess(g) N, N>; at a converged gradient-descent curve
// this cannot exceed ~0 (curve sits on a ridge of g in the normal direction).
double hessian_sign_check(const ScalarField& g, const CurvePolyline& c_star);

struct PerturbationTrace {
    std::vector<double> eta_norms;         // mean vertex-to-segment distance to c_star
    std::vector<double> eta_norms_vertex;  // mean per-vertex displacement distance
    double fitted_factor = 0.0;    // least-squares geometric ratio of eta_norms
    double predicted_factor = 0.0; // |1 - dtau * J_nn|, dtau = -dt
    double jnn_mean = 0.0;
};

// Displaces every vertex of c_star by amplitude * N, evolves the marker
// curve under beta = <F, N> with step dt for iters steps and fits the
// geometric decay factor of the distance back to c_star. Throws
// std::invalid_argument when the perturbed curve leaves the grid domain.
PerturbationTrace perturbation_decay(const VectorField& f, const CurvePolyline& c_star,
                                     double amplitude, double dt, int iters);

struct BoundReport {
    double lipschitz_L = 0.0;        // max finite-difference quotient over the run
    double mu = 0.0;                 // max ||G|| over the run
    std::vector<double> times;
    std::vector<double> divergence;  // max over paired vertices of ||C - S||
    std::vector<double> bound;       // right-hand side with the run's L, mu
    bool truncated = false;          // spacing violation ended the run early
};

// sep0 * e^{L t} + (mu/L) * (e^{L t} - 1); the comparison bound for two
// evolutions whose velocity laws differ by a term of norm <= mu.
double divergence_bound_value(double sep0, double lipschitz_L, double mu, double t);

// Evolves C under <R F, N> N and S under <R F, N> N + eps <F, N> N from the
// same vertices (marker engine, no resampling, vertex pairing preserved) and
// tabulates the measured divergence against the bound.
BoundReport divergence_bound_check(const VectorField& f, double eps, const MarkerCurve& c0,
                                   double dt, int steps,
                                   RotationSign rotation = RotationSign::CCW);

}  // namespace cevo
