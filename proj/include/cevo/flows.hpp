// Velocity laws driving the level-set evolution and the alternating
// two-phase scheduler.
//
// Three laws, all normal flows beta*N with N = grad(Phi)/|grad(Phi)|:
//   GradientDescent       beta = <F, N>
//   Equilibrium           beta = <R F, N>        (R: quarter-turn rotation)
//   ModifiedEquilibrium   beta = <R F, N> + epsilon * <F, N>
// The modified law is computed as the literal sum of the two inner products,
// so speed_field(Modified, eps) == speed_field(Equilibrium)
//                                  + eps * speed_field(GradientDescent)
// holds exactly, node for node.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cevo/curve.hpp"
#include "cevo/field.hpp"
#include "cevo/levelset.hpp"

namespace cevo {

enum class FlowKind { GradientDescent, Equilibrium, ModifiedEquilibrium };
enum class RotationSign { CCW, CW };

struct FlowSpec {
    FlowKind kind = FlowKind::GradientDescent;
    RotationSign rotation_sign = RotationSign::CCW;
    double epsilon = 0.0;          // ModifiedEquilibrium only
    bool normalize_field = false;  // F <- F/|F| where |F| above floor, else 0
};

Mat2 rotation_matrix(RotationSign sign);

// Replace F by F/|F| where |F| > 1e-6 * max|F|, by 0 elsewhere.
VectorField normalize_field(const VectorField& f);

struct SpeedField {
    std::vector<double> beta;  // per node
    int flat_nodes = 0;        // nodes where |grad Phi| < 1e-8 (N taken as 0)
};

// Per-node normal speed for the given law. Precondition (documented, not
// checked here): ls was reinitialized recently, so grad(Phi) is a meaningful
// normal; run_flow's reinit policy maintains this.
SpeedField speed_field(const FlowSpec& spec, const VectorField& f, const LevelSetFunction& ls);

struct AlternationConfig {
    int length_window = 10;       // steps
    double length_rel_tol = 1e-3;
    int max_outer_cycles = 8;
    int max_steps_per_phase = 2000;
    double speed_tol = 0.0;       // <= 0: auto, 1e-3 * max|F| (floored at 1e-12)
};

struct EvolveParams {
    double cfl = 0.45;         // of the 0.5 explicit upwind limit
    int reinit_interval = 20;  // steps between reinitializations
    // optional per-step hook (frame dumps); called after each evolve step
    std::function<void(const LevelSetFunction&, const std::string& phase, int step)> on_step;
};

enum class RunOutcome { Converged, Stalled, Vanished, Budget };
std::string outcome_name(RunOutcome o);

struct ConvergenceRecord {
    std::string phase;
    RunOutcome outcome = RunOutcome::Budget;
    std::vector<int> step;
    std::vector<double> length;     // total zero-set length
    std::vector<double> area;       // total signed enclosed area
    std::vector<double> max_speed;  // max |beta| sampled along the zero set
};

struct FlowResult {
    LevelSetFunction ls;
    ConvergenceRecord record;
};

// Evolves until max|beta| along the zero set stays below speed_tol for
// length_window consecutive steps (Converged), the zero set empties
// (Vanished) or max_steps_per_phase is hit (Budget).
FlowResult run_flow(const FlowSpec& spec, const VectorField& f, LevelSetFunction ls0,
                    const AlternationConfig& config, const EvolveParams& params = {});

struct GeoSnakesResult {
    LevelSetFunction ls;
    std::vector<ConvergenceRecord> records;  // one per phase
    RunOutcome outcome = RunOutcome::Budget;
    // zero-set snapshots for the standard four-panel report
    std::vector<CurvePolyline> initial_curves;
    std::vector<CurvePolyline> post_first_gd_curves;
    std::vector<CurvePolyline> post_first_ef_curves;
    std::vector<CurvePolyline> final_curves;
};

// Alternates a GradientDescent phase with the EF phase (ef_spec.kind must be
// Equilibrium or ModifiedEquilibrium); each phase ends when the curve length
// stalls over length_window steps. The outer loop stops when a whole cycle
// moves the zero set by less than h (Hausdorff), then runs one last
// GradientDescent phase. Vanishing ends the run with outcome Vanished.
GeoSnakesResult run_geosnakes(const VectorField& f, LevelSetFunction ls0,
                              const FlowSpec& ef_spec, const AlternationConfig& config,
                              const EvolveParams& params = {});

// Arc-length weighted mean of a sampled scalar along curves; used for the
// mean |grad g| diagnostics. Returns 0 for empty input.
double mean_along_curves(const ScalarField& f, const std::vector<CurvePolyline>& curves);

double total_length(const std::vector<CurvePolyline>& curves);
double total_area(const std::vector<CurvePolyline>& curves);

}  // namespace cevo
