#include "cevo/flows.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cevo {

Mat2 rotation_matrix(RotationSign sign) {
    return sign == RotationSign::CCW ? Mat2::rotation_ccw() : Mat2::rotation_cw();
}

VectorField normalize_field(const VectorField& f) {
    VectorField out = f;
    double floor = 1e-6 * f.max_norm();
    for (size_t k = 0; k < out.u.size(); ++k) {
        double n = std::hypot(out.u[k], out.v[k]);
        if (n > floor) {
            out.u[k] /= n;
            out.v[k] /= n;
        } else {
            out.u[k] = 0.0;
            out.v[k] = 0.0;
        }
    }
    return out;
}

SpeedField speed_field(const FlowSpec& spec, const VectorField& f_in,
                       const LevelSetFunction& ls) {
    if (!f_in.grid.same_as(ls.phi.grid))
        throw std::invalid_argument("speed_field: field and level set grids differ");
    const VectorField f = spec.normalize_field ? normalize_field(f_in) : f_in;
    const Mat2 rot = rotation_matrix(spec.rotation_sign);
    const VectorField grad = gradient(ls.phi);

    SpeedField out;
    out.beta.assign(f.u.size(), 0.0);
    for (size_t k = 0; k < f.u.size(); ++k) {
        Vec2 gp{grad.u[k], grad.v[k]};
        double gn = gp.norm();
        if (gn < 1e-8) {
            ++out.flat_nodes;
            continue;  // flat region: N = 0, no motion
        }
        Vec2 n{gp.x / gn, gp.y / gn};
        Vec2 fv{f.u[k], f.v[k]};
        switch (spec.kind) {
            case FlowKind::GradientDescent:
                out.beta[k] = fv.dot(n);
                break;
            case FlowKind::Equilibrium:
                out.beta[k] = (rot * fv).dot(n);
                break;
            case FlowKind::ModifiedEquilibrium:
                // sum of the two inner products, kept separate so the
                // linearity identity holds exactly
                out.beta[k] = (rot * fv).dot(n) + spec.epsilon * fv.dot(n);
                break;
        }
    }
    return out;
}

std::string outcome_name(RunOutcome o) {
    switch (o) {
        case RunOutcome::Converged: return "converged";
        case RunOutcome::Stalled: return "stalled";
        case RunOutcome::Vanished: return "vanished";
        case RunOutcome::Budget: return "budget";
    }
    return "unknown";
}

double total_length(const std::vector<CurvePolyline>& curves) {
    double acc = 0.0;
    for (const auto& c : curves)
        if (c.vertices.size() >= 3) acc += curve_length(c);
    return acc;
}

double total_area(const std::vector<CurvePolyline>& curves) {
    double acc = 0.0;
    for (const auto& c : curves)
        if (c.closed && c.vertices.size() >= 3) acc += enclosed_area(c);
    return acc;
}

double mean_along_curves(const ScalarField& f, const std::vector<CurvePolyline>& curves) {
    double acc = 0.0, wsum = 0.0;
    for (const auto& c : curves) {
        for (size_t k = 0; k < c.vertices.size(); ++k) {
            const Vec2& v = c.vertices[k];
            double w = c.weights.empty() ? 1.0 : c.weights[k];
            acc += w * sample_scalar(f, v.x, v.y);
            wsum += w;
        }
    }
    return wsum > 0.0 ? acc / wsum : 0.0;
}

namespace {

double resolve_speed_tol(const AlternationConfig& cfg, const VectorField& f, bool normalized) {
    if (cfg.speed_tol > 0.0) return cfg.speed_tol;
    double scale = normalized ? 1.0 : f.max_norm();
    return std::max(1e-3 * scale, 1e-12);
}

double max_speed_on_curves(const std::vector<double>& beta, const GridSpec& grid,
                           const std::vector<CurvePolyline>& curves) {
    ScalarField bf;
    bf.grid = grid;
    bf.values = beta;
    double m = 0.0;
    for (const auto& c : curves)
        for (const Vec2& v : c.vertices)
            m = std::max(m, std::abs(sample_scalar(bf, v.x, v.y)));
    return m;
}

enum class PhaseStop { SpeedConverged, LengthStall };

// Shared inner loop of run_flow and the geosnakes phases; the two differ
// only in the stopping rule.
FlowResult evolve_phase(const FlowSpec& spec, const VectorField& f, LevelSetFunction ls,
                        const AlternationConfig& config, const EvolveParams& params,
                        PhaseStop stop_rule, const std::string& phase_name) {
    FlowResult result;
    result.record.phase = phase_name;
    result.record.outcome = RunOutcome::Budget;

    const double h = ls.phi.grid.spacing;
    const double speed_tol = resolve_speed_tol(config, f, spec.normalize_field);
    int quiet_steps = 0;

    if (ls.steps_since_reinit > 0) {
        auto r = reinitialize(ls);
        if (!r) {
            result.record.outcome = RunOutcome::Vanished;
            result.ls = std::move(ls);
            return result;
        }
        ls = std::move(*r);
    }

    for (int step = 0; step < config.max_steps_per_phase; ++step) {
        SpeedField sf = speed_field(spec, f, ls);
        double maxb_grid = 0.0;
        for (double b : sf.beta) maxb_grid = std::max(maxb_grid, std::abs(b));
        double dt = params.cfl * h / std::max(maxb_grid, 1e-12);

        ls = evolve_step(ls, sf.beta, dt);
        if (ls.steps_since_reinit >= params.reinit_interval) {
            auto r = reinitialize(ls);
            if (!r) {
                result.record.outcome = RunOutcome::Vanished;
                break;
            }
            ls = std::move(*r);
        }

        std::vector<CurvePolyline> curves = extract_curves(ls);
        if (curves.empty()) {
            result.record.outcome = RunOutcome::Vanished;
            break;
        }
        double len = total_length(curves);
        double area = total_area(curves);
        double maxb_curve = max_speed_on_curves(sf.beta, ls.phi.grid, curves);
        result.record.step.push_back(step);
        result.record.length.push_back(len);
        result.record.area.push_back(area);
        result.record.max_speed.push_back(maxb_curve);

        if (maxb_curve < speed_tol)
            ++quiet_steps;
        else
            quiet_steps = 0;
        if (quiet_steps >= config.length_window) {
            result.record.outcome = RunOutcome::Converged;
            break;
        }
        if (stop_rule == PhaseStop::LengthStall &&
            static_cast<int>(result.record.length.size()) > config.length_window) {
            size_t now = result.record.length.size() - 1;
            double then = result.record.length[now - config.length_window];
            if (std::abs(result.record.length[now] - then) <
                config.length_rel_tol * std::max(then, 1e-12)) {
                result.record.outcome = RunOutcome::Stalled;
                break;
            }
        }
    }
    result.ls = std::move(ls);
    return result;
}

}  // namespace

FlowResult run_flow(const FlowSpec& spec, const VectorField& f, LevelSetFunction ls0,
                    const AlternationConfig& config, const EvolveParams& params) {
    const char* name = spec.kind == FlowKind::GradientDescent ? "gradient_descent"
                       : spec.kind == FlowKind::Equilibrium   ? "equilibrium"
                                                              : "modified_equilibrium";
    return evolve_phase(spec, f, std::move(ls0), config, params, PhaseStop::SpeedConverged,
                        name);
}

GeoSnakesResult run_geosnakes(const VectorField& f, LevelSetFunction ls0,
                              const FlowSpec& ef_spec, const AlternationConfig& config,
                              const EvolveParams& params) {
    if (ef_spec.kind == FlowKind::GradientDescent)
        throw std::invalid_argument("run_geosnakes: EF phase must be an equilibrium flow");

    FlowSpec gd_spec = ef_spec;
    gd_spec.kind = FlowKind::GradientDescent;

    GeoSnakesResult result;
    result.initial_curves = extract_curves(ls0);
    const double h = ls0.phi.grid.spacing;
    const char* ef_name =
        ef_spec.kind == FlowKind::Equilibrium ? "equilibrium" : "modified_equilibrium";

    LevelSetFunction ls = std::move(ls0);
    bool done = false;
    for (int cycle = 0; cycle < config.max_outer_cycles && !done; ++cycle) {
        std::vector<CurvePolyline> cycle_start = extract_curves(ls);

        FlowResult gd = evolve_phase(gd_spec, f, std::move(ls), config, params,
                                     PhaseStop::LengthStall, "gradient_descent");
        result.records.push_back(std::move(gd.record));
        ls = std::move(gd.ls);
        if (result.records.back().outcome == RunOutcome::Vanished) {
            result.outcome = RunOutcome::Vanished;
            done = true;
            break;
        }
        if (cycle == 0) result.post_first_gd_curves = extract_curves(ls);

        FlowResult ef = evolve_phase(ef_spec, f, std::move(ls), config, params,
                                     PhaseStop::LengthStall, ef_name);
        result.records.push_back(std::move(ef.record));
        ls = std::move(ef.ls);
        if (result.records.back().outcome == RunOutcome::Vanished) {
            result.outcome = RunOutcome::Vanished;
            done = true;
            break;
        }
        if (cycle == 0) result.post_first_ef_curves = extract_curves(ls);

        std::vector<CurvePolyline> cycle_end = extract_curves(ls);
        if (hausdorff(cycle_start, cycle_end) < h) {
            result.outcome = RunOutcome::Converged;
            done = true;
        }
    }

    if (result.outcome != RunOutcome::Vanished) {
        // settle on a gradient-stationary curve (the alternation ends on the
        // gradient-descent leg)
        FlowResult last = evolve_phase(gd_spec, f, std::move(ls), config, params,
                                       PhaseStop::LengthStall, "gradient_descent_final");
        result.records.push_back(std::move(last.record));
        ls = std::move(last.ls);
        if (result.records.back().outcome == RunOutcome::Vanished)
            result.outcome = RunOutcome::Vanished;
    }

    result.final_curves = extract_curves(ls);
    result.ls = std::move(ls);
    return result;
}

}  // namespace cevo
