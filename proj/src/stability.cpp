#include "cevo/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cevo/flows.hpp"

namespace cevo {

std::string classification_name(Classification c) {
    switch (c) {
        case Classification::Stable: return "Stable";
        case Classification::MarginallyStable: return "MarginallyStable";
        case Classification::Unstable: return "Unstable";
    }
    return "unknown";
}

Classification classify_jnn(double mean, double /*min*/, double max, double marginal_tol) {
    if (mean > marginal_tol) return Classification::Unstable;
    if (mean < -marginal_tol && max < marginal_tol) return Classification::Stable;
    return Classification::MarginallyStable;
}

StabilityReport jnn_along_curve(const VectorField& f, const CurvePolyline& c,
                                double marginal_tol) {
    if (c.vertices.empty()) throw std::invalid_argument("jnn_along_curve: empty curve");
    if (c.normals.size() != c.vertices.size())
        throw std::invalid_argument("jnn_along_curve: curve is missing normals");

    StabilityReport rep;
    double jmax_norm = 0.0;
    for (size_t k = 0; k < c.vertices.size(); ++k) {
        const Vec2& v = c.vertices[k];
        if (!jacobian_domain_ok(f.grid, v.x, v.y)) {
            ++rep.clipped;
            continue;
        }
        Mat2 jac = jacobian_at(f, v.x, v.y);
        rep.samples.push_back(quad_form(jac, c.normals[k]));
        jmax_norm = std::max(jmax_norm, jac.inf_norm());
    }
    if (rep.samples.empty())
        throw std::invalid_argument("jnn_along_curve: no vertex inside the derivative domain");

    rep.min = std::numeric_limits<double>::infinity();
    rep.max = -std::numeric_limits<double>::infinity();
    double acc = 0.0;
    for (double s : rep.samples) {
        acc += s;
        rep.min = std::min(rep.min, s);
        rep.max = std::max(rep.max, s);
    }
    rep.mean = acc / rep.samples.size();
    rep.marginal_tol = marginal_tol > 0.0 ? marginal_tol : 0.05 * jmax_norm;
    rep.classification = classify_jnn(rep.mean, rep.min, rep.max, rep.marginal_tol);
    return rep;
}

MarginalityResult ef_marginality_check(const ScalarField& g, const CurvePolyline& c_star,
                                       bool normalized) {
    if (c_star.vertices.empty())
        throw std::invalid_argument("ef_marginality_check: empty curve");

    VectorField grad = gradient(g);
    ScalarField gmag = gradient_magnitude(g);
    double gmax = *std::max_element(gmag.values.begin(), gmag.values.end());
    double floor = 1e-6 * gmax;

    VectorField field = normalized ? normalize_field(grad) : grad;
    const Mat2 rot = Mat2::rotation_ccw();
    VectorField rotated(field.grid);
    for (size_t k = 0; k < field.u.size(); ++k) {
        Vec2 r = rot * Vec2{field.u[k], field.v[k]};
        rotated.u[k] = r.x;
        rotated.v[k] = r.y;
    }

    MarginalityResult res;
    double acc = 0.0;
    for (size_t k = 0; k < c_star.vertices.size(); ++k) {
        const Vec2& v = c_star.vertices[k];
        if (!jacobian_domain_ok(g.grid, v.x, v.y)) {
            ++res.skipped;
            continue;
        }
        if (sample_scalar(gmag, v.x, v.y) < floor) {
            ++res.skipped;
            continue;
        }
        Mat2 jac = jacobian_at(rotated, v.x, v.y);
        acc += std::abs(quad_form(jac, c_star.normals[k]));
        ++res.valid;
    }
    res.mean_abs_jnn =
        res.valid > 0 ? acc / res.valid : std::numeric_limits<double>::quiet_NaN();
    return res;
}

double hessian_sign_check(const ScalarField& g, const CurvePolyline& c_star) {
    if (c_star.vertices.empty())
        throw std::invalid_argument("hessian_sign_check: empty curve");
    double worst = -std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < c_star.vertices.size(); ++k) {
        const Vec2& v = c_star.vertices[k];
        if (!jacobian_domain_ok(g.grid, v.x, v.y)) continue;
        Mat2 hess = hessian_at(g, v.x, v.y);
        worst = std::max(worst, quad_form(hess, c_star.normals[k]));
    }
    if (!std::isfinite(worst))
        throw std::invalid_argument("hessian_sign_check: no vertex inside the domain");
    return worst;
}

namespace {

double mean_vertex_to_curve(const CurvePolyline& a, const CurvePolyline& ref) {
    double acc = 0.0;
    for (const Vec2& v : a.vertices) acc += point_to_curve_distance(v, ref);
    return acc / a.vertices.size();
}

// least-squares slope of log(eta_k) against k => geometric factor
double fit_geometric_factor(const std::vector<double>& norms) {
    std::vector<double> logs;
    for (double n : norms) {
        if (n <= 0.0) break;
        logs.push_back(std::log(n));
    }
    if (logs.size() < 2) return 1.0;
    double n = static_cast<double>(logs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t k = 0; k < logs.size(); ++k) {
        sx += k;
        sy += logs[k];
        sxx += static_cast<double>(k) * k;
        sxy += k * logs[k];
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::exp(slope);
}

}  // namespace

PerturbationTrace perturbation_decay(const VectorField& f, const CurvePolyline& c_star,
                                     double amplitude, double dt, int iters) {
    if (c_star.vertices.size() < 3)
        throw std::invalid_argument("perturbation_decay: degenerate reference curve");
    if (iters < 2) throw std::invalid_argument("perturbation_decay: need iters >= 2");

    StabilityReport rep = jnn_along_curve(f, c_star);

    CurvePolyline perturbed = c_star;
    for (size_t k = 0; k < perturbed.vertices.size(); ++k)
        perturbed.vertices[k] += amplitude * c_star.normals[k];
    for (const Vec2& v : perturbed.vertices)
        if (!(v.x >= 0.0 && v.x <= f.grid.world_width() && v.y >= 0.0 &&
              v.y <= f.grid.world_height()))
            throw std::invalid_argument("perturbation_decay: perturbed curve leaves the domain");

    MarkerCurve cur = make_marker_curve(perturbed);
    CurvePolyline original = c_star;  // fixed reference

    PerturbationTrace trace;
    trace.jnn_mean = rep.mean;
    trace.predicted_factor = std::abs(1.0 + dt * rep.mean);  // dtau = -dt

    std::vector<double> zero(cur.size(), 0.0);
    trace.eta_norms.push_back(mean_vertex_to_curve(cur.poly, original));
    trace.eta_norms_vertex.push_back(amplitude);
    for (int it = 0; it < iters; ++it) {
        std::vector<double> beta = normal_speed_along(f, cur);
        for (const Vec2& v : cur.poly.vertices)
            if (!(v.x >= 0.0 && v.x <= f.grid.world_width() && v.y >= 0.0 &&
                  v.y <= f.grid.world_height()))
                throw std::invalid_argument("perturbation_decay: curve left the domain");
        auto next = marker_step(cur, zero, beta, dt);
        if (!next) break;  // self-intersection ends the trace early
        cur = std::move(*next);
        trace.eta_norms.push_back(mean_vertex_to_curve(cur.poly, original));
        double acc = 0.0;
        for (size_t k = 0; k < cur.size(); ++k)
            acc += (cur.poly.vertices[k] - original.vertices[k]).norm();
        trace.eta_norms_vertex.push_back(acc / cur.size());
    }
    trace.fitted_factor = fit_geometric_factor(trace.eta_norms);
    return trace;
}

double divergence_bound_value(double sep0, double lipschitz_L, double mu, double t) {
    double e = std::exp(lipschitz_L * t);
    return sep0 * e + mu / lipschitz_L * (e - 1.0);
}

BoundReport divergence_bound_check(const VectorField& f, double eps, const MarkerCurve& c0,
                                   double dt, int steps, RotationSign rotation) {
    const Mat2 rot = rotation_matrix(rotation);
    MarkerCurve c = c0;  // base equilibrium flow
    MarkerCurve s = c0;  // modified flow, same initial vertices

    BoundReport rep;
    double quot_max = 0.0;

    auto velocity = [&](const MarkerCurve& m, size_t k) {
        Vec2 fv = sample_vector(f, m.poly.vertices[k].x, m.poly.vertices[k].y);
        return (rot * fv).dot(m.poly.normals[k]) * m.poly.normals[k];
    };

    std::vector<double> zero(c0.size(), 0.0);
    for (int step = 0; step < steps; ++step) {
        size_t n = c.size();
        std::vector<double> beta_c(n), beta_s(n);
        for (size_t k = 0; k < n; ++k) {
            Vec2 vc = velocity(c, k);
            Vec2 vs = velocity(s, k);
            Vec2 fs = sample_vector(f, s.poly.vertices[k].x, s.poly.vertices[k].y);
            double gmag = eps * fs.dot(s.poly.normals[k]);
            rep.mu = std::max(rep.mu, std::abs(gmag));

            double sep = (c.poly.vertices[k] - s.poly.vertices[k]).norm();
            if (sep > 1e-12)
                quot_max = std::max(quot_max, (vc - vs).norm() / sep);

            Vec2 fc = sample_vector(f, c.poly.vertices[k].x, c.poly.vertices[k].y);
            beta_c[k] = (rot * fc).dot(c.poly.normals[k]);
            beta_s[k] = (rot * fs).dot(s.poly.normals[k]) + gmag;
        }
        std::optional<MarkerCurve> nc, ns;
        try {
            nc = marker_step(c, zero, beta_c, dt);
            ns = marker_step(s, zero, beta_s, dt);
        } catch (const std::invalid_argument&) {
            rep.truncated = true;  // spacing violation: stop with a partial report
            break;
        }
        if (!nc || !ns) {
            rep.truncated = true;
            break;
        }
        c = std::move(*nc);
        s = std::move(*ns);

        double div = 0.0;
        for (size_t k = 0; k < c.size(); ++k)
            div = std::max(div, (c.poly.vertices[k] - s.poly.vertices[k]).norm());
        rep.times.push_back((step + 1) * dt);
        rep.divergence.push_back(div);
    }

    rep.lipschitz_L = std::max(quot_max, 1e-6);
    rep.bound.resize(rep.times.size());
    for (size_t k = 0; k < rep.times.size(); ++k)
        rep.bound[k] = divergence_bound_value(0.0, rep.lipschitz_L, rep.mu, rep.times[k]);
    return rep;
}

}  // namespace cevo
