#include "cevo/marker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cevo {

namespace {

constexpr int kIntersectionCheckInterval = 10;

double min_spacing(const CurvePolyline& c) {
    size_t n = c.vertices.size();
    double m = std::numeric_limits<double>::infinity();
    for (size_t k = 0; k < n; ++k)
        m = std::min(m, (c.vertices[(k + 1) % n] - c.vertices[k]).norm());
    return m;
}

}  // namespace

MarkerCurve make_marker_curve(std::vector<Vec2> vertices) {
    CurvePolyline poly;
    poly.closed = true;
    poly.vertices = std::move(vertices);
    return make_marker_curve(poly);
}

MarkerCurve make_marker_curve(const CurvePolyline& poly_in) {
    if (poly_in.vertices.size() < 3)
        throw std::invalid_argument("marker curve needs at least 3 vertices");
    MarkerCurve c;
    c.poly = poly_in;
    c.poly.closed = true;
    orient_ccw(c.poly);
    rebuild_frames(c.poly);
    if (self_intersects(c.poly))
        throw std::invalid_argument("marker curve must be simple at construction");
    return c;
}

std::optional<MarkerCurve> marker_step(const MarkerCurve& c, const std::vector<double>& alpha,
                                       const std::vector<double>& beta, double dt) {
    size_t n = c.size();
    if (alpha.size() != n || beta.size() != n)
        throw std::invalid_argument("marker_step: coefficient size mismatch");
    double maxcoef = 0.0;
    for (size_t k = 0; k < n; ++k)
        maxcoef = std::max(maxcoef, std::max(std::abs(alpha[k]), std::abs(beta[k])));
    if (dt * maxcoef > 0.5 * min_spacing(c.poly) * (1.0 + 1e-12))
        throw std::invalid_argument("marker_step: step too large for vertex spacing");

    MarkerCurve out = c;
    for (size_t k = 0; k < n; ++k)
        out.poly.vertices[k] +=
            dt * (alpha[k] * c.poly.tangents[k] + beta[k] * c.poly.normals[k]);
    rebuild_frames(out.poly);
    out.steps_since_xcheck = c.steps_since_xcheck + 1;
    if (out.steps_since_xcheck >= kIntersectionCheckInterval) {
        out.steps_since_xcheck = 0;
        if (self_intersects(out.poly)) return std::nullopt;
    }
    return out;
}

MarkerCurve resample(const MarkerCurve& c, double target_spacing) {
    MarkerCurve out;
    out.poly = resample_closed(c.poly, target_spacing);
    out.resample_events = c.resample_events + 1;
    return out;
}

std::vector<double> normal_speed_along(const VectorField& f, const MarkerCurve& c) {
    size_t n = c.size();
    std::vector<double> beta(n);
    for (size_t k = 0; k < n; ++k) {
        Vec2 fv = sample_vector(f, c.poly.vertices[k].x, c.poly.vertices[k].y);
        beta[k] = fv.dot(c.poly.normals[k]);
    }
    return beta;
}

std::optional<double> check_tangential_invariance(
    const VectorField& f, const MarkerCurve& c0,
    const std::function<double(double, double)>& alpha_fn, int steps, double dt) {
    auto run = [&](bool with_alpha) -> std::optional<MarkerCurve> {
        MarkerCurve cur = c0;
        std::vector<double> alpha(cur.size(), 0.0);
        double t = 0.0;
        for (int s = 0; s < steps; ++s) {
            std::vector<double> beta = normal_speed_along(f, cur);
            if (with_alpha) {
                size_t n = cur.size();
                for (size_t k = 0; k < n; ++k)
                    alpha[k] = alpha_fn(static_cast<double>(k) / n, t);
            }
            auto next = marker_step(cur, alpha, beta, dt);
            if (!next) return std::nullopt;
            cur = std::move(*next);
            t += dt;
        }
        return cur;
    };
    auto plain = run(false);
    auto tangential = run(true);
    if (!plain || !tangential) return std::nullopt;
    return hausdorff(plain->poly, tangential->poly);
}

std::vector<double> check_normal_displacement(const VectorField& f, const MarkerCurve& c0,
                                              double tau, int substeps) {
    if (substeps < 1) throw std::invalid_argument("check_normal_displacement: substeps >= 1");
    const double dt = tau / substeps;
    MarkerCurve cur = c0;
    std::vector<double> zero(c0.size(), 0.0);
    for (int s = 0; s < substeps; ++s) {
        std::vector<double> beta = normal_speed_along(f, cur);
        auto next = marker_step(cur, zero, beta, dt);
        if (!next)
            throw std::runtime_error("check_normal_displacement: curve self-intersected");
        cur = std::move(*next);
    }
    size_t n = c0.size();
    std::vector<double> leakage(n, 0.0);
    for (size_t k = 0; k < n; ++k) {
        Vec2 disp = cur.poly.vertices[k] - c0.poly.vertices[k];
        double len = disp.norm();
        if (len > 0.0) leakage[k] = std::abs(disp.dot(c0.poly.tangents[k])) / len;
    }
    return leakage;
}

}  // namespace cevo
