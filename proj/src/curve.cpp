#include "cevo/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cevo {

namespace {

void require_curve(const CurvePolyline& c) {
    if (c.vertices.size() < 3)
        throw std::invalid_argument("curve needs at least 3 vertices");
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

double curve_length(const CurvePolyline& c) {
    require_curve(c);
    double len = 0.0;
    size_t n = c.vertices.size();
    size_t last = c.closed ? n : n - 1;
    for (size_t k = 0; k < last; ++k)
        len += (c.vertices[(k + 1) % n] - c.vertices[k]).norm();
    return len;
}

double enclosed_area(const CurvePolyline& c) {
    require_curve(c);
    double acc = 0.0;
    size_t n = c.vertices.size();
    for (size_t k = 0; k < n; ++k) {
        const Vec2& p = c.vertices[k];
        const Vec2& q = c.vertices[(k + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

double point_to_curve_distance(const Vec2& p, const CurvePolyline& c) {
    size_t n = c.vertices.size();
    if (n == 0) return std::numeric_limits<double>::infinity();
    if (n == 1) return (p - c.vertices[0]).norm();
    double best = std::numeric_limits<double>::infinity();
    size_t last = c.closed ? n : n - 1;
    for (size_t k = 0; k < last; ++k)
        best = std::min(best, point_segment_distance(p, c.vertices[k], c.vertices[(k + 1) % n]));
    return best;
}

namespace {

double directed_hausdorff(const std::vector<CurvePolyline>& a,
                          const std::vector<CurvePolyline>& b) {
    double worst = 0.0;
    for (const auto& ca : a) {
        for (const Vec2& p : ca.vertices) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& cb : b) best = std::min(best, point_to_curve_distance(p, cb));
            worst = std::max(worst, best);
        }
    }
    return worst;
}

}  // namespace

double hausdorff(const CurvePolyline& a, const CurvePolyline& b) {
    return hausdorff(std::vector<CurvePolyline>{a}, std::vector<CurvePolyline>{b});
}

double hausdorff(const std::vector<CurvePolyline>& a, const std::vector<CurvePolyline>& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

bool point_in_polygon(const Vec2& p, const CurvePolyline& c) {
    // even-odd ray cast
    bool inside = false;
    size_t n = c.vertices.size();
    for (size_t k = 0, m = n - 1; k < n; m = k++) {
        const Vec2& a = c.vertices[k];
        const Vec2& b = c.vertices[m];
        if ((a.y > p.y) != (b.y > p.y)) {
            double xcross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < xcross) inside = !inside;
        }
    }
    return inside;
}

void rebuild_frames(CurvePolyline& c) {
    require_curve(c);
    size_t n = c.vertices.size();
    c.tangents.resize(n);
    c.normals.resize(n);
    c.weights.resize(n);
    for (size_t k = 0; k < n; ++k) {
        const Vec2& prev = c.vertices[(k + n - 1) % n];
        const Vec2& next = c.vertices[(k + 1) % n];
        Vec2 t = (next - prev).normalized();
        if (t.norm2() == 0.0) t = (c.vertices[k] - prev).normalized();
        c.tangents[k] = t;
        c.normals[k] = rot90cw(t);  // outward for a CCW curve
        c.weights[k] = 0.5 * ((c.vertices[k] - prev).norm() + (next - c.vertices[k]).norm());
    }
}

void orient_ccw(CurvePolyline& c) {
    require_curve(c);
    if (enclosed_area(c) < 0.0)
        std::reverse(c.vertices.begin(), c.vertices.end());
}

CurvePolyline resample_closed(const CurvePolyline& c, double target_spacing) {
    require_curve(c);
    if (target_spacing <= 0.0)
        throw std::invalid_argument("resample: target spacing must be positive");
    double total = curve_length(c);
    size_t n = c.vertices.size();
    int m = std::max(3, static_cast<int>(std::llround(total / target_spacing)));

    // cumulative arc lengths of the source polygon
    std::vector<double> cum(n + 1, 0.0);
    for (size_t k = 0; k < n; ++k)
        cum[k + 1] = cum[k] + (c.vertices[(k + 1) % n] - c.vertices[k]).norm();

    CurvePolyline out;
    out.closed = true;
    out.vertices.resize(m);
    size_t seg = 0;
    for (int k = 0; k < m; ++k) {
        double s = total * k / m;
        while (seg + 1 < n && cum[seg + 1] < s) ++seg;
        double seg_len = cum[seg + 1] - cum[seg];
        double t = seg_len > 0.0 ? (s - cum[seg]) / seg_len : 0.0;
        const Vec2& a = c.vertices[seg];
        const Vec2& b = c.vertices[(seg + 1) % n];
        out.vertices[k] = a + (b - a) * t;
    }
    rebuild_frames(out);
    return out;
}

CurvePolyline make_circle_polyline(double cx, double cy, double radius, int n) {
    if (n < 3) throw std::invalid_argument("circle polyline needs n >= 3");
    CurvePolyline c;
    c.closed = true;
    c.vertices.resize(n);
    c.normals.resize(n);
    c.tangents.resize(n);
    c.weights.resize(n);
    const double pi = std::acos(-1.0);
    for (int k = 0; k < n; ++k) {
        double a = 2.0 * pi * k / n;
        Vec2 nrm{std::cos(a), std::sin(a)};
        c.vertices[k] = {cx + radius * nrm.x, cy + radius * nrm.y};
        c.normals[k] = nrm;
        c.tangents[k] = rot90ccw(nrm);
        c.weights[k] = 2.0 * pi * radius / n;
    }
    return c;
}

CurvePolyline make_ellipse_polyline(double cx, double cy, double a, double b, int n) {
    if (n < 3) throw std::invalid_argument("ellipse polyline needs n >= 3");
    CurvePolyline c;
    c.closed = true;
    c.vertices.resize(n);
    const double pi = std::acos(-1.0);
    for (int k = 0; k < n; ++k) {
        double t = 2.0 * pi * k / n;
        c.vertices[k] = {cx + a * std::cos(t), cy + b * std::sin(t)};
    }
    rebuild_frames(c);
    return c;
}

namespace {

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
    auto cross = [](const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; };
    Vec2 r = p2 - p1, s = q2 - q1;
    double denom = cross(r, s);
    Vec2 pq = q1 - p1;
    if (denom == 0.0) return false;  // parallel; overlap treated as no crossing
    double t = cross(pq, s) / denom;
    double u = cross(pq, r) / denom;
    return t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0;
}

}  // namespace

bool self_intersects(const CurvePolyline& c) {
    size_t n = c.vertices.size();
    if (n < 4) return false;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the wrap
            if (segments_intersect(c.vertices[i], c.vertices[(i + 1) % n], c.vertices[j],
                                   c.vertices[(j + 1) % n]))
                return true;
        }
    }
    return false;
}

}  // namespace cevo
