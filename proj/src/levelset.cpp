#include "cevo/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>

namespace cevo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

LevelSetFunction init_circle(const GridSpec& grid, double cx, double cy, double radius) {
    LevelSetFunction ls;
    ls.phi = ScalarField(grid);
    const double h = grid.spacing;
    for (int j = 0; j < grid.height; ++j)
        for (int i = 0; i < grid.width; ++i)
            ls.phi.at(i, j) = std::hypot(i * h - cx, j * h - cy) - radius;
    return ls;
}

LevelSetFunction init_multi_circle(const GridSpec& grid, const std::vector<Circle>& circles) {
    if (circles.empty()) throw std::invalid_argument("init_multi_circle: no circles");
    LevelSetFunction ls;
    ls.phi = ScalarField(grid, kInf);
    const double h = grid.spacing;
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            double best = kInf;
            for (const Circle& c : circles)
                best = std::min(best, std::hypot(i * h - c.cx, j * h - c.cy) - c.radius);
            ls.phi.at(i, j) = best;
        }
    }
    return ls;
}

LevelSetFunction evolve_step(const LevelSetFunction& ls, const std::vector<double>& beta,
                             double dt) {
    const GridSpec& g = ls.phi.grid;
    if (beta.size() != static_cast<size_t>(g.count()))
        throw std::invalid_argument("evolve_step: speed array size mismatch");
    double maxb = 0.0;
    for (double b : beta) {
        if (!std::isfinite(b)) throw std::invalid_argument("evolve_step: speed must be finite");
        maxb = std::max(maxb, std::abs(b));
    }
    const double h = g.spacing;
    if (dt <= 0.0 || dt * maxb > 0.5 * h * (1.0 + 1e-12))
        throw std::invalid_argument("evolve_step: CFL violation, need dt*max|beta| <= 0.5 h");

    const int w = g.width, hh = g.height;
    const double invh = 1.0 / h;
    LevelSetFunction out;
    out.phi = ScalarField(g);
    out.steps_since_reinit = ls.steps_since_reinit + 1;
    const ScalarField& p = ls.phi;
    for (int j = 0; j < hh; ++j) {
        for (int i = 0; i < w; ++i) {
            double b = beta[j * w + i];
            double dxm = i > 0 ? (p.at(i, j) - p.at(i - 1, j)) * invh : 0.0;
            double dxp = i < w - 1 ? (p.at(i + 1, j) - p.at(i, j)) * invh : 0.0;
            double dym = j > 0 ? (p.at(i, j) - p.at(i, j - 1)) * invh : 0.0;
            double dyp = j < hh - 1 ? (p.at(i, j + 1) - p.at(i, j)) * invh : 0.0;
            double g2;
            if (b > 0.0) {
                double a1 = std::max(dxm, 0.0), a2 = std::min(dxp, 0.0);
                double a3 = std::max(dym, 0.0), a4 = std::min(dyp, 0.0);
                g2 = a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4;
            } else {
                double a1 = std::min(dxm, 0.0), a2 = std::max(dxp, 0.0);
                double a3 = std::min(dym, 0.0), a4 = std::max(dyp, 0.0);
                g2 = a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4;
            }
            out.phi.at(i, j) = p.at(i, j) - dt * b * std::sqrt(g2);
        }
    }
    return out;
}

bool has_zero_crossing(const ScalarField& phi) {
    const int w = phi.grid.width, h = phi.grid.height;
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            bool neg = phi.at(i, j) < 0.0;
            if (i + 1 < w && neg != (phi.at(i + 1, j) < 0.0)) return true;
            if (j + 1 < h && neg != (phi.at(i, j + 1) < 0.0)) return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// marching squares

namespace {

// Grid edges carry the contour vertices. orientation 0: node(i,j)-(i+1,j),
// orientation 1: node(i,j)-(i,j+1).
int64_t edge_key(int orientation, int i, int j) {
    return (static_cast<int64_t>(orientation) << 42) | (static_cast<int64_t>(j) << 21) | i;
}

struct Chains {
    std::vector<std::vector<int64_t>> keys;
    std::vector<bool> closed;
};

Chains chain_segments(const std::vector<std::pair<int64_t, int64_t>>& segments) {
    // each crossing edge belongs to at most two segments
    std::map<int64_t, std::vector<std::pair<size_t, int64_t>>> incident;
    for (size_t s = 0; s < segments.size(); ++s) {
        incident[segments[s].first].push_back({s, segments[s].second});
        incident[segments[s].second].push_back({s, segments[s].first});
    }
    std::vector<bool> used(segments.size(), false);
    Chains out;
    for (size_t s0 = 0; s0 < segments.size(); ++s0) {
        if (used[s0]) continue;
        used[s0] = true;
        std::vector<int64_t> chain{segments[s0].first, segments[s0].second};
        bool is_closed = false;
        // forward from the tail
        for (;;) {
            int64_t tail = chain.back();
            const auto& inc = incident[tail];
            size_t next = segments.size();
            int64_t other = 0;
            for (const auto& [si, ok] : inc) {
                if (!used[si]) {
                    next = si;
                    other = ok;
                    break;
                }
            }
            if (next == segments.size()) break;
            used[next] = true;
            if (other == chain.front()) {
                is_closed = true;
                break;
            }
            chain.push_back(other);
        }
        if (!is_closed) {
            // extend backward from the head
            for (;;) {
                int64_t head = chain.front();
                const auto& inc = incident[head];
                size_t next = segments.size();
                int64_t other = 0;
                for (const auto& [si, ok] : inc) {
                    if (!used[si]) {
                        next = si;
                        other = ok;
                        break;
                    }
                }
                if (next == segments.size()) break;
                used[next] = true;
                chain.insert(chain.begin(), other);
            }
        }
        out.keys.push_back(std::move(chain));
        out.closed.push_back(is_closed);
    }
    return out;
}

}  // namespace

std::vector<CurvePolyline> extract_level_curves(const ScalarField& phi, double level) {
    const GridSpec& g = phi.grid;
    const int w = g.width, h = g.height;
    const double step = g.spacing;

    // crossing position on each cut edge, keyed by the grid edge
    std::map<int64_t, Vec2> points;
    auto cut = [&](int orientation, int i, int j, double v1, double v2) {
        int64_t key = edge_key(orientation, i, j);
        auto it = points.find(key);
        if (it != points.end()) return key;
        double t = v1 / (v1 - v2);
        t = std::clamp(t, 1e-6, 1.0 - 1e-6);
        Vec2 p{i * step, j * step};
        if (orientation == 0)
            p.x += t * step;
        else
            p.y += t * step;
        points.emplace(key, p);
        return key;
    };

    std::vector<std::pair<int64_t, int64_t>> segments;
    for (int j = 0; j + 1 < h; ++j) {
        for (int i = 0; i + 1 < w; ++i) {
            double a = phi.at(i, j) - level;        // bottom-left
            double b = phi.at(i + 1, j) - level;    // bottom-right
            double c = phi.at(i + 1, j + 1) - level;  // top-right
            double d = phi.at(i, j + 1) - level;    // top-left
            int mask = (a < 0.0 ? 1 : 0) | (b < 0.0 ? 2 : 0) | (c < 0.0 ? 4 : 0) |
                       (d < 0.0 ? 8 : 0);
            if (mask == 0 || mask == 15) continue;
            auto B = [&] { return cut(0, i, j, a, b); };
            auto T = [&] { return cut(0, i, j + 1, d, c); };
            auto L = [&] { return cut(1, i, j, a, d); };
            auto R = [&] { return cut(1, i + 1, j, b, c); };
            switch (mask) {
                case 1: case 14: segments.push_back({B(), L()}); break;
                case 2: case 13: segments.push_back({B(), R()}); break;
                case 3: case 12: segments.push_back({L(), R()}); break;
                case 4: case 11: segments.push_back({R(), T()}); break;
                case 6: case 9:  segments.push_back({B(), T()}); break;
                case 7: case 8:  segments.push_back({L(), T()}); break;
                case 5:
                    // saddle: resolve by the cell-center sample
                    if (0.25 * (a + b + c + d) < 0.0) {
                        segments.push_back({B(), R()});
                        segments.push_back({T(), L()});
                    } else {
                        segments.push_back({B(), L()});
                        segments.push_back({R(), T()});
                    }
                    break;
                case 10:
                    if (0.25 * (a + b + c + d) < 0.0) {
                        segments.push_back({B(), L()});
                        segments.push_back({R(), T()});
                    } else {
                        segments.push_back({B(), R()});
                        segments.push_back({T(), L()});
                    }
                    break;
                default: break;
            }
        }
    }

    Chains chains = chain_segments(segments);
    VectorField grad = gradient(phi);

    std::vector<CurvePolyline> curves;
    for (size_t c = 0; c < chains.keys.size(); ++c) {
        const auto& keys = chains.keys[c];
        bool closed = chains.closed[c];
        if (closed && keys.size() < 3) continue;
        if (!closed && keys.size() < 2) continue;

        CurvePolyline poly;
        poly.closed = closed;
        poly.vertices.reserve(keys.size());
        for (int64_t k : keys) poly.vertices.push_back(points.at(k));

        // outward normals from the gradient of phi
        std::vector<Vec2> normals(poly.vertices.size());
        for (size_t k = 0; k < poly.vertices.size(); ++k) {
            Vec2 gv = sample_vector(grad, poly.vertices[k].x, poly.vertices[k].y);
            normals[k] = gv.normalized();
        }

        // orient so the interior (phi < level) stays on the left
        size_t n = poly.vertices.size();
        double score = 0.0;
        size_t last = closed ? n : n - 1;
        for (size_t k = 0; k < last; ++k) {
            Vec2 d = poly.vertices[(k + 1) % n] - poly.vertices[k];
            score += d.dot(rot90ccw(normals[k]));
        }
        if (score < 0.0) {
            std::reverse(poly.vertices.begin(), poly.vertices.end());
            std::reverse(normals.begin(), normals.end());
        }

        poly.normals = std::move(normals);
        poly.tangents.resize(n);
        poly.weights.resize(n);
        for (size_t k = 0; k < n; ++k) {
            if (poly.normals[k].norm2() == 0.0) {
                // flat gradient at this vertex; fall back to the chain direction
                const Vec2& prev = poly.vertices[(k + n - 1) % n];
                const Vec2& next = poly.vertices[(k + 1) % n];
                Vec2 t = (next - prev).normalized();
                poly.tangents[k] = t;
                poly.normals[k] = rot90cw(t);
            } else {
                poly.tangents[k] = rot90ccw(poly.normals[k]);
            }
            const Vec2& prev = poly.vertices[(k + n - 1) % n];
            const Vec2& next = poly.vertices[(k + 1) % n];
            double wp = closed || k > 0 ? (poly.vertices[k] - prev).norm() : 0.0;
            double wn = closed || k + 1 < n ? (next - poly.vertices[k]).norm() : 0.0;
            poly.weights[k] = 0.5 * (wp + wn);
        }
        curves.push_back(std::move(poly));
    }
    return curves;
}

std::vector<CurvePolyline> extract_curves(const LevelSetFunction& ls) {
    return extract_level_curves(ls.phi, 0.0);
}

// ---------------------------------------------------------------------------
// reinitialization: exact distances near the extracted zero set, fast
// sweeping elsewhere, original signs reapplied.

namespace {

double point_segment_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

}  // namespace

std::optional<LevelSetFunction> reinitialize(const LevelSetFunction& ls) {
    const GridSpec& g = ls.phi.grid;
    const int w = g.width, h = g.height;
    const double hs = g.spacing;

    std::vector<CurvePolyline> curves = extract_curves(ls);
    if (curves.empty()) return std::nullopt;

    // band mask: nodes within a few cells of any contour vertex
    constexpr int kBand = 6;
    std::vector<uint8_t> mark(static_cast<size_t>(w) * h, 0);
    for (const auto& c : curves) {
        for (const Vec2& v : c.vertices) {
            int i = std::clamp(static_cast<int>(std::lround(v.x / hs)), 0, w - 1);
            int j = std::clamp(static_cast<int>(std::lround(v.y / hs)), 0, h - 1);
            mark[static_cast<size_t>(j) * w + i] = 1;
        }
    }
    // box dilation, radius kBand
    std::vector<uint8_t> tmp(mark.size(), 0), band(mark.size(), 0);
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            uint8_t m = 0;
            for (int k = std::max(0, i - kBand); k <= std::min(w - 1, i + kBand); ++k)
                m |= mark[static_cast<size_t>(j) * w + k];
            tmp[static_cast<size_t>(j) * w + i] = m;
        }
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            uint8_t m = 0;
            for (int k = std::max(0, j - kBand); k <= std::min(h - 1, j + kBand); ++k)
                m |= tmp[static_cast<size_t>(k) * w + i];
            band[static_cast<size_t>(j) * w + i] = m;
        }

    std::vector<double> dist(mark.size(), kInf);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            size_t k = static_cast<size_t>(j) * w + i;
            if (!band[k]) continue;
            Vec2 p{i * hs, j * hs};
            double best = kInf;
            for (const auto& c : curves) {
                size_t n = c.vertices.size();
                size_t lastseg = c.closed ? n : n - 1;
                for (size_t s = 0; s < lastseg; ++s)
                    best = std::min(
                        best, point_segment_dist(p, c.vertices[s], c.vertices[(s + 1) % n]));
            }
            dist[k] = best;
        }
    }

    // fast sweeping for the far field; band nodes stay frozen
    auto solve = [&](double a, double b) {
        if (a > b) std::swap(a, b);
        if (b - a >= hs || b == kInf) return a + hs;
        double s = 2.0 * hs * hs - (b - a) * (b - a);
        return 0.5 * (a + b + std::sqrt(s));
    };
    for (int pass = 0; pass < 20; ++pass) {
        double changed = 0.0;
        for (int dir = 0; dir < 4; ++dir) {
            int i0 = (dir & 1) ? w - 1 : 0, i1 = (dir & 1) ? -1 : w, di = (dir & 1) ? -1 : 1;
            int j0 = (dir & 2) ? h - 1 : 0, j1 = (dir & 2) ? -1 : h, dj = (dir & 2) ? -1 : 1;
            for (int j = j0; j != j1; j += dj) {
                for (int i = i0; i != i1; i += di) {
                    size_t k = static_cast<size_t>(j) * w + i;
                    if (band[k]) continue;
                    double ax = std::min(i > 0 ? dist[k - 1] : kInf,
                                         i < w - 1 ? dist[k + 1] : kInf);
                    double ay = std::min(j > 0 ? dist[k - w] : kInf,
                                         j < h - 1 ? dist[k + w] : kInf);
                    if (ax == kInf && ay == kInf) continue;
                    double cand = solve(ax, ay);
                    if (cand < dist[k]) {
                        changed = std::max(changed, dist[k] - cand);
                        dist[k] = cand;
                    }
                }
            }
        }
        if (changed < 1e-12 * hs) break;
    }

    LevelSetFunction out;
    out.phi = ScalarField(g);
    out.steps_since_reinit = 0;
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            size_t k = static_cast<size_t>(j) * w + i;
            double s = ls.phi.values[k] < 0.0 ? -1.0 : 1.0;
            out.phi.values[k] = s * (dist[k] == kInf ? (w + h) * hs : dist[k]);
        }
    }
    return out;
}

}  // namespace cevo
