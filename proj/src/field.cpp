#include "cevo/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cevo {

namespace {

void require_grid(const GridSpec& g) {
    if (!g.valid())
        throw std::invalid_argument("grid must be at least 3x3 with positive spacing");
}

// symmetric padding: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

}  // namespace

ScalarField::ScalarField(const GridSpec& g, double fill) : grid(g) {
    require_grid(g);
    values.assign(static_cast<size_t>(g.count()), fill);
}

bool ScalarField::finite() const {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

VectorField::VectorField(const GridSpec& g) : grid(g) {
    require_grid(g);
    u.assign(static_cast<size_t>(g.count()), 0.0);
    v.assign(static_cast<size_t>(g.count()), 0.0);
}

bool VectorField::finite() const {
    for (double a : u)
        if (!std::isfinite(a)) return false;
    for (double a : v)
        if (!std::isfinite(a)) return false;
    return true;
}

double VectorField::max_norm() const {
    double m = 0.0;
    for (size_t k = 0; k < u.size(); ++k)
        m = std::max(m, std::hypot(u[k], v[k]));
    return m;
}

namespace {

struct BilinearCell {
    int i0, j0;
    double fx, fy;
};

BilinearCell locate(const GridSpec& g, double x, double y) {
    const double h = g.spacing;
    if (!(x >= 0.0 && x <= g.world_width() && y >= 0.0 && y <= g.world_height()))
        throw std::domain_error("sample point outside grid domain");
    int i0 = std::min(static_cast<int>(x / h), g.width - 2);
    int j0 = std::min(static_cast<int>(y / h), g.height - 2);
    return {i0, j0, x / h - i0, y / h - j0};
}

double bilerp(double v00, double v10, double v01, double v11, double fx, double fy) {
    double b = v00 + (v10 - v00) * fx;
    double t = v01 + (v11 - v01) * fx;
    return b + (t - b) * fy;
}

}  // namespace

double sample_scalar(const ScalarField& f, double x, double y) {
    auto c = locate(f.grid, x, y);
    return bilerp(f.at(c.i0, c.j0), f.at(c.i0 + 1, c.j0), f.at(c.i0, c.j0 + 1),
                  f.at(c.i0 + 1, c.j0 + 1), c.fx, c.fy);
}

Vec2 sample_vector(const VectorField& f, double x, double y) {
    auto c = locate(f.grid, x, y);
    auto comp = [&](const std::vector<double>& w) {
        int s = f.grid.width;
        return bilerp(w[c.j0 * s + c.i0], w[c.j0 * s + c.i0 + 1],
                      w[(c.j0 + 1) * s + c.i0], w[(c.j0 + 1) * s + c.i0 + 1], c.fx, c.fy);
    };
    return {comp(f.u), comp(f.v)};
}

VectorField gradient(const ScalarField& f) {
    require_grid(f.grid);
    const int w = f.grid.width, h = f.grid.height;
    const double inv2h = 1.0 / (2.0 * f.grid.spacing);
    const double invh = 1.0 / f.grid.spacing;
    VectorField out(f.grid);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            double gx, gy;
            if (i == 0)
                gx = (f.at(1, j) - f.at(0, j)) * invh;
            else if (i == w - 1)
                gx = (f.at(w - 1, j) - f.at(w - 2, j)) * invh;
            else
                gx = (f.at(i + 1, j) - f.at(i - 1, j)) * inv2h;
            if (j == 0)
                gy = (f.at(i, 1) - f.at(i, 0)) * invh;
            else if (j == h - 1)
                gy = (f.at(i, h - 1) - f.at(i, h - 2)) * invh;
            else
                gy = (f.at(i, j + 1) - f.at(i, j - 1)) * inv2h;
            out.set(i, j, {gx, gy});
        }
    }
    return out;
}

bool jacobian_domain_ok(const GridSpec& g, double x, double y) {
    const double h = g.spacing;
    return x >= h && x <= (g.width - 2) * h && y >= h && y <= (g.height - 2) * h;
}

namespace {

// Bilinear cell whose four corners are interior nodes, so central
// differences exist at each of them. Requires the point one cell in.
BilinearCell locate_interior(const GridSpec& g, double x, double y) {
    if (!jacobian_domain_ok(g, x, y))
        throw std::domain_error("point too close to grid boundary for derivatives");
    const double h = g.spacing;
    int i0 = std::clamp(static_cast<int>(x / h), 1, g.width - 3);
    int j0 = std::clamp(static_cast<int>(y / h), 1, g.height - 3);
    return {i0, j0, x / h - i0, y / h - j0};
}

}  // namespace

Mat2 jacobian_at(const VectorField& f, double x, double y) {
    auto c = locate_interior(f.grid, x, y);
    const double inv2h = 1.0 / (2.0 * f.grid.spacing);
    double e[4][4];  // corner-major: dudx dudy dvdx dvdy
    for (int dj = 0; dj < 2; ++dj) {
        for (int di = 0; di < 2; ++di) {
            int i = c.i0 + di, j = c.j0 + dj;
            int k = dj * 2 + di;
            e[k][0] = (f.at(i + 1, j).x - f.at(i - 1, j).x) * inv2h;
            e[k][1] = (f.at(i, j + 1).x - f.at(i, j - 1).x) * inv2h;
            e[k][2] = (f.at(i + 1, j).y - f.at(i - 1, j).y) * inv2h;
            e[k][3] = (f.at(i, j + 1).y - f.at(i, j - 1).y) * inv2h;
        }
    }
    auto lerp4 = [&](int comp) {
        return bilerp(e[0][comp], e[1][comp], e[2][comp], e[3][comp], c.fx, c.fy);
    };
    return {lerp4(0), lerp4(1), lerp4(2), lerp4(3)};
}

Mat2 hessian_at(const ScalarField& g, double x, double y) {
    auto c = locate_interior(g.grid, x, y);
    const double h = g.grid.spacing;
    const double invh2 = 1.0 / (h * h);
    const double inv4h2 = 1.0 / (4.0 * h * h);
    double e[4][3];  // dxx dyy dxy per corner
    for (int dj = 0; dj < 2; ++dj) {
        for (int di = 0; di < 2; ++di) {
            int i = c.i0 + di, j = c.j0 + dj;
            int k = dj * 2 + di;
            e[k][0] = (g.at(i + 1, j) - 2.0 * g.at(i, j) + g.at(i - 1, j)) * invh2;
            e[k][1] = (g.at(i, j + 1) - 2.0 * g.at(i, j) + g.at(i, j - 1)) * invh2;
            e[k][2] = (g.at(i + 1, j + 1) - g.at(i + 1, j - 1) - g.at(i - 1, j + 1) +
                       g.at(i - 1, j - 1)) *
                      inv4h2;
        }
    }
    auto lerp3 = [&](int comp) {
        return bilerp(e[0][comp], e[1][comp], e[2][comp], e[3][comp], c.fx, c.fy);
    };
    double dxx = lerp3(0), dyy = lerp3(1), dxy = lerp3(2);
    return {dxx, dxy, dxy, dyy};
}

ScalarField gaussian_smooth(const ScalarField& f, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("gaussian_smooth: sigma must be >= 0");
    if (sigma == 0.0) return f;

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-0.5 * (k * k) / (sigma * sigma));
        sum += kernel[k + radius];
    }
    for (double& k : kernel) k /= sum;

    const int w = f.grid.width, h = f.grid.height;
    ScalarField tmp(f.grid), out(f.grid);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * f.at(reflect_index(i + k, w), j);
            tmp.at(i, j) = acc;
        }
    }
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp.at(i, reflect_index(j + k, h));
            out.at(i, j) = acc;
        }
    }
    return out;
}

VectorField gvf_extend(const VectorField& f, double mu, int iterations, double dt,
                       double tol) {
    require_grid(f.grid);
    if (mu <= 0.0) throw std::invalid_argument("gvf_extend: mu must be positive");
    const double h = f.grid.spacing;
    if (dt <= 0.0 || dt > h * h / (4.0 * mu))
        throw std::invalid_argument("gvf_extend: dt violates the stability limit h^2/(4 mu)");

    const int w = f.grid.width, hh = f.grid.height;
    std::vector<double> mag2(f.u.size());
    for (size_t k = 0; k < mag2.size(); ++k)
        mag2[k] = f.u[k] * f.u[k] + f.v[k] * f.v[k];

    VectorField cur = f;
    const double invh2 = 1.0 / (h * h);
    auto sweep = [&](std::vector<double>& wv, const std::vector<double>& fv) {
        double max_update = 0.0;
        std::vector<double> next(wv.size());
        for (int j = 0; j < hh; ++j) {
            for (int i = 0; i < w; ++i) {
                int k = j * w + i;
                // zero-flux: clamp indices at the boundary
                double wl = wv[j * w + std::max(i - 1, 0)];
                double wr = wv[j * w + std::min(i + 1, w - 1)];
                double wd = wv[std::max(j - 1, 0) * w + i];
                double wu = wv[std::min(j + 1, hh - 1) * w + i];
                double lap = (wl + wr + wd + wu - 4.0 * wv[k]) * invh2;
                double upd = dt * (mu * lap - (wv[k] - fv[k]) * mag2[k]);
                next[k] = wv[k] + upd;
                max_update = std::max(max_update, std::abs(upd));
            }
        }
        wv.swap(next);
        return max_update;
    };

    for (int it = 0; it < iterations; ++it) {
        double du = sweep(cur.u, f.u);
        double dv = sweep(cur.v, f.v);
        if (std::max(du, dv) < tol) break;
    }
    return cur;
}

ScalarField make_ring_field(const GridSpec& grid, double cx, double cy, double r0,
                            double sigma) {
    require_grid(grid);
    if (r0 <= 0.0 || sigma <= 0.0)
        throw std::invalid_argument("make_ring_field: r0 and sigma must be positive");
    ScalarField g(grid);
    const double h = grid.spacing;
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            double r = std::hypot(i * h - cx, j * h - cy);
            double d = r - r0;
            g.at(i, j) = std::exp(-0.5 * d * d / (sigma * sigma));
        }
    }
    return g;
}

ScalarField make_disk_pattern(const GridSpec& grid, const std::vector<Disk>& disks,
                              double blur_sigma, double ramp_x, double ramp_y) {
    require_grid(grid);
    if (blur_sigma < 0.0)
        throw std::invalid_argument("make_disk_pattern: blur_sigma must be >= 0");
    ScalarField img(grid);
    const double h = grid.spacing;
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            double x = i * h, y = j * h;
            double v = ramp_x * x + ramp_y * y;
            for (const Disk& d : disks)
                if (std::hypot(x - d.cx, y - d.cy) <= d.radius) v += 1.0;
            img.at(i, j) = v;
        }
    }
    return gaussian_smooth(img, blur_sigma);
}

ScalarField gradient_magnitude(const ScalarField& f) {
    VectorField g = gradient(f);
    ScalarField out(f.grid);
    for (size_t k = 0; k < out.values.size(); ++k)
        out.values[k] = std::hypot(g.u[k], g.v[k]);
    return out;
}

}  // namespace cevo
