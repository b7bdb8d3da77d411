// Scalar and vector fields on a uniform 2-D grid: construction, bilinear
// sampling, finite-difference derivatives, Gaussian smoothing, GVF extension
// and the synthetic test patterns.
//
// Conventions: row-major storage, values[j*width + i] is the node at world
// position (i*spacing, j*spacing). Central differences in the interior,
// one-sided at the boundary. All operations are pure; fields are immutable
// once built.
#pragma once

#include <vector>

#include "cevo/geometry.hpp"

namespace cevo {

struct GridSpec {
    int width = 0;    // nodes in x, >= 3
    int height = 0;   // nodes in y, >= 3
    double spacing = 1.0;

    bool valid() const { return width >= 3 && height >= 3 && spacing > 0.0; }
    double world_width() const { return (width - 1) * spacing; }
    double world_height() const { return (height - 1) * spacing; }
    int count() const { return width * height; }
    bool same_as(const GridSpec& o) const {
        return width == o.width && height == o.height && spacing == o.spacing;
    }
};

struct ScalarField {
    GridSpec grid;
    std::vector<double> values;  // size width*height, row-major

    ScalarField() = default;
    ScalarField(const GridSpec& g, double fill = 0.0);

    double& at(int i, int j) { return values[j * grid.width + i]; }
    double at(int i, int j) const { return values[j * grid.width + i]; }

    bool finite() const;
};

struct VectorField {
    GridSpec grid;
    std::vector<double> u;  // x component
    std::vector<double> v;  // y component

    VectorField() = default;
    VectorField(const GridSpec& g);

    Vec2 at(int i, int j) const {
        int k = j * grid.width + i;
        return {u[k], v[k]};
    }
    void set(int i, int j, const Vec2& w) {
        int k = j * grid.width + i;
        u[k] = w.x;
        v[k] = w.y;
    }

    bool finite() const;
    double max_norm() const;  // max over nodes of ||(u,v)||
};

// Bilinear interpolation. Throws std::domain_error outside the grid's
// world rectangle [0,(w-1)h] x [0,(h-1)h]; no extrapolation.
double sample_scalar(const ScalarField& f, double x, double y);
Vec2 sample_vector(const VectorField& f, double x, double y);

// Central differences interior, one-sided at the boundary.
VectorField gradient(const ScalarField& f);

// Jacobian [du/dx du/dy; dv/dx dv/dy] from central differences of the
// components, bilinearly interpolated to (x,y). The point must be at least
// one cell inside the boundary; throws std::domain_error otherwise.
Mat2 jacobian_at(const VectorField& f, double x, double y);

// Hessian of g by second central differences, bilinearly interpolated.
// Same domain restriction as jacobian_at; a12 == a21 by construction.
Mat2 hessian_at(const ScalarField& g, double x, double y);

bool jacobian_domain_ok(const GridSpec& g, double x, double y);

// Separable discrete Gaussian, kernel truncated at radius ceil(3*sigma) and
// renormalized to sum 1; symmetric boundary padding. sigma == 0 returns the
// input unchanged; sigma < 0 throws std::invalid_argument.
ScalarField gaussian_smooth(const ScalarField& f, double sigma);

// Gradient Vector Flow extension: fixed-point iteration of
//   w <- w + dt*(mu*Lap(w) - (w - F)*|F|^2)
// per component, zero-flux boundary. Stops after `iterations` sweeps or when
// the max componentwise update drops below `tol`. dt must satisfy the
// explicit diffusion limit dt <= h^2/(4 mu); throws std::invalid_argument
// when violated (or mu <= 0).
VectorField gvf_extend(const VectorField& f, double mu, int iterations, double dt,
                       double tol = 1e-4);

// g(x,y) = exp(-(r - r0)^2 / (2 sigma^2)), r = distance to (cx,cy).
// Maximal (== 1) on the circle r == r0.
ScalarField make_ring_field(const GridSpec& grid, double cx, double cy, double r0,
                            double sigma);

struct Disk {
    double cx = 0.0;
    double cy = 0.0;
    double radius = 0.0;
};

// I = sum of disk indicators + gx*x + gy*y, then gaussian_smooth(I, blur).
ScalarField make_disk_pattern(const GridSpec& grid, const std::vector<Disk>& disks,
                              double blur_sigma, double ramp_x, double ramp_y);

// |gradient(f)| as a scalar field (the edge indicator g = |grad I|).
ScalarField gradient_magnitude(const ScalarField& f);

}  // namespace cevo
