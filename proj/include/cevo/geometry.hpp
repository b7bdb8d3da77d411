// Small 2-D vector/matrix types shared by every module.
#pragma once

#include <cmath>

namespace cevo {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }

    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    double norm2() const { return x * x + y * y; }

    Vec2 normalized() const {
        double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// Quarter-turn rotations. rot90ccw = [[0,-1],[1,0]].
inline Vec2 rot90ccw(const Vec2& v) { return {-v.y, v.x}; }
inline Vec2 rot90cw(const Vec2& v) { return {v.y, -v.x}; }

// 2x2 matrix; holds Jacobians J[F], Hessians and the flow rotation.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0;
    double a21 = 0.0, a22 = 0.0;

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }

    // max absolute row sum
    double inf_norm() const {
        double r1 = std::abs(a11) + std::abs(a12);
        double r2 = std::abs(a21) + std::abs(a22);
        return r1 > r2 ? r1 : r2;
    }

    bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) &&
               std::isfinite(a21) && std::isfinite(a22);
    }

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 zero() { return {}; }
    // CCW quarter turn, determinant +1
    static Mat2 rotation_ccw() { return {0.0, -1.0, 1.0, 0.0}; }
    static Mat2 rotation_cw() { return {0.0, 1.0, -1.0, 0.0}; }
};

// n^T M n
inline double quad_form(const Mat2& m, const Vec2& n) {
    return n.dot(m * n);
}

}  // namespace cevo
