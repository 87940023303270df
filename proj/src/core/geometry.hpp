// geometry.hpp: small planar value types shared by every module.
#pragma once

#include <algorithm>
#include <cmath>

namespace gfd {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator-(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator+(const Vec2& a, const Vec2& b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }

// 2x2 real matrix, row major. Used for derivative matrices in the polar frame
// (columns are d/dr and r^{-1} d/dtheta of the two target coordinates).
struct Mat2 {
    double a = 0.0, b = 0.0;  // row 1
    double c = 0.0, d = 0.0;  // row 2

    double det() const { return a * d - b * c; }
    double frobenius_sq() const { return a * a + b * b + c * c + d * d; }

    // Largest singular value. Closed form: the larger eigenvalue of A^T A is
    // (|A|_F^2 + sqrt(|A|_F^4 - 4 det^2)) / 2; the discriminant is >= 0 with
    // equality exactly at conformal points, so tiny negative round-off is clamped.
    double op_norm_sq() const {
        const double f = frobenius_sq();
        const double dt = det();
        const double disc = std::max(0.0, f * f - 4.0 * dt * dt);
        return 0.5 * (f + std::sqrt(disc));
    }
    double op_norm() const { return std::sqrt(op_norm_sq()); }
};

inline Mat2 operator-(const Mat2& A, const Mat2& B) {
    return {A.a - B.a, A.b - B.b, A.c - B.c, A.d - B.d};
}

struct PolarPoint {
    double r = 0.0;
    double theta = 0.0;  // spiral maps interpret this as the unwrapped angle

    Vec2 to_cartesian() const { return {r * std::cos(theta), r * std::sin(theta)}; }
};

}  // namespace gfd
