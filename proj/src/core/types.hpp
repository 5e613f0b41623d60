#ifndef DIRAC2D_TYPES_HPP
#define DIRAC2D_TYPES_HPP

#include <array>
#include <cmath>
#include <complex>

namespace dirac2d {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

struct Vec2 {
    double x = 0, y = 0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm2() const { return x * x + y * y; }
    /// Rotation by +pi/2 (the 2D Hodge star on vectors).
    Vec2 perp() const { return {-y, x}; }
};

/// Complex-valued 2-vector (e.g. gradients of complex fields).
struct CVec2 {
    Complex x{}, y{};
    CVec2 operator+(const CVec2& o) const { return {x + o.x, y + o.y}; }
    CVec2 operator-(const CVec2& o) const { return {x - o.x, y - o.y}; }
    CVec2 operator*(Complex s) const { return {x * s, y * s}; }
    Complex dot(Vec2 v) const { return x * v.x + y * v.y; }
    double norm() const { return std::sqrt(std::norm(x) + std::norm(y)); }
};

inline CVec2 operator*(Vec2 v, Complex s) { return {v.x * s, v.y * s}; }

/// 2D vector as a complex number (x + iy); handy for near-field quadrature.
inline Complex to_c(Vec2 v) { return {v.x, v.y}; }

}  // namespace dirac2d

#endif
