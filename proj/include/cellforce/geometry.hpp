#pragma once

#include <array>
#include <cmath>

namespace cellforce {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    constexpr Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Signed area of the triangle (a, b, c); positive when counterclockwise.
constexpr double signed_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

using Triangle2 = std::array<Vec2, 3>;

/// Axis-aligned square cell.
struct CellSquare {
    Vec2 center{10.0, 10.0};
    double side = 6.0;

    Vec2 lower() const { return {center.x - 0.5 * side, center.y - 0.5 * side}; }
    Vec2 upper() const { return {center.x + 0.5 * side, center.y + 0.5 * side}; }
    double perimeter() const { return 4.0 * side; }
};

}  // namespace cellforce
