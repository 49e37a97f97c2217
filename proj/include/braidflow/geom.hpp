#pragma once

#include <cmath>

namespace braidflow {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Vec2 operator-() const { return {-x, -y}; }
    bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }

// Axis-aligned rectangle, lo <= hi componentwise.
struct Rect {
    Vec2 lo;
    Vec2 hi;

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    bool contains(Vec2 p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace braidflow
