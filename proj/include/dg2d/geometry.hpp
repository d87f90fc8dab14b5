#pragma once

#include <cmath>

namespace dg2d {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

// Rotate by -90 degrees: the outward normal of a CCW-traversed edge.
inline Vec2 outward_normal(Vec2 from, Vec2 to) {
  Vec2 d = to - from;
  double len = norm(d);
  return {d.y / len, -d.x / len};
}

}  // namespace dg2d
