#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace cosafe {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::hypot(x, y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

/// Axis-aligned rectangle given by center and half-extents.
struct Rect {
  Vec2 center;
  Vec2 half;

  Rect() = default;
  Rect(Vec2 c, Vec2 h) : center(c), half(h) {}
  static Rect from_min_max(Vec2 lo, Vec2 hi) {
    return Rect{{(lo.x + hi.x) * 0.5, (lo.y + hi.y) * 0.5},
                {(hi.x - lo.x) * 0.5, (hi.y - lo.y) * 0.5}};
  }

  double min_x() const { return center.x - half.x; }
  double max_x() const { return center.x + half.x; }
  double min_y() const { return center.y - half.y; }
  double max_y() const { return center.y + half.y; }
  double area() const { return 4.0 * half.x * half.y; }

  bool contains(const Vec2& p) const {
    return p.x >= min_x() && p.x <= max_x() && p.y >= min_y() && p.y <= max_y();
  }
  bool contains_rect(const Rect& r) const {
    return r.min_x() >= min_x() && r.max_x() <= max_x() && r.min_y() >= min_y() &&
           r.max_y() <= max_y();
  }
};

/// Area of the intersection of two rectangles (0 if disjoint).
inline double overlap_area(const Rect& a, const Rect& b) {
  const double w = std::min(a.max_x(), b.max_x()) - std::max(a.min_x(), b.min_x());
  const double h = std::min(a.max_y(), b.max_y()) - std::max(a.min_y(), b.min_y());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

/// Depth of penetration between two rectangles along each axis; both
/// positive iff the rectangles overlap with positive area.
inline Vec2 penetration_depths(const Rect& a, const Rect& b) {
  const double px = (a.half.x + b.half.x) - std::abs(a.center.x - b.center.x);
  const double py = (a.half.y + b.half.y) - std::abs(a.center.y - b.center.y);
  return {px, py};
}

/// Closest point of a rectangle to a point (the point itself when inside).
inline Vec2 closest_point(const Rect& r, const Vec2& p) {
  return {std::clamp(p.x, r.min_x(), r.max_x()), std::clamp(p.y, r.min_y(), r.max_y())};
}

/// Disc vs rectangle overlap depth along the segment from the disc center to
/// the closest rectangle point; negative when separated.
inline double disc_rect_penetration(const Vec2& c, double radius, const Rect& r) {
  if (r.contains(c)) {
    // Center inside: depth is radius plus distance to the nearest face.
    const double dx = std::min(c.x - r.min_x(), r.max_x() - c.x);
    const double dy = std::min(c.y - r.min_y(), r.max_y() - c.y);
    return radius + std::min(dx, dy);
  }
  return radius - (c - closest_point(r, c)).norm();
}

/// Axis-aligned face/direction of a rectangle. Also used as push direction.
enum class Dir : std::uint8_t { PosX = 0, NegX = 1, PosY = 2, NegY = 3 };

constexpr std::array<Dir, 4> kAllDirs = {Dir::PosX, Dir::NegX, Dir::PosY, Dir::NegY};

inline Dir opposite(Dir d) {
  switch (d) {
    case Dir::PosX: return Dir::NegX;
    case Dir::NegX: return Dir::PosX;
    case Dir::PosY: return Dir::NegY;
    case Dir::NegY: return Dir::PosY;
  }
  return Dir::PosX;
}

inline Vec2 unit(Dir d) {
  switch (d) {
    case Dir::PosX: return {1.0, 0.0};
    case Dir::NegX: return {-1.0, 0.0};
    case Dir::PosY: return {0.0, 1.0};
    case Dir::NegY: return {0.0, -1.0};
  }
  return {0.0, 0.0};
}

inline std::string to_string(Dir d) {
  switch (d) {
    case Dir::PosX: return "+x";
    case Dir::NegX: return "-x";
    case Dir::PosY: return "+y";
    case Dir::NegY: return "-y";
  }
  return "?";
}

inline bool parse_dir(const std::string& s, Dir& out) {
  if (s == "+x") out = Dir::PosX;
  else if (s == "-x") out = Dir::NegX;
  else if (s == "+y") out = Dir::PosY;
  else if (s == "-y") out = Dir::NegY;
  else return false;
  return true;
}

}  // namespace cosafe
