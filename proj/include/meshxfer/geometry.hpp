#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace mxf {

using Index = std::int32_t;

/// A position in physical space. Coordinates are always stored as three
/// components; axes beyond the space dimension are exactly zero.
struct Point {
  std::array<double, 3> coord{0.0, 0.0, 0.0};

  constexpr Point() = default;
  constexpr Point(double x, double y, double z) : coord{x, y, z} {}

  double &operator[](std::size_t i) { return coord[i]; }
  double operator[](std::size_t i) const { return coord[i]; }

  double x() const { return coord[0]; }
  double y() const { return coord[1]; }
  double z() const { return coord[2]; }

  friend bool operator==(const Point &a, const Point &b) {
    return a.coord == b.coord;
  }
};

inline Point operator-(const Point &a, const Point &b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Point operator+(const Point &a, const Point &b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point operator*(double s, const Point &a) {
  return {s * a[0], s * a[1], s * a[2]};
}

inline double dot(const Point &a, const Point &b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline Point cross(const Point &a, const Point &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Point &a) { return std::sqrt(dot(a, a)); }

inline double distance2(const Point &a, const Point &b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

inline double distance(const Point &a, const Point &b) {
  return std::sqrt(distance2(a, b));
}

/// Axis-aligned box, also used as extent for the structured generators.
struct Box {
  Point lo;
  Point hi;

  static Box unit() { return {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}}; }

  double side(std::size_t axis) const { return hi[axis] - lo[axis]; }

  double diagonal() const { return distance(lo, hi); }

  bool contains(const Point &p) const {
    for (std::size_t a = 0; a < 3; ++a)
      if (p[a] < lo[a] || p[a] > hi[a])
        return false;
    return true;
  }

  void expand(const Point &p) {
    for (std::size_t a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }

  /// Squared distance from p to the box (zero inside).
  double min_distance2(const Point &p) const {
    double d2 = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      double d = 0.0;
      if (p[a] < lo[a])
        d = lo[a] - p[a];
      else if (p[a] > hi[a])
        d = p[a] - hi[a];
      d2 += d * d;
    }
    return d2;
  }
};

} // namespace mxf
