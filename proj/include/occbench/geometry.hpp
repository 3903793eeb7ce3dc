#pragma once

#include <algorithm>
#include <cmath>

namespace occbench {

/// Axis-aligned box in real pixel coordinates, half-open: [x_min, x_max) x [y_min, y_max).
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  bool valid() const {
    return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
           std::isfinite(y_max) && x_min >= 0.0 && y_min >= 0.0 && x_min < x_max && y_min < y_max;
  }

  bool operator==(const BoundingBox&) const = default;
};

/// Integer pixel rectangle, half-open on both axes.
struct Rect {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min; }
  int height() const { return y_max - y_min; }
  long long area() const { return static_cast<long long>(width()) * height(); }

  bool valid() const { return x_min < x_max && y_min < y_max; }

  bool contains(int x, int y) const { return x >= x_min && x < x_max && y >= y_min && y < y_max; }

  bool contains(const Rect& other) const {
    return other.x_min >= x_min && other.y_min >= y_min && other.x_max <= x_max &&
           other.y_max <= y_max;
  }

  bool operator==(const Rect&) const = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
  return Rect{std::max(a.x_min, b.x_min), std::max(a.y_min, b.y_min), std::min(a.x_max, b.x_max),
              std::min(a.y_max, b.y_max)};
}

inline bool is_empty(const Rect& r) { return r.x_min >= r.x_max || r.y_min >= r.y_max; }

/// Smallest integer rect containing the real-valued box (outward rounding).
inline Rect outer_rect(const BoundingBox& box) {
  return Rect{static_cast<int>(std::floor(box.x_min)), static_cast<int>(std::floor(box.y_min)),
              static_cast<int>(std::ceil(box.x_max)), static_cast<int>(std::ceil(box.y_max))};
}

inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

}  // namespace occbench
