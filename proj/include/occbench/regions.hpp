#pragma once

#include <span>
#include <vector>

#include "occbench/errors.hpp"
#include "occbench/geometry.hpp"
#include "occbench/model.hpp"

namespace occbench {

enum class RegionKind { FG, BG };

/// The actor region (one rect per tube trajectory) and its complement within
/// the frame. BG is the frame minus fg_rect and is generally non-convex.
struct RegionSpec {
  RegionKind kind = RegionKind::FG;
  Rect fg_rect;
  int frame_width = 0;
  int frame_height = 0;

  Rect frame_rect() const { return Rect{0, 0, frame_width, frame_height}; }

  bool contains(int x, int y) const {
    if (x < 0 || x >= frame_width || y < 0 || y >= frame_height) return false;
    bool in_fg = fg_rect.contains(x, y);
    return kind == RegionKind::FG ? in_fg : !in_fg;
  }

  /// Rect that bounds the region: fg_rect for FG, the frame for BG.
  Rect bounding_rect() const { return kind == RegionKind::FG ? fg_rect : frame_rect(); }
};

struct SeverityBand {
  int level = 1;
  double lo = 0.0;
  double hi = 0.0;  // half-open: fraction in [lo, hi)
};

inline SeverityBand severity_band(int level) {
  switch (level) {
    case 1: return SeverityBand{1, 0.0, 0.2};
    case 2: return SeverityBand{2, 0.2, 0.4};
    case 3: return SeverityBand{3, 0.4, 0.6};
    default:
      throw OutOfCalibratedRangeError("severity level " + std::to_string(level) +
                                      " outside {1,2,3}");
  }
}

/// Band containing the fraction. Levels are calibrated only on [0, 0.6).
inline int severity_level(double fraction) {
  if (fraction >= 0.0 && fraction < 0.2) return 1;
  if (fraction >= 0.2 && fraction < 0.4) return 2;
  if (fraction >= 0.4 && fraction < 0.6) return 3;
  throw OutOfCalibratedRangeError("fraction " + std::to_string(fraction) +
                                  " outside the calibrated range [0, 0.6)");
}

/// Tightest integer rect enclosing every box of the tube, rounded outward.
inline Rect actor_region(const ActionTube& tube) {
  if (tube.frames.empty()) throw EmptyTubeError("tube '" + tube.tube_id + "' has no frames");
  BoundingBox envelope = tube.frames.begin()->second;
  for (const auto& [frame_index, box] : tube.frames) {
    envelope.x_min = std::min(envelope.x_min, box.x_min);
    envelope.y_min = std::min(envelope.y_min, box.y_min);
    envelope.x_max = std::max(envelope.x_max, box.x_max);
    envelope.y_max = std::max(envelope.y_max, box.y_max);
  }
  return outer_rect(envelope);
}

/// Union envelope across all tubes; the multi-actor FG definition.
inline Rect actor_region(const std::vector<ActionTube>& tubes) {
  if (tubes.empty()) throw EmptyTubeError("video has no ground-truth tubes");
  Rect result = actor_region(tubes.front());
  for (std::size_t i = 1; i < tubes.size(); ++i) {
    Rect r = actor_region(tubes[i]);
    result.x_min = std::min(result.x_min, r.x_min);
    result.y_min = std::min(result.y_min, r.y_min);
    result.x_max = std::max(result.x_max, r.x_max);
    result.y_max = std::max(result.y_max, r.y_max);
  }
  return result;
}

inline long long region_area(const RegionSpec& region) {
  long long fg = intersect(region.fg_rect, region.frame_rect()).valid()
                     ? intersect(region.fg_rect, region.frame_rect()).area()
                     : 0;
  if (region.kind == RegionKind::FG) return fg;
  return static_cast<long long>(region.frame_width) * region.frame_height - fg;
}

/// Binary occluder footprint at some scale; bits are row-major 0/1.
struct FootprintMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
  long long pixel_count() const {
    long long n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
  }
};

/// A footprint positioned on the frame grid by its top-left corner.
struct PlacedFootprint {
  const FootprintMask* mask = nullptr;
  int left = 0;
  int top = 0;
};

/// Paints the placed footprint onto a frame-sized canvas, restricted to the
/// region; returns the number of canvas pixels newly covered.
inline long long paint_footprint(std::vector<std::uint8_t>& canvas, const RegionSpec& region,
                                 const PlacedFootprint& placed) {
  long long newly_covered = 0;
  const FootprintMask& mask = *placed.mask;
  int x_lo = std::max(0, placed.left);
  int y_lo = std::max(0, placed.top);
  int x_hi = std::min(region.frame_width, placed.left + mask.width);
  int y_hi = std::min(region.frame_height, placed.top + mask.height);
  for (int y = y_lo; y < y_hi; ++y) {
    for (int x = x_lo; x < x_hi; ++x) {
      if (!mask.at(x - placed.left, y - placed.top)) continue;
      if (!region.contains(x, y)) continue;
      std::uint8_t& cell = canvas[static_cast<std::size_t>(y) * region.frame_width + x];
      if (cell == 0) {
        cell = 1;
        ++newly_covered;
      }
    }
  }
  return newly_covered;
}

/// Fraction of the region area covered by the union of the footprints.
/// Overlapping footprints are not double-counted.
inline double occupied_fraction(std::span<const PlacedFootprint> footprints,
                                const RegionSpec& region) {
  long long area = region_area(region);
  if (area <= 0) throw EmptyRegionError("region has zero area");
  std::vector<std::uint8_t> canvas(static_cast<std::size_t>(region.frame_width) *
                                   region.frame_height);
  long long covered = 0;
  for (const auto& placed : footprints) covered += paint_footprint(canvas, region, placed);
  return static_cast<double>(covered) / static_cast<double>(area);
}

}  // namespace occbench
