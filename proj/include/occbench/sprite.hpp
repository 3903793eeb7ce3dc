#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "occbench/errors.hpp"
#include "occbench/image.hpp"
#include "occbench/regions.hpp"

namespace occbench {

enum class OccluderCategory { Indoor, Outdoor };

inline OccluderCategory parse_category(const std::string& text) {
  if (text == "indoor") return OccluderCategory::Indoor;
  if (text == "outdoor") return OccluderCategory::Outdoor;
  throw UnknownCategoryError("category must be 'indoor' or 'outdoor', got '" + text + "'");
}

inline const char* category_name(OccluderCategory category) {
  return category == OccluderCategory::Indoor ? "indoor" : "outdoor";
}

// A pixel belongs to the footprint when its alpha is at least one half.
constexpr std::uint8_t kFootprintAlphaThreshold = 128;

/// RGBA occluder cutout, trimmed to its opaque core at import time.
struct OccluderSprite {
  std::string sprite_id;
  OccluderCategory category = OccluderCategory::Indoor;
  Image rgba;                  // 4 channels
  long long footprint_area = 0;  // alpha >= 0.5 pixels at unit scale
  std::string source_label;
};

/// Builds a sprite from a decoded RGBA image: trims to the tight alpha
/// bounding box and records the unit-scale footprint area.
inline OccluderSprite import_sprite(const Image& rgba, const std::string& sprite_id,
                                    OccluderCategory category, const std::string& source_label) {
  if (rgba.channels != 4) throw DecodeError("sprite image must decode to RGBA");
  if (rgba.width <= 0 || rgba.height <= 0) throw DecodeError("sprite image is empty");

  int x_lo = rgba.width, y_lo = rgba.height, x_hi = -1, y_hi = -1;
  for (int y = 0; y < rgba.height; ++y) {
    for (int x = 0; x < rgba.width; ++x) {
      if (rgba.at(x, y, 3) >= kFootprintAlphaThreshold) {
        x_lo = std::min(x_lo, x);
        y_lo = std::min(y_lo, y);
        x_hi = std::max(x_hi, x);
        y_hi = std::max(y_hi, y);
      }
    }
  }
  if (x_hi < 0) throw EmptySpriteError("sprite '" + sprite_id + "' has no alpha >= 0.5 pixels");

  OccluderSprite sprite;
  sprite.sprite_id = sprite_id;
  sprite.category = category;
  sprite.source_label = source_label;
  sprite.rgba = Image(x_hi - x_lo + 1, y_hi - y_lo + 1, 4);
  long long footprint = 0;
  for (int y = 0; y < sprite.rgba.height; ++y) {
    for (int x = 0; x < sprite.rgba.width; ++x) {
      for (int c = 0; c < 4; ++c) sprite.rgba.at(x, y, c) = rgba.at(x + x_lo, y + y_lo, c);
      if (sprite.rgba.at(x, y, 3) >= kFootprintAlphaThreshold) ++footprint;
    }
  }
  sprite.footprint_area = footprint;
  return sprite;
}

inline int scaled_dimension(int dimension, double scale) {
  return std::max(1, static_cast<int>(std::llround(dimension * scale)));
}

/// Sprite RGBA at the given scale with the alpha re-thresholded to {0, 255}
/// so the footprint stays well-defined.
inline Image scaled_sprite_rgba(const OccluderSprite& sprite, double scale) {
  Image scaled = scale_bilinear(sprite.rgba, scaled_dimension(sprite.rgba.width, scale),
                                scaled_dimension(sprite.rgba.height, scale));
  for (int y = 0; y < scaled.height; ++y) {
    for (int x = 0; x < scaled.width; ++x) {
      std::uint8_t& alpha = scaled.at(x, y, 3);
      alpha = alpha >= kFootprintAlphaThreshold ? 255 : 0;
    }
  }
  return scaled;
}

inline FootprintMask footprint_mask(const Image& rgba) {
  FootprintMask mask;
  mask.width = rgba.width;
  mask.height = rgba.height;
  mask.bits.resize(static_cast<std::size_t>(rgba.width) * rgba.height);
  for (int y = 0; y < rgba.height; ++y) {
    for (int x = 0; x < rgba.width; ++x) {
      mask.bits[static_cast<std::size_t>(y) * rgba.width + x] =
          rgba.at(x, y, 3) >= kFootprintAlphaThreshold ? 1 : 0;
    }
  }
  return mask;
}

inline FootprintMask scaled_footprint(const OccluderSprite& sprite, double scale) {
  return footprint_mask(scaled_sprite_rgba(sprite, scale));
}

struct AreaBudget {
  double lo = 0.0;  // fractions of region area, inclusive interval
  double hi = 0.0;
};

/// Scale factor s with footprint_area * s^2 / region_area inside the budget
/// and the scaled sprite fitting inside the region's bounding rect. Targets
/// the budget midpoint, pulling back to the fit limit when necessary.
inline double fit_scale_for_budget(const OccluderSprite& sprite, const RegionSpec& region,
                                   const AreaBudget& budget) {
  if (!(budget.lo > 0.0) || budget.hi > 1.0 || budget.lo > budget.hi) {
    throw UnfittableError("budget must satisfy 0 < lo <= hi <= 1");
  }
  long long area = region_area(region);
  if (area <= 0) throw EmptyRegionError("region has zero area");
  if (sprite.footprint_area <= 0) throw EmptySpriteError("sprite has empty footprint");

  double unit_footprint = static_cast<double>(sprite.footprint_area);
  double region_pixels = static_cast<double>(area);
  double scale_lo = std::sqrt(budget.lo * region_pixels / unit_footprint);
  double scale_hi = std::sqrt(budget.hi * region_pixels / unit_footprint);

  Rect bound = region.bounding_rect();
  double fit_limit = std::min(static_cast<double>(bound.width()) / sprite.rgba.width,
                              static_cast<double>(bound.height()) / sprite.rgba.height);
  if (fit_limit < scale_lo) {
    throw UnfittableError("sprite '" + sprite.sprite_id +
                          "' cannot reach the budget within the region rect");
  }

  double target = std::sqrt((budget.lo + budget.hi) / 2.0 * region_pixels / unit_footprint);
  return std::min(target, std::min(scale_hi, fit_limit));
}

struct OccluderSet {
  std::vector<OccluderSprite> sprites;
  std::string filter = "all";  // indoor | outdoor | all

  OccluderSet filtered(const std::string& category) const {
    if (category == "all") return *this;
    OccluderCategory wanted = parse_category(category);
    OccluderSet out;
    out.filter = category;
    for (const auto& sprite : sprites) {
      if (sprite.category == wanted) out.sprites.push_back(sprite);
    }
    if (out.sprites.empty()) {
      throw EmptySpriteError("occluder set is empty after filtering to '" + category + "'");
    }
    return out;
  }

  const OccluderSprite* find(const std::string& sprite_id) const {
    for (const auto& sprite : sprites) {
      if (sprite.sprite_id == sprite_id) return &sprite;
    }
    return nullptr;
  }
};

}  // namespace occbench
