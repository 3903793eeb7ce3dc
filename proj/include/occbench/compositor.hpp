#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "occbench/errors.hpp"
#include "occbench/image.hpp"
#include "occbench/planner.hpp"
#include "occbench/regions.hpp"
#include "occbench/rng.hpp"
#include "occbench/sprite.hpp"

namespace occbench {

struct RenderResult {
  std::vector<Image> frames;
  std::map<long, FrameSeverity> realized_severity;  // recomputed from footprints
  OcclusionPlan plan_echo;
};

/// out = alpha * sprite + (1 - alpha) * frame, rounded to the nearest level.
inline std::uint8_t blend_channel(std::uint8_t sprite_value, std::uint8_t frame_value,
                                  double alpha) {
  return clamp_channel(alpha * sprite_value + (1.0 - alpha) * frame_value);
}

namespace detail {

constexpr double kFeatherSigma = 1.0;
constexpr int kFeatherPad = 3;  // ceil(3 * sigma)

/// Feathered alpha plane of a scaled sprite, padded so the soft edge can
/// extend beyond the hard footprint. Values are in [0, 1].
inline std::vector<double> feathered_alpha(const Image& scaled_rgba, int& plane_width,
                                           int& plane_height) {
  plane_width = scaled_rgba.width + 2 * kFeatherPad;
  plane_height = scaled_rgba.height + 2 * kFeatherPad;
  std::vector<double> plane(static_cast<std::size_t>(plane_width) * plane_height, 0.0);
  for (int y = 0; y < scaled_rgba.height; ++y) {
    for (int x = 0; x < scaled_rgba.width; ++x) {
      plane[static_cast<std::size_t>(y + kFeatherPad) * plane_width + (x + kFeatherPad)] =
          scaled_rgba.at(x, y, 3) / 255.0;
    }
  }
  return gaussian_blur_plane(plane, plane_width, plane_height, kFeatherSigma);
}

}  // namespace detail

/// Blends the placed sprites over the frame in list order. FG-assigned
/// sprites are clipped to fg_rect, BG-assigned ones to its complement,
/// so an occluder never leaks across its region boundary.
inline Image composite_frame(const Image& frame,
                             const std::vector<std::pair<const OccluderSprite*, Placement>>&
                                 placements,
                             const Rect& fg_rect) {
  if (frame.channels != 3 && frame.channels != 4) {
    throw DimensionMismatchError("frame must be RGB or RGBA");
  }
  Image out = frame;
  for (const auto& [sprite, placement] : placements) {
    Image scaled = scaled_sprite_rgba(*sprite, placement.scale);
    auto [left, top] = mask_origin(placement.position, scaled.width, scaled.height);

    int plane_width = 0, plane_height = 0;
    std::vector<double> alpha = detail::feathered_alpha(scaled, plane_width, plane_height);
    int plane_left = left - detail::kFeatherPad;
    int plane_top = top - detail::kFeatherPad;

    bool fg_assigned = placement.region == RegionKind::FG;
    for (int py = 0; py < plane_height; ++py) {
      int y = plane_top + py;
      if (y < 0 || y >= out.height) continue;
      for (int px = 0; px < plane_width; ++px) {
        int x = plane_left + px;
        if (x < 0 || x >= out.width) continue;
        if (fg_rect.contains(x, y) != fg_assigned) continue;
        double a = alpha[static_cast<std::size_t>(py) * plane_width + px];
        if (a <= 0.0) continue;
        if (a > 1.0) a = 1.0;
        int sx = std::clamp(px - detail::kFeatherPad, 0, scaled.width - 1);
        int sy = std::clamp(py - detail::kFeatherPad, 0, scaled.height - 1);
        for (int c = 0; c < 3; ++c) {
          out.at(x, y, c) = blend_channel(scaled.at(sx, sy, c), out.at(x, y, c), a);
        }
      }
    }
  }
  return out;
}

/// Per-frame severity recomputed from the plan's footprints (pre-feather
/// alpha, region-clipped); the compositor and planner share this path.
inline std::map<long, FrameSeverity> measure_plan_severity(const OcclusionPlan& plan,
                                                           const OccluderSet& sprites) {
  RegionSpec fg = plan.region(RegionKind::FG);
  RegionSpec bg = plan.region(RegionKind::BG);
  std::map<long, FrameSeverity> out;
  for (long t = 0; t < plan.frame_count; ++t) {
    std::vector<FootprintMask> masks;
    std::vector<PlacedFootprint> fg_masks;
    std::vector<PlacedFootprint> bg_masks;
    masks.reserve(plan.per_occluder.size());
    for (const auto& occluder : plan.per_occluder) {
      const OccluderSprite* sprite = sprites.find(occluder.sprite_id);
      if (sprite == nullptr) {
        throw MissingSpriteError("plan references unknown sprite '" + occluder.sprite_id + "'");
      }
      auto it = occluder.frames.find(t);
      if (it == occluder.frames.end()) {
        throw ValidationError(plan.video_id, "", t, "plan does not cover frame");
      }
      masks.push_back(scaled_footprint(*sprite, it->second.scale));
      auto [left, top] = mask_origin(it->second.position, masks.back().width,
                                     masks.back().height);
      PlacedFootprint placed{&masks.back(), left, top};
      (occluder.region == RegionKind::FG ? fg_masks : bg_masks).push_back(placed);
    }
    double fg_fraction = occupied_fraction(fg_masks, fg);
    double bg_fraction = region_area(bg) > 0 ? occupied_fraction(bg_masks, bg) : 0.0;
    out[t] = FrameSeverity{fg_fraction, bg_fraction};
  }
  return out;
}

/// Renders every frame of a plan. Deterministic in (frames, plan): no RNG
/// runs at render time.
inline RenderResult render_plan(const std::vector<Image>& frames, const OcclusionPlan& plan,
                                const OccluderSet& sprites) {
  if (static_cast<long>(frames.size()) != plan.frame_count) {
    throw DimensionMismatchError("frame count " + std::to_string(frames.size()) +
                                 " does not match plan coverage " +
                                 std::to_string(plan.frame_count));
  }
  for (const auto& frame : frames) {
    if (frame.width != plan.frame_width || frame.height != plan.frame_height) {
      throw DimensionMismatchError("frame dimensions do not match the plan");
    }
  }
  for (const auto& occluder : plan.per_occluder) {
    if (sprites.find(occluder.sprite_id) == nullptr) {
      throw MissingSpriteError("plan references unknown sprite '" + occluder.sprite_id + "'");
    }
  }

  RenderResult result;
  result.plan_echo = plan;
  result.frames.reserve(frames.size());
  for (long t = 0; t < plan.frame_count; ++t) {
    std::vector<std::pair<const OccluderSprite*, Placement>> placements;
    for (const auto& occluder : plan.per_occluder) {
      placements.emplace_back(sprites.find(occluder.sprite_id), occluder.frames.at(t));
    }
    result.frames.push_back(
        composite_frame(frames[static_cast<std::size_t>(t)], placements, plan.fg_rect));
  }

  result.realized_severity = measure_plan_severity(plan, sprites);
  for (const auto& [t, stored] : plan.realized_severity) {
    const FrameSeverity& recomputed = result.realized_severity.at(t);
    if (std::abs(stored.fg_fraction - recomputed.fg_fraction) > 0.01 ||
        std::abs(stored.bg_fraction - recomputed.bg_fraction) > 0.01) {
      throw ValidationError(plan.video_id, "", t,
                            "stored severity disagrees with rendered footprints");
    }
  }
  return result;
}

/// Pixel-space analog of token masking: zeroes whole spatio-temporal
/// patches independently with probability p, deterministically in the seed.
inline std::vector<Image> patch_blackout(const std::vector<Image>& frames, long patch_t,
                                         int patch_h, int patch_w, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ProbabilityOutOfRangeError("p must lie in [0,1], got " + std::to_string(p));
  }
  if (frames.empty()) return {};
  long frame_count = static_cast<long>(frames.size());
  int height = frames.front().height;
  int width = frames.front().width;
  for (const auto& frame : frames) {
    if (frame.width != width || frame.height != height) {
      throw DimensionMismatchError("patch_blackout requires uniform frame dimensions");
    }
  }
  if (patch_t <= 0 || patch_h <= 0 || patch_w <= 0 || frame_count % patch_t != 0 ||
      height % patch_h != 0 || width % patch_w != 0) {
    throw IndivisibleDimsError("patch dims must divide (frames, height, width) exactly");
  }

  long nt = frame_count / patch_t;
  int nh = height / patch_h;
  int nw = width / patch_w;
  std::vector<Image> out = frames;
  for (long it = 0; it < nt; ++it) {
    for (int ih = 0; ih < nh; ++ih) {
      for (int iw = 0; iw < nw; ++iw) {
        std::uint64_t linear =
            (static_cast<std::uint64_t>(it) * nh + ih) * static_cast<std::uint64_t>(nw) + iw;
        if (uniform_at(seed, linear) >= p) continue;
        for (long t = it * patch_t; t < (it + 1) * patch_t; ++t) {
          Image& frame = out[static_cast<std::size_t>(t)];
          for (int y = ih * patch_h; y < (ih + 1) * patch_h; ++y) {
            for (int x = iw * patch_w; x < (iw + 1) * patch_w; ++x) {
              for (int c = 0; c < frame.channels; ++c) frame.at(x, y, c) = 0;
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace occbench
