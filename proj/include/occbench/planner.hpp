#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "occbench/errors.hpp"
#include "occbench/model.hpp"
#include "occbench/motion.hpp"
#include "occbench/regions.hpp"
#include "occbench/rng.hpp"
#include "occbench/sprite.hpp"

namespace occbench {

/// One occluder instance on one frame. Region assignment is fixed for the
/// occluder's lifetime; position is the sprite center in real pixels.
struct Placement {
  std::string sprite_id;
  RegionKind region = RegionKind::FG;
  Point position;
  double scale = 1.0;
};

struct PlannedOccluder {
  std::string sprite_id;
  RegionKind region = RegionKind::FG;
  MotionSpec motion;
  std::map<long, Placement> frames;  // covers every frame of the video
};

struct SeverityTarget {
  int fg_level = 2;
  int bg_level = 3;
};

struct FrameSeverity {
  double fg_fraction = 0.0;
  double bg_fraction = 0.0;

  bool operator==(const FrameSeverity&) const = default;
};

struct OcclusionPlan {
  std::string video_id;
  std::uint64_t seed = 0;
  int frame_width = 0;
  int frame_height = 0;
  long frame_count = 0;
  Rect fg_rect;
  bool fg_multi_tube = false;
  SeverityTarget target;
  MotionKind motion = MotionKind::Static;
  Split split = Split::Train;
  std::vector<PlannedOccluder> per_occluder;
  std::map<long, FrameSeverity> realized_severity;

  RegionSpec region(RegionKind kind) const {
    return RegionSpec{kind, fg_rect, frame_width, frame_height};
  }
};

struct PlannerOptions {
  int max_iterations = 200;
  double min_scale = 0.01;  // scales below this are treated as unfittable
};

/// Top-left pixel of a mask whose center sits at the given point.
inline std::pair<int, int> mask_origin(Point center, int mask_width, int mask_height) {
  return {static_cast<int>(std::llround(center.x - mask_width * 0.5)),
          static_cast<int>(std::llround(center.y - mask_height * 0.5))};
}

namespace detail {

struct RegionState {
  RegionSpec region;
  SeverityBand band;
  long long area = 0;
  // one canvas per frame; static planning uses a single shared frame
  std::vector<std::vector<std::uint8_t>> canvases;
  std::vector<long long> covered;

  RegionState(RegionSpec spec, SeverityBand severity, long frames)
      : region(spec), band(severity), area(region_area(spec)) {
    canvases.assign(static_cast<std::size_t>(frames),
                    std::vector<std::uint8_t>(
                        static_cast<std::size_t>(spec.frame_width) * spec.frame_height, 0));
    covered.assign(static_cast<std::size_t>(frames), 0);
  }

  double mean_fraction() const {
    long long total = 0;
    for (long long c : covered) total += c;
    return static_cast<double>(total) /
           (static_cast<double>(area) * static_cast<double>(covered.size()));
  }
};

/// Counts how many region pixels the placed mask would newly cover.
inline long long count_new_pixels(const std::vector<std::uint8_t>& canvas, const RegionSpec& region,
                                  const FootprintMask& mask, int left, int top) {
  long long fresh = 0;
  int x_lo = std::max(0, left);
  int y_lo = std::max(0, top);
  int x_hi = std::min(region.frame_width, left + mask.width);
  int y_hi = std::min(region.frame_height, top + mask.height);
  for (int y = y_lo; y < y_hi; ++y) {
    for (int x = x_lo; x < x_hi; ++x) {
      if (!mask.at(x - left, y - top)) continue;
      if (!region.contains(x, y)) continue;
      if (canvas[static_cast<std::size_t>(y) * region.frame_width + x] == 0) ++fresh;
    }
  }
  return fresh;
}

/// Tries fit_scale_for_budget over a geometrically shrinking budget so that
/// regions too small for a single occluder are still fillable by several.
inline double fit_scale_with_fallback(const OccluderSprite& sprite, const RegionSpec& region,
                                      double remaining_lo, double remaining_hi,
                                      double area_multiplier, double min_scale) {
  for (int attempt = 0; attempt < 6; ++attempt) {
    double hi = remaining_hi / (1 << attempt);
    double lo = std::min(std::max(remaining_lo, 1e-6), hi * 0.5);
    AreaBudget budget{std::max(1e-9, lo / area_multiplier), std::min(1.0, hi / area_multiplier)};
    if (budget.lo > budget.hi) break;
    try {
      double scale = fit_scale_for_budget(sprite, region, budget);
      if (scale >= min_scale) return scale;
    } catch (const UnfittableError&) {
      // shrink and retry
    }
  }
  throw UnfittableError("no admissible scale for sprite '" + sprite.sprite_id + "'");
}

inline MotionSpec fill_motion_defaults(const MotionSpec& base, const RegionSpec& region, long frames,
                                       Rng& rng, std::uint64_t walk_seed) {
  MotionSpec motion = base;
  Rect rect = region.bounding_rect();
  double region_w = rect.width();
  double region_h = rect.height();
  double clip = static_cast<double>(std::max<long>(frames, 1));
  switch (motion.kind) {
    case MotionKind::Static:
      break;
    case MotionKind::Linear: {
      if (motion.velocity_x == 0.0 && motion.velocity_y == 0.0) {
        double angle = rng.uniform_in(0.0, 2.0 * std::numbers::pi);
        double magnitude = rng.uniform_in(0.5, 1.5);
        motion.velocity_x = magnitude * region_w / clip * std::cos(angle);
        motion.velocity_y = magnitude * region_h / clip * std::sin(angle);
      }
      break;
    }
    case MotionKind::Circle: {
      if (motion.radius == 0.0) motion.radius = 0.25 * std::min(region_w, region_h);
      if (motion.angular_speed == 0.0) motion.angular_speed = 2.0 * std::numbers::pi / clip;
      motion.center = Point{rng.uniform_in(rect.x_min, rect.x_max),
                            rng.uniform_in(rect.y_min, rect.y_max)};
      motion.theta0 = rng.uniform_in(0.0, 2.0 * std::numbers::pi);
      break;
    }
    case MotionKind::Sinusoid: {
      if (motion.amplitude == 0.0) motion.amplitude = region_h / 6.0;
      if (motion.period == 0.0) motion.period = clip;
      if (motion.drift_velocity == 0.0) {
        motion.drift_velocity = (rng.uniform() < 0.5 ? -1.0 : 1.0) * region_w / clip;
      }
      break;
    }
    case MotionKind::ZoomIn:
    case MotionKind::ZoomOut: {
      if (motion.scale_rate == 0.0) {
        motion.scale_rate = std::log(1.5) / clip * rng.uniform_in(0.5, 1.5);
      }
      break;
    }
    case MotionKind::Random: {
      if (motion.step_sigma == 0.0) motion.step_sigma = std::min(region_w, region_h) / (4.0 * clip);
      if (motion.max_speed == 0.0) motion.max_speed = std::min(region_w, region_h) / 8.0;
      motion.walk_seed = walk_seed;
      break;
    }
  }
  return motion;
}

/// Mean of the squared zoom multiplier over the clip; scales the algebraic
/// footprint estimate used when fitting zoom occluders.
inline double mean_area_multiplier(const MotionSpec& motion, long frames) {
  if (motion.kind != MotionKind::ZoomIn && motion.kind != MotionKind::ZoomOut) return 1.0;
  double sum = 0.0;
  for (long t = 0; t < frames; ++t) {
    double m = trajectory_position(motion, Point{}, static_cast<double>(t)).scale_multiplier;
    sum += m * m;
  }
  return sum / static_cast<double>(frames);
}

/// Adds occluders to one region until the realized fraction (temporal mean)
/// enters the severity band. At least one occluder is always placed, so a
/// level-1 request never degenerates to an empty plan.
inline void satisfy_region(OcclusionPlan& plan, RegionState& state, const MotionSpec& base_motion,
                           const OccluderSet& occluders, std::uint64_t region_seed,
                           const PlannerOptions& options, const VideoRecord& video) {
  const long frames = plan.frame_count;
  Rect wrap_rect = state.region.bounding_rect();
  int placed_in_region = 0;

  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    double current = state.mean_fraction();
    if (placed_in_region > 0 && current >= state.band.lo) break;

    Rng rng(derive_seed(region_seed, static_cast<std::uint64_t>(iteration)));
    const OccluderSprite& sprite = occluders.sprites[rng.uniform_index(occluders.sprites.size())];

    std::uint64_t ordinal = plan.per_occluder.size();
    MotionSpec motion = fill_motion_defaults(base_motion, state.region, frames, rng,
                                             derive_seed(plan.seed, ordinal));
    double area_multiplier = mean_area_multiplier(motion, frames);

    double base_scale;
    try {
      base_scale = fit_scale_with_fallback(sprite, state.region, state.band.lo - current,
                                           state.band.hi - current, area_multiplier,
                                           options.min_scale);
    } catch (const UnfittableError&) {
      continue;
    }

    Point start{rng.uniform_in(wrap_rect.x_min, wrap_rect.x_max),
                rng.uniform_in(wrap_rect.y_min, wrap_rect.y_max)};

    // Simulate the occluder over the clip before committing it.
    PlannedOccluder candidate;
    candidate.sprite_id = sprite.sprite_id;
    candidate.region = state.region.kind;
    candidate.motion = motion;

    FootprintMask shared_mask;
    bool zooming = motion.kind == MotionKind::ZoomIn || motion.kind == MotionKind::ZoomOut;
    if (!zooming) shared_mask = scaled_footprint(sprite, base_scale);

    std::vector<FootprintMask> frame_masks;
    std::vector<long long> deltas(static_cast<std::size_t>(frames), 0);
    long long total_delta = 0;
    for (long t = 0; t < frames; ++t) {
      TrajectorySample sample = trajectory_position(motion, start, static_cast<double>(t));
      Point wrapped = wrap_position(sample.position, wrap_rect);
      double scale_t = base_scale * sample.scale_multiplier;
      const FootprintMask* mask = &shared_mask;
      if (zooming) {
        frame_masks.push_back(scaled_footprint(sprite, scale_t));
        mask = &frame_masks.back();
      }
      auto [left, top] = mask_origin(wrapped, mask->width, mask->height);
      deltas[static_cast<std::size_t>(t)] =
          count_new_pixels(state.canvases[static_cast<std::size_t>(t)], state.region, *mask, left,
                           top);
      total_delta += deltas[static_cast<std::size_t>(t)];
      candidate.frames[t] = Placement{sprite.sprite_id, state.region.kind, wrapped, scale_t};
    }

    if (total_delta == 0) continue;
    double new_mean = current + static_cast<double>(total_delta) /
                                    (static_cast<double>(state.area) * static_cast<double>(frames));
    if (new_mean >= state.band.hi) continue;  // overshoot; resample

    // Commit: paint every frame.
    std::size_t zoom_index = 0;
    for (long t = 0; t < frames; ++t) {
      const Placement& placement = candidate.frames.at(t);
      const FootprintMask* mask = zooming ? &frame_masks[zoom_index++] : &shared_mask;
      auto [left, top] = mask_origin(placement.position, mask->width, mask->height);
      PlacedFootprint placed{mask, left, top};
      state.covered[static_cast<std::size_t>(t)] +=
          paint_footprint(state.canvases[static_cast<std::size_t>(t)], state.region, placed);
    }
    plan.per_occluder.push_back(std::move(candidate));
    ++placed_in_region;
  }

  double final_fraction = state.mean_fraction();
  if (placed_in_region == 0 || final_fraction < state.band.lo ||
      final_fraction >= state.band.hi) {
    throw SeverityUnreachableError(
        "could not realize severity level " + std::to_string(state.band.level) + " for the " +
        (state.region.kind == RegionKind::FG ? "FG" : "BG") + " region of video '" +
        video.video_id + "'");
  }
}

inline OcclusionPlan start_plan(const VideoRecord& video, std::uint64_t seed) {
  if (video.tubes.empty()) throw EmptyTubeError("video '" + video.video_id + "' has no GT tubes");
  OcclusionPlan plan;
  plan.video_id = video.video_id;
  plan.seed = seed;
  plan.frame_width = video.width;
  plan.frame_height = video.height;
  plan.frame_count = video.frame_count;
  plan.fg_rect = intersect(actor_region(video.tubes), Rect{0, 0, video.width, video.height});
  plan.fg_multi_tube = video.tubes.size() > 1;
  return plan;
}

inline void record_realized_severity(OcclusionPlan& plan, const RegionState& fg,
                                     const RegionState& bg) {
  for (long t = 0; t < plan.frame_count; ++t) {
    double fg_fraction =
        static_cast<double>(fg.covered[static_cast<std::size_t>(t)]) / static_cast<double>(fg.area);
    double bg_fraction = bg.area > 0 ? static_cast<double>(bg.covered[static_cast<std::size_t>(t)]) /
                                           static_cast<double>(bg.area)
                                     : 0.0;
    plan.realized_severity[t] = FrameSeverity{fg_fraction, bg_fraction};
  }
}

}  // namespace detail

/// Plans occluders at fixed positions so that each region's footprint
/// fraction sits in the requested severity band on every frame.
inline OcclusionPlan plan_static(const VideoRecord& video, int fg_level, int bg_level,
                                 const OccluderSet& occluders, std::uint64_t seed,
                                 const PlannerOptions& options = {}) {
  if (occluders.sprites.empty()) throw EmptySpriteError("occluder set is empty");
  OcclusionPlan plan = detail::start_plan(video, seed);
  plan.target = SeverityTarget{fg_level, bg_level};
  plan.motion = MotionKind::Static;

  MotionSpec still;
  still.kind = MotionKind::Static;

  detail::RegionState fg(plan.region(RegionKind::FG), severity_band(fg_level), plan.frame_count);
  detail::RegionState bg(plan.region(RegionKind::BG), severity_band(bg_level), plan.frame_count);
  detail::satisfy_region(plan, fg, still, occluders, derive_seed(seed, "fg"), options, video);
  detail::satisfy_region(plan, bg, still, occluders, derive_seed(seed, "bg"), options, video);
  detail::record_realized_severity(plan, fg, bg);
  return plan;
}

/// Plans moving occluders with the requested motion in both regions; the
/// per-region temporal-mean footprint fraction lands in the target band
/// (FG2/BG3 unless overridden).
inline OcclusionPlan plan_dynamic(const VideoRecord& video, const MotionSpec& motion,
                                  const OccluderSet& occluders, std::uint64_t seed,
                                  SeverityTarget target = SeverityTarget{2, 3},
                                  const PlannerOptions& options = {}) {
  if (motion.kind == MotionKind::Static) {
    throw MotionSplitViolationError("plan_dynamic requires a moving occluder kind");
  }
  check_motion_split(motion.kind, motion.split);
  if (occluders.sprites.empty()) throw EmptySpriteError("occluder set is empty");

  OcclusionPlan plan = detail::start_plan(video, seed);
  plan.target = target;
  plan.motion = motion.kind;
  plan.split = motion.split;

  detail::RegionState fg(plan.region(RegionKind::FG), severity_band(target.fg_level),
                         plan.frame_count);
  detail::RegionState bg(plan.region(RegionKind::BG), severity_band(target.bg_level),
                         plan.frame_count);
  detail::satisfy_region(plan, fg, motion, occluders, derive_seed(seed, "fg"), options, video);
  detail::satisfy_region(plan, bg, motion, occluders, derive_seed(seed, "bg"), options, video);
  detail::record_realized_severity(plan, fg, bg);
  return plan;
}

// ---------------------------------------------------------------------------
// Plan sidecar (JSON). The schema is normative: plans are replayable
// bit-exactly by the compositor from this document alone.

inline nlohmann::json motion_to_json(const MotionSpec& motion) {
  nlohmann::json params = nlohmann::json::object();
  switch (motion.kind) {
    case MotionKind::Static:
      break;
    case MotionKind::Linear:
      params["velocity"] = {motion.velocity_x, motion.velocity_y};
      break;
    case MotionKind::Circle:
      params["center"] = {motion.center.x, motion.center.y};
      params["radius"] = motion.radius;
      params["angular_speed"] = motion.angular_speed;
      params["theta0"] = motion.theta0;
      break;
    case MotionKind::Sinusoid:
      params["drift_velocity"] = motion.drift_velocity;
      params["amplitude"] = motion.amplitude;
      params["period"] = motion.period;
      break;
    case MotionKind::ZoomIn:
    case MotionKind::ZoomOut:
      params["scale_rate"] = motion.scale_rate;
      break;
    case MotionKind::Random:
      params["step_sigma"] = motion.step_sigma;
      params["max_speed"] = motion.max_speed;
      params["walk_seed"] = motion.walk_seed;
      break;
  }
  return {{"kind", motion_kind_name(motion.kind)},
          {"split", split_name(motion.split)},
          {"params", params}};
}

inline MotionSpec motion_from_json(const nlohmann::json& node) {
  MotionSpec motion;
  motion.kind = parse_motion_kind(node.at("kind").get<std::string>());
  motion.split = parse_split(node.at("split").get<std::string>());
  const auto& params = node.at("params");
  switch (motion.kind) {
    case MotionKind::Static:
      break;
    case MotionKind::Linear:
      motion.velocity_x = params.at("velocity")[0].get<double>();
      motion.velocity_y = params.at("velocity")[1].get<double>();
      break;
    case MotionKind::Circle:
      motion.center = Point{params.at("center")[0].get<double>(),
                            params.at("center")[1].get<double>()};
      motion.radius = params.at("radius").get<double>();
      motion.angular_speed = params.at("angular_speed").get<double>();
      motion.theta0 = params.at("theta0").get<double>();
      break;
    case MotionKind::Sinusoid:
      motion.drift_velocity = params.at("drift_velocity").get<double>();
      motion.amplitude = params.at("amplitude").get<double>();
      motion.period = params.at("period").get<double>();
      break;
    case MotionKind::ZoomIn:
    case MotionKind::ZoomOut:
      motion.scale_rate = params.at("scale_rate").get<double>();
      break;
    case MotionKind::Random:
      motion.step_sigma = params.at("step_sigma").get<double>();
      motion.max_speed = params.at("max_speed").get<double>();
      motion.walk_seed = params.at("walk_seed").get<std::uint64_t>();
      break;
  }
  return motion;
}

inline nlohmann::json plan_to_json(const OcclusionPlan& plan) {
  nlohmann::json occluders = nlohmann::json::array();
  for (const auto& occluder : plan.per_occluder) {
    nlohmann::json frames = nlohmann::json::object();
    for (const auto& [t, placement] : occluder.frames) {
      frames[std::to_string(t)] = {{"position", {placement.position.x, placement.position.y}},
                                   {"scale", placement.scale}};
    }
    occluders.push_back({{"sprite_id", occluder.sprite_id},
                         {"region", occluder.region == RegionKind::FG ? "FG" : "BG"},
                         {"motion", motion_to_json(occluder.motion)},
                         {"frames", frames}});
  }
  nlohmann::json severity = nlohmann::json::object();
  for (const auto& [t, s] : plan.realized_severity) {
    severity[std::to_string(t)] = {s.fg_fraction, s.bg_fraction};
  }
  return {{"video_id", plan.video_id},
          {"seed", plan.seed},
          {"frame_width", plan.frame_width},
          {"frame_height", plan.frame_height},
          {"frame_count", plan.frame_count},
          {"fg_rect", {plan.fg_rect.x_min, plan.fg_rect.y_min, plan.fg_rect.x_max,
                       plan.fg_rect.y_max}},
          {"fg_multi_tube", plan.fg_multi_tube},
          {"target", {{"fg_level", plan.target.fg_level},
                      {"bg_level", plan.target.bg_level},
                      {"motion", motion_kind_name(plan.motion)},
                      {"split", split_name(plan.split)}}},
          {"per_occluder", occluders},
          {"realized_severity", severity}};
}

inline OcclusionPlan plan_from_json(const nlohmann::json& root) {
  OcclusionPlan plan;
  plan.video_id = root.at("video_id").get<std::string>();
  plan.seed = root.at("seed").get<std::uint64_t>();
  plan.frame_width = root.at("frame_width").get<int>();
  plan.frame_height = root.at("frame_height").get<int>();
  plan.frame_count = root.at("frame_count").get<long>();
  const auto& rect = root.at("fg_rect");
  plan.fg_rect = Rect{rect[0].get<int>(), rect[1].get<int>(), rect[2].get<int>(),
                      rect[3].get<int>()};
  plan.fg_multi_tube = root.at("fg_multi_tube").get<bool>();
  const auto& target = root.at("target");
  plan.target = SeverityTarget{target.at("fg_level").get<int>(), target.at("bg_level").get<int>()};
  plan.motion = parse_motion_kind(target.at("motion").get<std::string>());
  plan.split = parse_split(target.at("split").get<std::string>());
  for (const auto& node : root.at("per_occluder")) {
    PlannedOccluder occluder;
    occluder.sprite_id = node.at("sprite_id").get<std::string>();
    occluder.region = node.at("region").get<std::string>() == "FG" ? RegionKind::FG : RegionKind::BG;
    occluder.motion = motion_from_json(node.at("motion"));
    for (const auto& item : node.at("frames").items()) {
      long t = std::stol(item.key());
      const auto& value = item.value();
      occluder.frames[t] = Placement{
          occluder.sprite_id, occluder.region,
          Point{value.at("position")[0].get<double>(), value.at("position")[1].get<double>()},
          value.at("scale").get<double>()};
    }
    plan.per_occluder.push_back(std::move(occluder));
  }
  for (const auto& item : root.at("realized_severity").items()) {
    plan.realized_severity[std::stol(item.key())] =
        FrameSeverity{item.value()[0].get<double>(), item.value()[1].get<double>()};
  }
  return plan;
}

inline std::string serialize_plan(const OcclusionPlan& plan) { return plan_to_json(plan).dump(2); }

}  // namespace occbench
