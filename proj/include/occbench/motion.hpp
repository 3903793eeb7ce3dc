#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "occbench/errors.hpp"
#include "occbench/geometry.hpp"
#include "occbench/rng.hpp"

namespace occbench {

enum class MotionKind { Static, Linear, Circle, Sinusoid, ZoomIn, ZoomOut, Random };
enum class Split { Train, Test };

inline MotionKind parse_motion_kind(const std::string& text) {
  if (text == "static") return MotionKind::Static;
  if (text == "linear") return MotionKind::Linear;
  if (text == "circle") return MotionKind::Circle;
  if (text == "sinusoid") return MotionKind::Sinusoid;
  if (text == "zoom-in" || text == "zoom_in") return MotionKind::ZoomIn;
  if (text == "zoom-out" || text == "zoom_out") return MotionKind::ZoomOut;
  if (text == "random") return MotionKind::Random;
  throw SchemaError("unknown motion kind '" + text + "'");
}

inline const char* motion_kind_name(MotionKind kind) {
  switch (kind) {
    case MotionKind::Static: return "static";
    case MotionKind::Linear: return "linear";
    case MotionKind::Circle: return "circle";
    case MotionKind::Sinusoid: return "sinusoid";
    case MotionKind::ZoomIn: return "zoom_in";
    case MotionKind::ZoomOut: return "zoom_out";
    case MotionKind::Random: return "random";
  }
  return "static";
}

inline Split parse_split(const std::string& text) {
  if (text == "train") return Split::Train;
  if (text == "test") return Split::Test;
  throw SchemaError("split must be 'train' or 'test', got '" + text + "'");
}

inline const char* split_name(Split split) { return split == Split::Train ? "train" : "test"; }

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Occluder motion description. The test split carries only circle and
/// sinusoid motions; the train split only linear, zoom and random ones.
/// Static placement belongs to either split.
struct MotionSpec {
  MotionKind kind = MotionKind::Static;
  Split split = Split::Train;

  // linear
  double velocity_x = 0.0;  // px/frame
  double velocity_y = 0.0;
  // circle
  Point center;
  double radius = 0.0;         // px
  double angular_speed = 0.0;  // rad/frame
  double theta0 = 0.0;
  // sinusoid (drift along x, oscillation in y)
  double drift_velocity = 0.0;  // px/frame
  double amplitude = 0.0;       // px
  double period = 0.0;          // frames
  // zoom
  double scale_rate = 0.0;  // per frame
  // random walk
  double step_sigma = 0.0;  // px/frame
  double max_speed = 0.0;   // px/frame
  std::uint64_t walk_seed = 0;
};

inline bool motion_allowed_for_split(MotionKind kind, Split split) {
  if (kind == MotionKind::Static) return true;
  bool test_motion = kind == MotionKind::Circle || kind == MotionKind::Sinusoid;
  return split == Split::Test ? test_motion : !test_motion;
}

inline void check_motion_split(MotionKind kind, Split split) {
  if (!motion_allowed_for_split(kind, split)) {
    throw MotionSplitViolationError(std::string("motion '") + motion_kind_name(kind) +
                                    "' is not permitted in the " + split_name(split) + " split");
  }
}

struct TrajectorySample {
  Point position;
  double scale_multiplier = 1.0;
};

/// Unwrapped position and scale multiplier at frame t. The random walk
/// replays its seeded step sequence, so the result is a pure function of
/// (motion, start, t).
inline TrajectorySample trajectory_position(const MotionSpec& motion, Point start, double t) {
  TrajectorySample sample;
  sample.position = start;
  switch (motion.kind) {
    case MotionKind::Static:
      break;
    case MotionKind::Linear:
      sample.position = Point{start.x + motion.velocity_x * t, start.y + motion.velocity_y * t};
      break;
    case MotionKind::Circle: {
      double angle = motion.theta0 + motion.angular_speed * t;
      sample.position = Point{motion.center.x + motion.radius * std::cos(angle),
                              motion.center.y + motion.radius * std::sin(angle)};
      break;
    }
    case MotionKind::Sinusoid: {
      double phase = motion.period > 0.0 ? 2.0 * std::numbers::pi * t / motion.period : 0.0;
      sample.position =
          Point{start.x + motion.drift_velocity * t, start.y + motion.amplitude * std::sin(phase)};
      break;
    }
    case MotionKind::ZoomIn:
      sample.scale_multiplier = std::exp(motion.scale_rate * t);
      break;
    case MotionKind::ZoomOut:
      sample.scale_multiplier = std::exp(-motion.scale_rate * t);
      break;
    case MotionKind::Random: {
      Rng rng(motion.walk_seed);
      Point position = start;
      double vx = 0.0, vy = 0.0;
      long steps = static_cast<long>(t);
      for (long i = 0; i < steps; ++i) {
        vx += rng.gaussian() * motion.step_sigma;
        vy += rng.gaussian() * motion.step_sigma;
        double speed = std::hypot(vx, vy);
        if (motion.max_speed > 0.0 && speed > motion.max_speed) {
          vx *= motion.max_speed / speed;
          vy *= motion.max_speed / speed;
        }
        position.x += vx;
        position.y += vy;
      }
      sample.position = position;
      break;
    }
  }
  return sample;
}

/// Toroidal wrap of a sprite-center coordinate into the rect (half-open).
inline double wrap_coordinate(double value, double lo, double hi) {
  double range = hi - lo;
  double wrapped = std::fmod(value - lo, range);
  if (wrapped < 0.0) wrapped += range;
  return lo + wrapped;
}

inline Point wrap_position(Point position, const Rect& region_rect) {
  return Point{wrap_coordinate(position.x, region_rect.x_min, region_rect.x_max),
               wrap_coordinate(position.y, region_rect.y_min, region_rect.y_max)};
}

}  // namespace occbench
