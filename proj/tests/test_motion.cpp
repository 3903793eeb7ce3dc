#include <doctest.h>

#include <cmath>
#include <numbers>

#include "occbench/motion.hpp"
#include "occbench/rng.hpp"

using namespace occbench;

TEST_CASE("trajectory_position follows the analytic paths") {
  SUBCASE("circle at t = 0") {
    MotionSpec motion;
    motion.kind = MotionKind::Circle;
    motion.center = Point{50, 50};
    motion.radius = 10;
    motion.angular_speed = 2.0 * std::numbers::pi / 20.0;
    motion.theta0 = 0.0;
    TrajectorySample sample = trajectory_position(motion, Point{}, 0.0);
    CHECK(sample.position.x == doctest::Approx(60.0));
    CHECK(sample.position.y == doctest::Approx(50.0));

    // Quarter period: angle pi/2.
    sample = trajectory_position(motion, Point{}, 5.0);
    CHECK(sample.position.x == doctest::Approx(50.0));
    CHECK(sample.position.y == doctest::Approx(60.0));
  }
  SUBCASE("linear") {
    MotionSpec motion;
    motion.kind = MotionKind::Linear;
    motion.velocity_x = 2.0;
    motion.velocity_y = 1.0;
    TrajectorySample sample = trajectory_position(motion, Point{0, 0}, 5.0);
    CHECK(sample.position.x == doctest::Approx(10.0));
    CHECK(sample.position.y == doctest::Approx(5.0));
    CHECK(sample.scale_multiplier == 1.0);
  }
  SUBCASE("sinusoid drifts in x and oscillates in y") {
    MotionSpec motion;
    motion.kind = MotionKind::Sinusoid;
    motion.drift_velocity = 3.0;
    motion.amplitude = 8.0;
    motion.period = 12.0;
    TrajectorySample sample = trajectory_position(motion, Point{1, 2}, 3.0);  // quarter period
    CHECK(sample.position.x == doctest::Approx(10.0));
    CHECK(sample.position.y == doctest::Approx(10.0));
  }
  SUBCASE("zoom keeps position and scales exponentially") {
    MotionSpec motion;
    motion.kind = MotionKind::ZoomIn;
    motion.scale_rate = 0.1;
    TrajectorySample sample = trajectory_position(motion, Point{7, 9}, 4.0);
    CHECK(sample.position.x == 7.0);
    CHECK(sample.position.y == 9.0);
    CHECK(sample.scale_multiplier == doctest::Approx(std::exp(0.4)));

    motion.kind = MotionKind::ZoomOut;
    sample = trajectory_position(motion, Point{7, 9}, 4.0);
    CHECK(sample.scale_multiplier == doctest::Approx(std::exp(-0.4)));
  }
  SUBCASE("random walk is reproducible and speed-clamped") {
    MotionSpec motion;
    motion.kind = MotionKind::Random;
    motion.step_sigma = 2.0;
    motion.max_speed = 3.0;
    motion.walk_seed = 99;
    TrajectorySample first = trajectory_position(motion, Point{0, 0}, 10.0);
    TrajectorySample second = trajectory_position(motion, Point{0, 0}, 10.0);
    CHECK(first.position.x == second.position.x);
    CHECK(first.position.y == second.position.y);
    // Replaying prefix: per-step displacement never exceeds max_speed.
    Point previous{0, 0};
    for (long t = 1; t <= 10; ++t) {
      Point current = trajectory_position(motion, Point{0, 0}, static_cast<double>(t)).position;
      double step = std::hypot(current.x - previous.x, current.y - previous.y);
      CHECK(step <= 3.0 + 1e-9);
      previous = current;
    }
  }
}

TEST_CASE("circle positions repeat after one period") {
  for (int trial = 0; trial < 10000; ++trial) {
    Rng rng(derive_seed(7, static_cast<std::uint64_t>(trial)));
    MotionSpec motion;
    motion.kind = MotionKind::Circle;
    motion.center = Point{rng.uniform_in(-100, 100), rng.uniform_in(-100, 100)};
    motion.radius = rng.uniform_in(0.1, 50.0);
    motion.angular_speed = rng.uniform_in(0.01, 1.0);
    motion.theta0 = rng.uniform_in(0.0, 2.0 * std::numbers::pi);
    double t = rng.uniform_in(0.0, 200.0);
    double period = 2.0 * std::numbers::pi / motion.angular_speed;
    Point a = trajectory_position(motion, Point{}, t).position;
    Point b = trajectory_position(motion, Point{}, t + period).position;
    CHECK(std::abs(a.x - b.x) < 1e-6);
    CHECK(std::abs(a.y - b.y) < 1e-6);
  }
}

TEST_CASE("wrap_position folds coordinates into the rect") {
  Rect rect{0, 0, 100, 80};
  CHECK(wrap_position(Point{105, 40}, rect).x == doctest::Approx(5.0));
  CHECK(wrap_position(Point{-10, 40}, rect).x == doctest::Approx(90.0));
  Point inside{42.5, 17.25};
  Point wrapped = wrap_position(inside, rect);
  CHECK(wrapped.x == inside.x);
  CHECK(wrapped.y == inside.y);

  // Closure and idempotence over random inputs.
  for (int trial = 0; trial < 2000; ++trial) {
    Rng rng(derive_seed(13, static_cast<std::uint64_t>(trial)));
    Rect r{static_cast<int>(rng.uniform_index(50)), static_cast<int>(rng.uniform_index(50)), 0, 0};
    r.x_max = r.x_min + 1 + static_cast<int>(rng.uniform_index(200));
    r.y_max = r.y_min + 1 + static_cast<int>(rng.uniform_index(200));
    Point p{rng.uniform_in(-500.0, 500.0), rng.uniform_in(-500.0, 500.0)};
    Point w = wrap_position(p, r);
    CHECK(w.x >= r.x_min);
    CHECK(w.x < r.x_max);
    CHECK(w.y >= r.y_min);
    CHECK(w.y < r.y_max);
    Point w2 = wrap_position(w, r);
    CHECK(w2.x == w.x);
    CHECK(w2.y == w.y);
  }
}

TEST_CASE("motion kinds are split-exclusive") {
  CHECK(motion_allowed_for_split(MotionKind::Circle, Split::Test));
  CHECK(motion_allowed_for_split(MotionKind::Sinusoid, Split::Test));
  CHECK_FALSE(motion_allowed_for_split(MotionKind::Circle, Split::Train));
  CHECK_FALSE(motion_allowed_for_split(MotionKind::Sinusoid, Split::Train));
  CHECK(motion_allowed_for_split(MotionKind::Linear, Split::Train));
  CHECK(motion_allowed_for_split(MotionKind::ZoomIn, Split::Train));
  CHECK(motion_allowed_for_split(MotionKind::ZoomOut, Split::Train));
  CHECK(motion_allowed_for_split(MotionKind::Random, Split::Train));
  CHECK_FALSE(motion_allowed_for_split(MotionKind::Linear, Split::Test));
  CHECK_FALSE(motion_allowed_for_split(MotionKind::ZoomIn, Split::Test));
  CHECK_FALSE(motion_allowed_for_split(MotionKind::ZoomOut, Split::Test));
  CHECK_FALSE(motion_allowed_for_split(MotionKind::Random, Split::Test));
  CHECK(motion_allowed_for_split(MotionKind::Static, Split::Train));
  CHECK(motion_allowed_for_split(MotionKind::Static, Split::Test));
  CHECK_THROWS_AS(check_motion_split(MotionKind::Circle, Split::Train),
                  MotionSplitViolationError);
}
