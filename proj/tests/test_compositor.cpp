#include <doctest.h>

#include "occbench/compositor.hpp"
#include "occbench/planner.hpp"
#include "support/fixtures.hpp"

using namespace occbench;

TEST_CASE("blend formula") {
  CHECK(blend_channel(200, 100, 1.0) == 200);
  CHECK(blend_channel(200, 100, 0.0) == 100);
  CHECK(blend_channel(200, 100, 0.5) == 150);
}

TEST_CASE("compositing an empty placement list is the identity") {
  Image frame = fixtures::make_frame(40, 30, 1);
  Image out = composite_frame(frame, {}, Rect{5, 5, 20, 20});
  CHECK(out == frame);
}

TEST_CASE("fully opaque sprite pixels replace frame pixels") {
  Image frame = fixtures::make_frame(60, 40, 2);
  OccluderSprite sprite = import_sprite(fixtures::make_opaque_rect_rgba(16, 16, 9, 8, 7), "s",
                                        OccluderCategory::Indoor, "s");
  Rect fg_rect{0, 0, 60, 40};  // whole frame, so clipping is a no-op here
  Placement placement{"s", RegionKind::FG, Point{30, 20}, 1.0};
  Image out = composite_frame(frame, {{&sprite, placement}}, fg_rect);
  // Centre of the sprite is far from the feathered boundary: alpha 1 there.
  CHECK(out.at(30, 20, 0) == 9);
  CHECK(out.at(30, 20, 1) == 8);
  CHECK(out.at(30, 20, 2) == 7);
  // Far away: untouched.
  CHECK(out.at(5, 5, 0) == frame.at(5, 5, 0));
}

TEST_CASE("region clipping keeps occluders inside their region") {
  Image frame = fixtures::make_frame(64, 48, 3);
  Rect fg_rect{20, 10, 44, 38};
  OccluderSprite sprite = import_sprite(fixtures::make_opaque_rect_rgba(20, 20, 1, 2, 3), "s",
                                        OccluderCategory::Indoor, "s");

  SUBCASE("FG occluder straddling the boundary only changes FG pixels") {
    Placement placement{"s", RegionKind::FG, Point{21, 11}, 1.0};  // leaks over the rect edge
    Image out = composite_frame(frame, {{&sprite, placement}}, fg_rect);
    for (int y = 0; y < frame.height; ++y) {
      for (int x = 0; x < frame.width; ++x) {
        bool changed = out.at(x, y, 0) != frame.at(x, y, 0) ||
                       out.at(x, y, 1) != frame.at(x, y, 1) ||
                       out.at(x, y, 2) != frame.at(x, y, 2);
        if (changed) CHECK(fg_rect.contains(x, y));
      }
    }
  }
  SUBCASE("BG occluder never touches FG pixels") {
    Placement placement{"s", RegionKind::BG, Point{22, 12}, 1.0};  // mostly inside fg_rect
    Image out = composite_frame(frame, {{&sprite, placement}}, fg_rect);
    bool any_changed = false;
    for (int y = 0; y < frame.height; ++y) {
      for (int x = 0; x < frame.width; ++x) {
        bool changed = out.at(x, y, 0) != frame.at(x, y, 0) ||
                       out.at(x, y, 1) != frame.at(x, y, 1) ||
                       out.at(x, y, 2) != frame.at(x, y, 2);
        if (changed) {
          CHECK_FALSE(fg_rect.contains(x, y));
          any_changed = true;
        }
      }
    }
    CHECK(any_changed);  // the part outside fg_rect does render
  }
}

TEST_CASE("render_plan is deterministic and echoes severity") {
  DatasetManifest manifest = fixtures::make_toy_manifest(96, 72, 4);
  const VideoRecord& video = manifest.videos[0];
  OccluderSet occluders = fixtures::make_occluder_set();
  OcclusionPlan plan = plan_static(video, 1, 2, occluders, 9);

  std::vector<Image> frames;
  for (long t = 0; t < video.frame_count; ++t) {
    frames.push_back(fixtures::make_frame(video.width, video.height, static_cast<int>(t)));
  }

  RenderResult a = render_plan(frames, plan, occluders);
  RenderResult b = render_plan(frames, plan, occluders);
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t i = 0; i < a.frames.size(); ++i) CHECK(a.frames[i] == b.frames[i]);

  for (const auto& [t, severity] : plan.realized_severity) {
    CHECK(std::abs(severity.fg_fraction - a.realized_severity.at(t).fg_fraction) <= 0.01);
    CHECK(std::abs(severity.bg_fraction - a.realized_severity.at(t).bg_fraction) <= 0.01);
  }
}

TEST_CASE("render_plan with zero occluders returns the input frames") {
  DatasetManifest manifest = fixtures::make_toy_manifest(48, 36, 3);
  const VideoRecord& video = manifest.videos[0];
  OcclusionPlan plan;
  plan.video_id = video.video_id;
  plan.frame_width = video.width;
  plan.frame_height = video.height;
  plan.frame_count = video.frame_count;
  plan.fg_rect = Rect{10, 10, 20, 20};
  for (long t = 0; t < video.frame_count; ++t) plan.realized_severity[t] = FrameSeverity{0, 0};

  std::vector<Image> frames;
  for (long t = 0; t < video.frame_count; ++t) {
    frames.push_back(fixtures::make_frame(video.width, video.height, static_cast<int>(t)));
  }
  RenderResult result = render_plan(frames, plan, fixtures::make_occluder_set());
  for (std::size_t i = 0; i < frames.size(); ++i) CHECK(result.frames[i] == frames[i]);
}

TEST_CASE("render_plan validates inputs") {
  DatasetManifest manifest = fixtures::make_toy_manifest(48, 36, 3);
  const VideoRecord& video = manifest.videos[0];
  OccluderSet occluders = fixtures::make_occluder_set();
  OcclusionPlan plan = plan_static(video, 1, 1, occluders, 2);

  std::vector<Image> frames;
  for (long t = 0; t < video.frame_count - 1; ++t) {
    frames.push_back(fixtures::make_frame(video.width, video.height, static_cast<int>(t)));
  }
  CHECK_THROWS_AS(render_plan(frames, plan, occluders), DimensionMismatchError);

  frames.push_back(fixtures::make_frame(video.width, video.height, 9));
  OccluderSet missing;
  missing.sprites.push_back(occluders.sprites[0]);
  missing.sprites[0].sprite_id = "someone_else";
  CHECK_THROWS_AS(render_plan(frames, plan, missing), MissingSpriteError);
}

TEST_CASE("patch_blackout") {
  std::vector<Image> clip;
  for (int t = 0; t < 4; ++t) clip.push_back(fixtures::make_frame(32, 16, t));

  SUBCASE("p = 0 leaves the clip unchanged") {
    std::vector<Image> out = patch_blackout(clip, 2, 8, 8, 0.0, 5);
    for (std::size_t i = 0; i < clip.size(); ++i) CHECK(out[i] == clip[i]);
  }
  SUBCASE("p = 1 zeroes every pixel") {
    std::vector<Image> out = patch_blackout(clip, 2, 8, 8, 1.0, 5);
    for (const Image& frame : out) {
      for (std::uint8_t value : frame.pixels) CHECK(value == 0);
    }
  }
  SUBCASE("indivisible patch dims are rejected") {
    CHECK_THROWS_AS(patch_blackout(clip, 3, 8, 8, 0.5, 5), IndivisibleDimsError);
    CHECK_THROWS_AS(patch_blackout(clip, 2, 5, 8, 0.5, 5), IndivisibleDimsError);
  }
  SUBCASE("probability outside [0,1] is rejected") {
    CHECK_THROWS_AS(patch_blackout(clip, 2, 8, 8, 1.5, 5), ProbabilityOutOfRangeError);
  }
  SUBCASE("each patch is either fully zeroed or fully untouched") {
    std::vector<Image> out = patch_blackout(clip, 2, 8, 8, 0.5, 12);
    int zeroed = 0, untouched = 0;
    for (long it = 0; it < 2; ++it) {
      for (int ih = 0; ih < 2; ++ih) {
        for (int iw = 0; iw < 4; ++iw) {
          bool all_zero = true, all_equal = true;
          for (long t = it * 2; t < (it + 1) * 2; ++t) {
            for (int y = ih * 8; y < (ih + 1) * 8; ++y) {
              for (int x = iw * 8; x < (iw + 1) * 8; ++x) {
                for (int c = 0; c < 3; ++c) {
                  if (out[t].at(x, y, c) != 0) all_zero = false;
                  if (out[t].at(x, y, c) != clip[t].at(x, y, c)) all_equal = false;
                }
              }
            }
          }
          CHECK((all_zero || all_equal));
          (all_zero ? zeroed : untouched)++;
        }
      }
    }
    CHECK(zeroed + untouched == 16);
  }
  SUBCASE("selection frequency approaches p across seeds") {
    // Probe pixel per patch: one whose input is nonzero on some channel.
    double p = 0.3;
    long selected = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      std::vector<Image> out = patch_blackout(clip, 2, 8, 8, p, seed);
      for (long it = 0; it < 2; ++it) {
        for (int ih = 0; ih < 2; ++ih) {
          for (int iw = 0; iw < 4; ++iw) {
            long t = it * 2;
            int px = -1, py = -1, pc = -1;
            for (int y = ih * 8; y < (ih + 1) * 8 && px < 0; ++y) {
              for (int x = iw * 8; x < (iw + 1) * 8 && px < 0; ++x) {
                for (int c = 0; c < 3; ++c) {
                  if (clip[t].at(x, y, c) != 0) {
                    px = x;
                    py = y;
                    pc = c;
                    break;
                  }
                }
              }
            }
            REQUIRE(px >= 0);
            ++total;
            if (out[t].at(px, py, pc) == 0) ++selected;
          }
        }
      }
    }
    double frequency = static_cast<double>(selected) / static_cast<double>(total);
    double tolerance = 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
    CHECK(std::abs(frequency - p) <= tolerance);
  }
}
