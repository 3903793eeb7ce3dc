#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "occbench/image.hpp"
#include "occbench/manifest_io.hpp"
#include "occbench/model.hpp"
#include "occbench/png_io.hpp"
#include "occbench/sprite.hpp"
#include "occbench/sprite_library.hpp"

namespace fixtures {

/// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("occbench-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

/// Deterministic colourful frame so compositing diffs are visible.
inline occbench::Image make_frame(int width, int height, int tint) {
  occbench::Image frame(width, height, 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      frame.at(x, y, 0) = static_cast<std::uint8_t>((x * 7 + tint * 31) % 256);
      frame.at(x, y, 1) = static_cast<std::uint8_t>((y * 5 + tint * 17) % 256);
      frame.at(x, y, 2) = static_cast<std::uint8_t>((x + y + tint) % 256);
    }
  }
  return frame;
}

inline occbench::Image make_opaque_rect_rgba(int width, int height, std::uint8_t r,
                                             std::uint8_t g, std::uint8_t b) {
  occbench::Image image(width, height, 4);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      image.at(x, y, 0) = r;
      image.at(x, y, 1) = g;
      image.at(x, y, 2) = b;
      image.at(x, y, 3) = 255;
    }
  }
  return image;
}

inline occbench::Image make_disk_rgba(int diameter, std::uint8_t r, std::uint8_t g,
                                      std::uint8_t b) {
  occbench::Image image(diameter, diameter, 4);
  double radius = diameter / 2.0;
  for (int y = 0; y < diameter; ++y) {
    for (int x = 0; x < diameter; ++x) {
      double dx = x + 0.5 - radius;
      double dy = y + 0.5 - radius;
      bool inside = dx * dx + dy * dy <= radius * radius;
      image.at(x, y, 0) = r;
      image.at(x, y, 1) = g;
      image.at(x, y, 2) = b;
      image.at(x, y, 3) = inside ? 255 : 0;
    }
  }
  return image;
}

inline occbench::OccluderSet make_occluder_set() {
  occbench::OccluderSet set;
  set.sprites.push_back(occbench::import_sprite(make_disk_rgba(64, 200, 60, 60), "disk",
                                                occbench::OccluderCategory::Indoor, "disk"));
  set.sprites.push_back(occbench::import_sprite(make_opaque_rect_rgba(48, 48, 60, 200, 60),
                                                "square", occbench::OccluderCategory::Indoor,
                                                "square"));
  set.sprites.push_back(occbench::import_sprite(make_opaque_rect_rgba(80, 30, 60, 60, 200),
                                                "bar", occbench::OccluderCategory::Outdoor,
                                                "bar"));
  set.sprites.push_back(occbench::import_sprite(make_disk_rgba(32, 220, 220, 90), "pebble",
                                                occbench::OccluderCategory::Outdoor, "pebble"));
  return set;
}

inline occbench::ActionTube make_tube(const std::string& tube_id, const std::string& class_label,
                                      long first_frame, long last_frame,
                                      occbench::BoundingBox box, double drift = 0.0) {
  occbench::ActionTube tube;
  tube.tube_id = tube_id;
  tube.class_label = class_label;
  for (long t = first_frame; t <= last_frame; ++t) {
    occbench::BoundingBox moved = box;
    double offset = drift * static_cast<double>(t - first_frame);
    moved.x_min += offset;
    moved.x_max += offset;
    tube.frames[t] = moved;
  }
  return tube;
}

inline occbench::VideoRecord make_video(const std::string& video_id, int width, int height,
                                        long frame_count, const std::string& class_label) {
  occbench::VideoRecord video;
  video.video_id = video_id;
  video.width = width;
  video.height = height;
  video.frame_count = frame_count;
  video.frame_source = video_id + "/frame_%04d.png";
  double box_w = width * 0.3;
  double box_h = height * 0.4;
  occbench::BoundingBox box{width * 0.25, height * 0.2, width * 0.25 + box_w,
                            height * 0.2 + box_h};
  video.tubes.push_back(make_tube(video_id + "_t0", class_label, 0, frame_count - 1, box, 1.0));
  return video;
}

inline occbench::DatasetManifest make_toy_manifest(int width = 64, int height = 48,
                                                   long frame_count = 6) {
  occbench::DatasetManifest manifest;
  manifest.dataset_id = "toy";
  manifest.class_list = {"jump", "run"};
  manifest.videos.push_back(make_video("vid_a", width, height, frame_count, "jump"));
  manifest.videos.push_back(make_video("vid_b", width, height, frame_count, "run"));
  return manifest;
}

/// Writes manifest.json plus per-video frame PNGs under dir; returns the
/// manifest path.
inline std::filesystem::path write_toy_dataset(const std::filesystem::path& dir,
                                               const occbench::DatasetManifest& manifest) {
  for (const auto& video : manifest.videos) {
    std::filesystem::create_directories(dir / video.video_id);
    for (long t = 0; t < video.frame_count; ++t) {
      char name[64];
      std::snprintf(name, sizeof(name), "frame_%04ld.png", t);
      occbench::write_png(dir / video.video_id / name,
                          make_frame(video.width, video.height, static_cast<int>(t)));
    }
  }
  std::filesystem::path manifest_path = dir / "manifest.json";
  occbench::write_text_file(manifest_path, occbench::serialize_manifest(manifest));
  return manifest_path;
}

/// Writes a sprite-library directory (index + trimmed sprites).
inline std::filesystem::path write_occluder_library(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  occbench::OccluderSet set = make_occluder_set();
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& sprite : set.sprites) {
    occbench::save_sprite(dir, sprite);
    entries.push_back(occbench::sprite_meta_to_json(sprite));
  }
  occbench::write_text_file(dir / "index.json", nlohmann::json{{"sprites", entries}}.dump(2));
  return dir;
}

/// Prediction document with every GT tube echoed at the given score.
inline std::string predictions_from_gt(const occbench::DatasetManifest& manifest, double score) {
  occbench::DatasetManifest copy = manifest;
  for (auto& video : copy.videos) {
    for (auto& tube : video.tubes) tube.score = score;
  }
  return occbench::serialize_manifest(copy);
}

}  // namespace fixtures
