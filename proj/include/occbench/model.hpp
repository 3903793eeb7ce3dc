#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "occbench/errors.hpp"
#include "occbench/geometry.hpp"

namespace occbench {

/// One actor trajectory: per-frame boxes plus a single action class.
/// Ground-truth tubes carry no score; prediction tubes always do.
struct ActionTube {
  std::string tube_id;
  std::string class_label;
  std::map<long, BoundingBox> frames;  // frame_index -> box, sorted, gaps allowed
  std::optional<double> score;

  bool is_prediction() const { return score.has_value(); }

  bool operator==(const ActionTube&) const = default;
};

struct VideoRecord {
  std::string video_id;
  int width = 0;
  int height = 0;
  long frame_count = 0;
  std::string frame_source;  // printf-style path template with one %d conversion
  std::vector<ActionTube> tubes;

  bool operator==(const VideoRecord&) const = default;
};

struct DatasetManifest {
  std::string dataset_id;
  std::vector<std::string> class_list;
  std::vector<VideoRecord> videos;

  const VideoRecord* find_video(const std::string& video_id) const {
    for (const auto& v : videos) {
      if (v.video_id == video_id) return &v;
    }
    return nullptr;
  }

  bool operator==(const DatasetManifest&) const = default;
};

/// Checks every invariant of a tube in the context of its video. Throws
/// ValidationError pointing at the first offending frame.
inline void validate_tube(const ActionTube& tube, const VideoRecord& video, bool expect_score) {
  if (tube.frames.empty()) {
    throw ValidationError(video.video_id, tube.tube_id, -1, "tube has no frames");
  }
  if (expect_score) {
    if (!tube.score.has_value()) {
      throw ValidationError(video.video_id, tube.tube_id, -1, "prediction tube missing score");
    }
    if (!(*tube.score >= 0.0 && *tube.score <= 1.0)) {
      throw ScoreOutOfRangeError("score " + std::to_string(*tube.score) + " outside [0,1] (video=" +
                                 video.video_id + ", tube=" + tube.tube_id + ")");
    }
  } else if (tube.score.has_value()) {
    throw ValidationError(video.video_id, tube.tube_id, -1, "ground-truth tube carries a score");
  }
  for (const auto& [frame_index, box] : tube.frames) {
    if (frame_index < 0 || frame_index >= video.frame_count) {
      throw ValidationError(video.video_id, tube.tube_id, frame_index,
                            "frame index outside [0, frame_count)");
    }
    if (!box.valid()) {
      throw ValidationError(video.video_id, tube.tube_id, frame_index, "malformed bounding box");
    }
    if (box.x_max > video.width || box.y_max > video.height) {
      throw ValidationError(video.video_id, tube.tube_id, frame_index,
                            "box exceeds frame bounds");
    }
  }
}

inline void validate_video(const VideoRecord& video, const std::set<std::string>& class_set,
                           bool expect_scores) {
  if (video.width <= 0 || video.height <= 0) {
    throw ValidationError(video.video_id, "", -1, "non-positive frame dimensions");
  }
  if (video.frame_count <= 0) {
    throw ValidationError(video.video_id, "", -1, "non-positive frame count");
  }
  for (const auto& tube : video.tubes) {
    if (!class_set.contains(tube.class_label)) {
      throw UnknownClassError("class '" + tube.class_label + "' not in class_list (video=" +
                              video.video_id + ", tube=" + tube.tube_id + ")");
    }
    validate_tube(tube, video, expect_scores);
  }
}

inline void validate_manifest(const DatasetManifest& manifest) {
  std::set<std::string> class_set(manifest.class_list.begin(), manifest.class_list.end());
  std::set<std::string> seen_ids;
  for (const auto& video : manifest.videos) {
    if (!seen_ids.insert(video.video_id).second) {
      throw ValidationError(video.video_id, "", -1, "duplicate video_id");
    }
    validate_video(video, class_set, /*expect_scores=*/false);
  }
}

}  // namespace occbench
