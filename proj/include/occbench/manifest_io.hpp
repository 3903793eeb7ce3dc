#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "occbench/model.hpp"

namespace occbench {

using json = nlohmann::json;

namespace detail {

// Field names are normative; anything unexpected is a schema error.
inline void check_keys(const json& object, const char* what,
                       const std::set<std::string_view>& allowed,
                       const std::set<std::string_view>& required) {
  if (!object.is_object()) {
    throw SchemaError(std::string(what) + " must be a JSON object");
  }
  for (const auto& item : object.items()) {
    if (!allowed.contains(item.key())) {
      throw SchemaError(std::string("unknown field '") + item.key() + "' in " + what);
    }
  }
  for (const auto& key : required) {
    if (!object.contains(key)) {
      throw SchemaError(std::string("missing field '") + std::string(key) + "' in " + what);
    }
  }
}

inline std::string get_string(const json& object, const char* key, const char* what) {
  const auto& value = object.at(key);
  if (!value.is_string()) {
    throw SchemaError(std::string("field '") + key + "' of " + what + " must be a string");
  }
  return value.get<std::string>();
}

inline long get_integer(const json& object, const char* key, const char* what) {
  const auto& value = object.at(key);
  if (!value.is_number_integer()) {
    throw SchemaError(std::string("field '") + key + "' of " + what + " must be an integer");
  }
  return value.get<long>();
}

inline long parse_frame_key(const std::string& key) {
  if (key.empty()) throw SchemaError("empty frame index key");
  for (char c : key) {
    if (c < '0' || c > '9') {
      throw SchemaError("frame index key '" + key + "' is not a non-negative integer");
    }
  }
  try {
    return std::stol(key);
  } catch (const std::exception&) {
    throw SchemaError("frame index key '" + key + "' out of range");
  }
}

inline ActionTube parse_tube(const json& node, bool with_score) {
  static const std::set<std::string_view> gt_keys = {"tube_id", "class", "frames"};
  static const std::set<std::string_view> pred_keys = {"tube_id", "class", "frames", "score"};
  check_keys(node, "tube", with_score ? pred_keys : gt_keys,
             with_score ? pred_keys : gt_keys);

  ActionTube tube;
  tube.tube_id = get_string(node, "tube_id", "tube");
  tube.class_label = get_string(node, "class", "tube");
  if (with_score) {
    const auto& score = node.at("score");
    if (!score.is_number()) throw SchemaError("tube score must be a number");
    tube.score = score.get<double>();
  }
  const auto& frames = node.at("frames");
  if (!frames.is_object()) throw SchemaError("tube frames must be an object");
  for (const auto& item : frames.items()) {
    long frame_index = parse_frame_key(item.key());
    const auto& coords = item.value();
    if (!coords.is_array() || coords.size() != 4 || !coords[0].is_number() ||
        !coords[1].is_number() || !coords[2].is_number() || !coords[3].is_number()) {
      throw SchemaError("frame box must be [x_min, y_min, x_max, y_max]");
    }
    tube.frames[frame_index] = BoundingBox{coords[0].get<double>(), coords[1].get<double>(),
                                           coords[2].get<double>(), coords[3].get<double>()};
  }
  return tube;
}

inline VideoRecord parse_video(const json& node, bool with_scores) {
  static const std::set<std::string_view> keys = {"video_id", "width",        "height",
                                                  "frame_count", "frame_source", "tubes"};
  check_keys(node, "video", keys, keys);

  VideoRecord video;
  video.video_id = get_string(node, "video_id", "video");
  video.width = static_cast<int>(get_integer(node, "width", "video"));
  video.height = static_cast<int>(get_integer(node, "height", "video"));
  video.frame_count = get_integer(node, "frame_count", "video");
  video.frame_source = get_string(node, "frame_source", "video");
  const auto& tubes = node.at("tubes");
  if (!tubes.is_array()) throw SchemaError("video tubes must be an array");
  for (const auto& tube_node : tubes) {
    video.tubes.push_back(parse_tube(tube_node, with_scores));
  }
  return video;
}

inline DatasetManifest parse_document(const json& root, bool with_scores) {
  static const std::set<std::string_view> keys = {"dataset_id", "class_list", "videos"};
  check_keys(root, "manifest", keys, keys);

  DatasetManifest manifest;
  manifest.dataset_id = get_string(root, "dataset_id", "manifest");
  const auto& class_list = root.at("class_list");
  if (!class_list.is_array()) throw SchemaError("class_list must be an array");
  for (const auto& entry : class_list) {
    if (!entry.is_string()) throw SchemaError("class_list entries must be strings");
    manifest.class_list.push_back(entry.get<std::string>());
  }
  const auto& videos = root.at("videos");
  if (!videos.is_array()) throw SchemaError("videos must be an array");
  for (const auto& video_node : videos) {
    manifest.videos.push_back(parse_video(video_node, with_scores));
  }
  return manifest;
}

}  // namespace detail

/// Parses and fully validates a manifest document.
inline DatasetManifest parse_manifest(const std::string& document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("manifest is not valid JSON: ") + e.what());
  }
  DatasetManifest manifest = detail::parse_document(root, /*with_scores=*/false);
  validate_manifest(manifest);
  return manifest;
}

/// Parses a prediction document (manifest schema plus per-tube scores) and
/// returns the tubes grouped by video_id. Videos and classes must exist in
/// the ground-truth manifest.
inline std::map<std::string, std::vector<ActionTube>> load_predictions(
    const std::string& document, const DatasetManifest& manifest) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("prediction document is not valid JSON: ") + e.what());
  }
  DatasetManifest predictions = detail::parse_document(root, /*with_scores=*/true);

  std::set<std::string> class_set(manifest.class_list.begin(), manifest.class_list.end());
  std::map<std::string, std::vector<ActionTube>> grouped;
  for (const auto& video : predictions.videos) {
    const VideoRecord* reference = manifest.find_video(video.video_id);
    if (reference == nullptr) {
      throw UnknownVideoError("prediction references unknown video '" + video.video_id + "'");
    }
    if (video.width != reference->width || video.height != reference->height ||
        video.frame_count != reference->frame_count) {
      throw ValidationError(video.video_id, "", -1,
                            "prediction video dimensions disagree with manifest");
    }
    validate_video(video, class_set, /*expect_scores=*/true);
    auto& bucket = grouped[video.video_id];
    bucket.insert(bucket.end(), video.tubes.begin(), video.tubes.end());
  }
  return grouped;
}

inline json tube_to_json(const ActionTube& tube) {
  json frames = json::object();
  for (const auto& [frame_index, box] : tube.frames) {
    frames[std::to_string(frame_index)] = {box.x_min, box.y_min, box.x_max, box.y_max};
  }
  json node = {{"tube_id", tube.tube_id}, {"class", tube.class_label}, {"frames", frames}};
  if (tube.score.has_value()) node["score"] = *tube.score;
  return node;
}

inline json video_to_json(const VideoRecord& video) {
  json tubes = json::array();
  for (const auto& tube : video.tubes) tubes.push_back(tube_to_json(tube));
  return {{"video_id", video.video_id},   {"width", video.width},
          {"height", video.height},       {"frame_count", video.frame_count},
          {"frame_source", video.frame_source}, {"tubes", tubes}};
}

inline json manifest_to_json(const DatasetManifest& manifest) {
  json videos = json::array();
  for (const auto& video : manifest.videos) videos.push_back(video_to_json(video));
  return {{"dataset_id", manifest.dataset_id},
          {"class_list", manifest.class_list},
          {"videos", videos}};
}

inline std::string serialize_manifest(const DatasetManifest& manifest) {
  return manifest_to_json(manifest).dump(2);
}

}  // namespace occbench
