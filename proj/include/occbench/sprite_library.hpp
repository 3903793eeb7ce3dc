#pragma once

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "occbench/errors.hpp"
#include "occbench/png_io.hpp"
#include "occbench/report_io.hpp"
#include "occbench/sprite.hpp"

namespace occbench {

// Library layout: one trimmed RGBA image per sprite, a JSON sidecar with its
// metadata, and an index.json listing every sprite.

inline nlohmann::json sprite_meta_to_json(const OccluderSprite& sprite) {
  return {{"sprite_id", sprite.sprite_id},
          {"category", category_name(sprite.category)},
          {"source_label", sprite.source_label}};
}

inline void save_sprite(const std::filesystem::path& dir, const OccluderSprite& sprite) {
  write_png(dir / (sprite.sprite_id + ".png"), sprite.rgba);
  write_text_file(dir / (sprite.sprite_id + ".json"), sprite_meta_to_json(sprite).dump(2));
}

struct ImportSummary {
  std::vector<std::string> imported;  // sprite ids in import order
  std::vector<std::pair<std::string, std::string>> failures;  // file, error
};

/// Imports every PNG under raw_dir as an occluder sprite of the given
/// category, writing the trimmed library plus index.json to out_dir. A
/// sidecar <stem>.json next to a raw image may override its metadata.
inline ImportSummary import_occluder_directory(const std::filesystem::path& raw_dir,
                                               const std::string& category,
                                               const std::filesystem::path& out_dir) {
  OccluderCategory default_category = parse_category(category);
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(raw_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no .png files under '" + raw_dir.string() + "'");

  std::filesystem::create_directories(out_dir);
  ImportSummary summary;
  nlohmann::json index_entries = nlohmann::json::array();
  for (const auto& file : files) {
    std::string sprite_id = file.stem().string();
    OccluderCategory sprite_category = default_category;
    std::string source_label = sprite_id;
    std::filesystem::path sidecar = file;
    sidecar.replace_extension(".json");
    try {
      if (std::filesystem::exists(sidecar)) {
        nlohmann::json meta = nlohmann::json::parse(read_text_file(sidecar));
        if (meta.contains("sprite_id")) sprite_id = meta.at("sprite_id").get<std::string>();
        if (meta.contains("category")) {
          sprite_category = parse_category(meta.at("category").get<std::string>());
        }
        if (meta.contains("source_label")) {
          source_label = meta.at("source_label").get<std::string>();
        }
      }
      OccluderSprite sprite =
          import_sprite(read_png(file), sprite_id, sprite_category, source_label);
      save_sprite(out_dir, sprite);
      index_entries.push_back(sprite_meta_to_json(sprite));
      summary.imported.push_back(sprite.sprite_id);
    } catch (const std::exception& e) {
      summary.failures.emplace_back(file.filename().string(), e.what());
    }
  }
  write_text_file(out_dir / "index.json", nlohmann::json{{"sprites", index_entries}}.dump(2));
  return summary;
}

/// Loads a sprite library written by import_occluder_directory, optionally
/// filtered to one category.
inline OccluderSet load_occluder_library(const std::filesystem::path& dir,
                                         const std::string& filter = "all") {
  std::filesystem::path index_path = dir / "index.json";
  if (!std::filesystem::exists(index_path)) {
    throw IoError("occluder library index not found at '" + index_path.string() + "'");
  }
  nlohmann::json index;
  try {
    index = nlohmann::json::parse(read_text_file(index_path));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("occluder index is not valid JSON: ") + e.what());
  }
  OccluderSet set;
  for (const auto& entry : index.at("sprites")) {
    std::string sprite_id = entry.at("sprite_id").get<std::string>();
    OccluderCategory category = parse_category(entry.at("category").get<std::string>());
    std::string source_label = entry.at("source_label").get<std::string>();
    set.sprites.push_back(
        import_sprite(read_png(dir / (sprite_id + ".png")), sprite_id, category, source_label));
  }
  if (set.sprites.empty()) throw EmptySpriteError("occluder library is empty");
  return set.filtered(filter);
}

}  // namespace occbench
