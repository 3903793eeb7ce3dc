#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "occbench/compositor.hpp"
#include "occbench/errors.hpp"
#include "occbench/log.hpp"
#include "occbench/manifest_io.hpp"
#include "occbench/metrics.hpp"
#include "occbench/planner.hpp"
#include "occbench/png_io.hpp"
#include "occbench/report_io.hpp"
#include "occbench/sprite_library.hpp"

namespace occbench {

/// Parameter surface of a generation run. Static mode reads fg/bg levels;
/// dynamic mode uses them as the severity target (FG2/BG3 by default) and
/// follows the requested motion.
struct RunConfig {
  std::filesystem::path manifest_path;
  std::filesystem::path occluder_dir;
  std::filesystem::path output_dir;
  MotionKind motion = MotionKind::Static;
  Split split = Split::Train;
  int fg_level = 2;
  int bg_level = 3;
  std::uint64_t seed = 0;
  int workers = 1;
  bool strict = false;
  std::string category_filter = "all";
  PlannerOptions planner;
};

struct VideoOutcome {
  std::string video_id;
  bool ok = false;
  bool skipped = false;
  std::string error;
  double mean_fg = 0.0;  // temporal mean of realized fractions
  double mean_bg = 0.0;
};

struct GenerateSummary {
  long videos_processed = 0;
  long videos_failed = 0;
  long videos_skipped = 0;
  double mean_fg_fraction = 0.0;  // over successful videos
  double mean_bg_fraction = 0.0;
  std::vector<VideoOutcome> outcomes;  // manifest order

  bool ok() const { return videos_failed == 0 && videos_skipped == 0; }
};

namespace detail {

struct FrameTemplate {
  std::string prefix;
  std::string suffix;
  int width = 0;  // zero-padded field width, 0 = bare

  std::string format(long index) const {
    std::string digits = std::to_string(index);
    if (static_cast<int>(digits.size()) < width) {
      digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
    }
    return prefix + digits + suffix;
  }
};

/// Parses a printf-style template with exactly one %d / %0Nd conversion.
inline FrameTemplate parse_frame_template(const std::string& source, const std::string& video_id) {
  FrameTemplate out;
  std::size_t percent = source.find('%');
  if (percent == std::string::npos || source.find('%', percent + 1) != std::string::npos) {
    throw ValidationError(video_id, "", -1,
                          "frame_source must contain exactly one %d conversion");
  }
  std::size_t cursor = percent + 1;
  std::string width_digits;
  while (cursor < source.size() && source[cursor] >= '0' && source[cursor] <= '9') {
    width_digits.push_back(source[cursor]);
    ++cursor;
  }
  if (cursor >= source.size() || source[cursor] != 'd') {
    throw ValidationError(video_id, "", -1, "frame_source conversion must end in 'd'");
  }
  out.prefix = source.substr(0, percent);
  out.suffix = source.substr(cursor + 1);
  out.width = width_digits.empty() ? 0 : std::stoi(width_digits);
  return out;
}

inline VideoOutcome process_video(const VideoRecord& video, const RunConfig& config,
                                  const OccluderSet& occluders,
                                  const std::filesystem::path& manifest_dir) {
  VideoOutcome outcome;
  outcome.video_id = video.video_id;
  try {
    std::uint64_t video_seed = derive_seed(config.seed, video.video_id);
    OcclusionPlan plan;
    if (config.motion == MotionKind::Static) {
      plan = plan_static(video, config.fg_level, config.bg_level, occluders, video_seed,
                         config.planner);
    } else {
      MotionSpec motion;
      motion.kind = config.motion;
      motion.split = config.split;
      plan = plan_dynamic(video, motion, occluders, video_seed,
                          SeverityTarget{config.fg_level, config.bg_level}, config.planner);
    }

    FrameTemplate frame_template = parse_frame_template(video.frame_source, video.video_id);
    std::vector<Image> frames;
    frames.reserve(static_cast<std::size_t>(video.frame_count));
    for (long t = 0; t < video.frame_count; ++t) {
      frames.push_back(read_png(manifest_dir / frame_template.format(t)));
    }

    RenderResult rendered = render_plan(frames, plan, occluders);

    std::filesystem::path video_dir = config.output_dir / video.video_id;
    std::filesystem::create_directories(video_dir);
    for (long t = 0; t < video.frame_count; ++t) {
      Image& frame = rendered.frames[static_cast<std::size_t>(t)];
      Image rgb(frame.width, frame.height, 3);
      for (int y = 0; y < frame.height; ++y) {
        for (int x = 0; x < frame.width; ++x) {
          for (int c = 0; c < 3; ++c) rgb.at(x, y, c) = frame.at(x, y, c);
        }
      }
      std::filesystem::path name = frame_template.format(t);
      write_png(video_dir / name.filename(), rgb);
    }
    write_text_file(video_dir / "plan.json", serialize_plan(plan));

    std::string csv = "frame_index,fg_fraction,bg_fraction\n";
    char line[96];
    double fg_sum = 0.0, bg_sum = 0.0;
    for (const auto& [t, severity] : rendered.realized_severity) {
      std::snprintf(line, sizeof(line), "%ld,%.6f,%.6f\n", t, severity.fg_fraction,
                    severity.bg_fraction);
      csv += line;
      fg_sum += severity.fg_fraction;
      bg_sum += severity.bg_fraction;
    }
    write_text_file(video_dir / "severity.csv", csv);

    double n = static_cast<double>(rendered.realized_severity.size());
    outcome.mean_fg = fg_sum / n;
    outcome.mean_bg = bg_sum / n;
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.ok = false;
    outcome.error = e.what();
  }
  return outcome;
}

}  // namespace detail

/// Plans and renders occlusions for every video in the manifest. Randomness
/// flows from config.seed through per-video derived seeds, so reordering the
/// manifest or changing worker count cannot change any video's output.
inline GenerateSummary run_generate(const RunConfig& config) {
  if (config.motion != MotionKind::Static) check_motion_split(config.motion, config.split);
  if (config.fg_level < 1 || config.fg_level > 3 || config.bg_level < 1 || config.bg_level > 3) {
    throw OutOfCalibratedRangeError("severity levels must be 1, 2 or 3");
  }

  DatasetManifest manifest = parse_manifest(read_text_file(config.manifest_path));
  OccluderSet occluders = load_occluder_library(config.occluder_dir, config.category_filter);
  std::filesystem::path manifest_dir = config.manifest_path.parent_path();
  std::filesystem::create_directories(config.output_dir);

  std::size_t n = manifest.videos.size();
  std::vector<VideoOutcome> outcomes(n);
  std::atomic<std::size_t> cursor{0};
  std::atomic<bool> stop{false};

  auto worker = [&] {
    while (true) {
      std::size_t i = cursor.fetch_add(1);
      if (i >= n) break;
      if (stop.load()) {
        outcomes[i].video_id = manifest.videos[i].video_id;
        outcomes[i].skipped = true;
        continue;
      }
      outcomes[i] = detail::process_video(manifest.videos[i], config, occluders, manifest_dir);
      if (!outcomes[i].ok && config.strict) stop.store(true);
    }
  };

  int worker_count = std::max(1, config.workers);
  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < worker_count; ++i) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }

  GenerateSummary summary;
  summary.outcomes = std::move(outcomes);
  double fg_sum = 0.0, bg_sum = 0.0;
  long ok_count = 0;
  for (const auto& outcome : summary.outcomes) {
    if (outcome.skipped) {
      ++summary.videos_skipped;
    } else if (outcome.ok) {
      ++summary.videos_processed;
      fg_sum += outcome.mean_fg;
      bg_sum += outcome.mean_bg;
      ++ok_count;
    } else {
      ++summary.videos_failed;
      log::error("video '" + outcome.video_id + "' failed: " + outcome.error);
    }
  }
  if (ok_count > 0) {
    summary.mean_fg_fraction = fg_sum / ok_count;
    summary.mean_bg_fraction = bg_sum / ok_count;
  }
  return summary;
}

/// Evaluates predictions against a manifest and writes report.json plus
/// report.csv under out_dir.
inline EvalReport run_evaluate(const std::filesystem::path& manifest_path,
                               const std::filesystem::path& predictions_path,
                               const std::vector<double>& taus,
                               const std::filesystem::path& out_dir) {
  DatasetManifest manifest = parse_manifest(read_text_file(manifest_path));
  TubesByVideo predictions = load_predictions(read_text_file(predictions_path), manifest);
  EvalReport report = evaluate_detections(manifest, predictions, taus);

  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "report.json", report_to_json(report).dump(2));
  write_text_file(out_dir / "report.csv", report_to_csv(report));
  return report;
}

/// Builds the severity-grid robustness table from report files and writes
/// robustness.json plus robustness.csv under out_dir.
inline RobustnessTable run_report(const std::filesystem::path& clean_report_path,
                                  const std::map<std::string, std::filesystem::path>& cell_paths,
                                  const std::filesystem::path& out_dir) {
  EvalReport clean = report_from_json(nlohmann::json::parse(read_text_file(clean_report_path)));
  std::map<std::string, EvalReport> occluded;
  for (const auto& [cell, path] : cell_paths) {
    occluded[cell] = report_from_json(nlohmann::json::parse(read_text_file(path)));
  }
  RobustnessTable table = build_robustness_table(clean, occluded);

  std::filesystem::create_directories(out_dir);
  write_text_file(out_dir / "robustness.json", robustness_table_to_json(table).dump(2));
  write_text_file(out_dir / "robustness.csv", robustness_table_to_csv(table));
  return table;
}

}  // namespace occbench
