#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "occbench/errors.hpp"
#include "occbench/geometry.hpp"
#include "occbench/log.hpp"
#include "occbench/model.hpp"

namespace occbench {

inline double box_iou(const BoundingBox& a, const BoundingBox& b) {
  double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  double uni = a.area() + b.area() - inter;
  return inter / uni;
}

/// Spatio-temporal tube overlap: temporal IoU of the frame supports times
/// the mean per-frame box IoU over the temporal intersection. Frames absent
/// from both tubes contribute to neither term.
inline double st_iou(const ActionTube& a, const ActionTube& b) {
  auto ia = a.frames.begin();
  auto ib = b.frames.begin();
  long intersection = 0;
  long union_count = 0;
  double spatial_sum = 0.0;
  while (ia != a.frames.end() || ib != b.frames.end()) {
    if (ib == b.frames.end() || (ia != a.frames.end() && ia->first < ib->first)) {
      ++union_count;
      ++ia;
    } else if (ia == a.frames.end() || ib->first < ia->first) {
      ++union_count;
      ++ib;
    } else {
      ++union_count;
      ++intersection;
      spatial_sum += box_iou(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  if (intersection == 0) return 0.0;
  double temporal = static_cast<double>(intersection) / static_cast<double>(union_count);
  return temporal * (spatial_sum / static_cast<double>(intersection));
}

/// All-point average precision over a ranked detection list: area under the
/// precision envelope against recall.
inline double average_precision(const std::vector<std::pair<double, bool>>& ranked, long n_gt) {
  if (n_gt < 1) throw NoGroundTruthError("average precision needs at least one GT instance");
  if (ranked.empty()) return 0.0;
  std::vector<double> precision(ranked.size());
  long tp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (!std::isfinite(ranked[i].first)) {
      throw ValidationError("detection score is not finite");
    }
    if (ranked[i].second) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  for (std::size_t i = ranked.size() - 1; i-- > 0;) {
    precision[i] = std::max(precision[i], precision[i + 1]);
  }
  double ap = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i].second) ap += precision[i] / static_cast<double>(n_gt);
  }
  return ap;
}

using TubesByVideo = std::map<std::string, std::vector<ActionTube>>;

struct ClassApResult {
  std::map<std::string, double> per_class_ap;  // only classes with >= 1 GT
  double map_percent = 0.0;
};

namespace detail {

struct RankedDetection {
  double score = 0.0;
  std::size_t input_index = 0;  // tie-break: earlier input wins
  std::string video_id;
  const ActionTube* tube = nullptr;
};

struct GtEntry {
  const ActionTube* tube = nullptr;
  bool matched = false;
};

inline double mean_percent(const std::map<std::string, double>& per_class_ap) {
  double sum = 0.0;
  for (const auto& [label, ap] : per_class_ap) sum += ap;
  return 100.0 * sum / static_cast<double>(per_class_ap.size());
}

}  // namespace detail

/// Tube-level mean average precision (v-mAP), as a percentage. Predictions
/// of one class are ranked by descending score (ties by input order) and
/// greedily matched to unmatched same-class GT tubes of the same video with
/// st_iou >= tau; IoU ties prefer the lowest GT tube_id. Classes without GT
/// instances are excluded from the mean.
inline ClassApResult video_map(const TubesByVideo& predictions, const TubesByVideo& ground_truth,
                               double tau) {
  std::set<std::string> gt_classes;
  for (const auto& [video_id, tubes] : ground_truth) {
    for (const auto& tube : tubes) gt_classes.insert(tube.class_label);
  }
  if (gt_classes.empty()) throw NoGroundTruthError("dataset has no ground-truth tubes");

  ClassApResult result;
  for (const auto& class_label : gt_classes) {
    std::map<std::string, std::vector<detail::GtEntry>> gt_by_video;
    long n_gt = 0;
    for (const auto& [video_id, tubes] : ground_truth) {
      for (const auto& tube : tubes) {
        if (tube.class_label != class_label) continue;
        gt_by_video[video_id].push_back(detail::GtEntry{&tube, false});
        ++n_gt;
      }
    }

    std::vector<detail::RankedDetection> ranked;
    std::size_t input_index = 0;
    for (const auto& [video_id, tubes] : predictions) {
      for (const auto& tube : tubes) {
        if (tube.class_label == class_label) {
          ranked.push_back(
              detail::RankedDetection{tube.score.value_or(0.0), input_index, video_id, &tube});
        }
        ++input_index;
      }
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.input_index < b.input_index;
    });

    std::vector<std::pair<double, bool>> outcomes;
    outcomes.reserve(ranked.size());
    for (const auto& detection : ranked) {
      detail::GtEntry* best = nullptr;
      double best_iou = 0.0;
      auto bucket = gt_by_video.find(detection.video_id);
      if (bucket != gt_by_video.end()) {
        for (auto& entry : bucket->second) {
          if (entry.matched) continue;
          double iou = st_iou(*detection.tube, *entry.tube);
          if (iou <= 0.0) continue;
          if (best == nullptr || iou > best_iou ||
              (iou == best_iou && entry.tube->tube_id < best->tube->tube_id)) {
            best = &entry;
            best_iou = iou;
          }
        }
      }
      bool is_tp = best != nullptr && best_iou >= tau;
      if (is_tp) best->matched = true;
      outcomes.emplace_back(detection.score, is_tp);
    }

    result.per_class_ap[class_label] = average_precision(outcomes, n_gt);
  }
  result.map_percent = detail::mean_percent(result.per_class_ap);
  return result;
}

/// A single-frame detection or GT box, the frame-level evaluation input.
struct FrameBox {
  std::string video_id;
  long frame_index = 0;
  std::string class_label;
  BoundingBox box;
  double score = 0.0;  // ignored for ground truth
};

/// Flattens tubes into per-frame boxes; prediction tubes propagate their
/// score to every frame.
inline std::vector<FrameBox> flatten_tubes(const TubesByVideo& tubes) {
  std::vector<FrameBox> out;
  for (const auto& [video_id, list] : tubes) {
    for (const auto& tube : list) {
      for (const auto& [frame_index, box] : tube.frames) {
        out.push_back(FrameBox{video_id, frame_index, tube.class_label, box,
                               tube.score.value_or(0.0)});
      }
    }
  }
  return out;
}

/// Frame-level mean average precision (f-mAP), as a percentage. Matching is
/// per (video, frame, class) with box_iou >= tau; otherwise identical to
/// video_map.
inline ClassApResult frame_map(const std::vector<FrameBox>& detections,
                               const std::vector<FrameBox>& ground_truth, double tau) {
  std::set<std::string> gt_classes;
  for (const auto& gt : ground_truth) gt_classes.insert(gt.class_label);
  if (gt_classes.empty()) throw NoGroundTruthError("dataset has no ground-truth boxes");

  ClassApResult result;
  for (const auto& class_label : gt_classes) {
    std::map<std::pair<std::string, long>, std::vector<std::pair<const FrameBox*, bool>>>
        gt_by_frame;
    long n_gt = 0;
    for (const auto& gt : ground_truth) {
      if (gt.class_label != class_label) continue;
      gt_by_frame[{gt.video_id, gt.frame_index}].emplace_back(&gt, false);
      ++n_gt;
    }

    std::vector<std::pair<double, std::size_t>> order;  // score, input index
    for (std::size_t i = 0; i < detections.size(); ++i) {
      if (detections[i].class_label == class_label) order.emplace_back(detections[i].score, i);
    }
    std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });

    std::vector<std::pair<double, bool>> outcomes;
    outcomes.reserve(order.size());
    for (const auto& [score, index] : order) {
      const FrameBox& detection = detections[index];
      std::pair<const FrameBox*, bool>* best = nullptr;
      double best_iou = 0.0;
      auto bucket = gt_by_frame.find({detection.video_id, detection.frame_index});
      if (bucket != gt_by_frame.end()) {
        for (auto& entry : bucket->second) {
          if (entry.second) continue;
          double iou = box_iou(detection.box, entry.first->box);
          if (best == nullptr ? iou > 0.0 : iou > best_iou) {
            best = &entry;
            best_iou = iou;
          }
        }
      }
      bool is_tp = best != nullptr && best_iou >= tau;
      if (is_tp) best->second = true;
      outcomes.emplace_back(score, is_tp);
    }
    result.per_class_ap[class_label] = average_precision(outcomes, n_gt);
  }
  result.map_percent = detail::mean_percent(result.per_class_ap);
  return result;
}

// ---------------------------------------------------------------------------
// Robustness summaries.

struct RobustnessDeltas {
  double delta_a = 0.0;
  double delta_r = 0.0;
};

/// Absolute and relative robustness for a clean score V and occluded score
/// V', both v-mAP percentages in [0, 100].
inline RobustnessDeltas robustness_deltas(double clean, double occluded) {
  if (!(clean >= 0.0 && clean <= 100.0 && occluded >= 0.0 && occluded <= 100.0)) {
    throw ValidationError("robustness inputs must be percentages in [0,100]");
  }
  if (clean <= 0.0) {
    throw ZeroCleanBaselineError("relative robustness is undefined for a zero clean baseline");
  }
  double drop = clean - occluded;
  return RobustnessDeltas{1.0 - drop / 100.0, 1.0 - drop / clean};
}

/// Relative drop when tightening the IoU threshold from 0.2 to 0.5:
/// kappa = 1 - (vmAP_0.2 - vmAP_0.5) / vmAP_0.2.
inline double kappa(double vmap_02, double vmap_05) {
  if (vmap_02 <= 0.0) {
    throw ZeroDenominatorError("kappa is undefined when the 0.2-IoU v-mAP is zero");
  }
  return 1.0 - (vmap_02 - vmap_05) / vmap_02;
}

/// Half-away-from-zero rounding to 2 decimals, robust at the .005 boundary
/// (table values like 0.835 land on it after the percentage arithmetic).
inline double round2(double value) {
  long long micro = std::llround(value * 1e6);
  long long adjust = micro < 0 ? -5000 : 5000;
  long long hundredths = (micro + adjust) / 10000;
  return static_cast<double>(hundredths) / 100.0;
}

inline std::string format_tau(double tau) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", tau);
  return buffer;
}

/// Aggregated evaluation output for one (dataset, predictions) pair.
struct EvalReport {
  std::string dataset_id;
  double primary_tau = 0.5;
  std::map<std::string, double> per_class_ap;      // video level at primary_tau
  double map = 0.0;                                // percent, video level at primary_tau
  std::map<std::string, double> per_threshold;     // format_tau(tau) -> video map percent
  std::map<std::string, double> frame_per_threshold;
  std::string frame_eval_source = "flattened_tubes";
  std::optional<double> delta_a;
  std::optional<double> delta_r;
  std::optional<double> kappa_value;  // only when both 0.2 and 0.5 present
};

/// Runs video- and frame-level evaluation at each threshold and assembles
/// the report. kappa is filled when 0.2 and 0.5 are both requested.
inline EvalReport evaluate_detections(const DatasetManifest& manifest,
                                      const TubesByVideo& predictions,
                                      const std::vector<double>& taus) {
  if (taus.empty()) throw ValidationError("at least one IoU threshold is required");
  TubesByVideo ground_truth;
  for (const auto& video : manifest.videos) {
    if (!video.tubes.empty()) ground_truth[video.video_id] = video.tubes;
  }

  EvalReport report;
  report.dataset_id = manifest.dataset_id;
  std::vector<FrameBox> flat_detections = flatten_tubes(predictions);
  std::vector<FrameBox> flat_gt = flatten_tubes(ground_truth);

  double primary = taus.front();
  for (double tau : taus) {
    if (tau == 0.5) primary = 0.5;
  }
  report.primary_tau = primary;

  for (double tau : taus) {
    ClassApResult video_result = video_map(predictions, ground_truth, tau);
    report.per_threshold[format_tau(tau)] = video_result.map_percent;
    ClassApResult frame_result = frame_map(flat_detections, flat_gt, tau);
    report.frame_per_threshold[format_tau(tau)] = frame_result.map_percent;
    if (tau == primary) {
      report.per_class_ap = video_result.per_class_ap;
      report.map = video_result.map_percent;
    }
  }

  auto v02 = report.per_threshold.find(format_tau(0.2));
  auto v05 = report.per_threshold.find(format_tau(0.5));
  if (v02 != report.per_threshold.end() && v05 != report.per_threshold.end() &&
      v02->second > 0.0) {
    if (v05->second > v02->second) {
      log::warn("v-mAP at 0.5 exceeds v-mAP at 0.2; kappa will be above 1");
    }
    report.kappa_value = kappa(v02->second, v05->second);
  }
  return report;
}

}  // namespace occbench
