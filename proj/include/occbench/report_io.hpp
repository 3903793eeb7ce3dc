#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "occbench/errors.hpp"
#include "occbench/metrics.hpp"

namespace occbench {

inline nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json out = {{"dataset_id", report.dataset_id},
                        {"primary_tau", report.primary_tau},
                        {"map", report.map},
                        {"per_class_ap", report.per_class_ap},
                        {"video_map", report.per_threshold},
                        {"frame_map", report.frame_per_threshold},
                        {"frame_eval_source", report.frame_eval_source}};
  if (report.kappa_value) out["kappa"] = *report.kappa_value;
  if (report.delta_a) out["delta_a"] = *report.delta_a;
  if (report.delta_r) out["delta_r"] = *report.delta_r;
  return out;
}

inline EvalReport report_from_json(const nlohmann::json& root) {
  EvalReport report;
  report.dataset_id = root.at("dataset_id").get<std::string>();
  report.primary_tau = root.at("primary_tau").get<double>();
  report.map = root.at("map").get<double>();
  report.per_class_ap = root.at("per_class_ap").get<std::map<std::string, double>>();
  report.per_threshold = root.at("video_map").get<std::map<std::string, double>>();
  report.frame_per_threshold = root.at("frame_map").get<std::map<std::string, double>>();
  report.frame_eval_source = root.at("frame_eval_source").get<std::string>();
  if (root.contains("kappa")) report.kappa_value = root.at("kappa").get<double>();
  if (root.contains("delta_a")) report.delta_a = root.at("delta_a").get<double>();
  if (root.contains("delta_r")) report.delta_r = root.at("delta_r").get<double>();
  return report;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return content;
}

/// report.csv: one row per threshold with the video- and frame-level mAP.
inline std::string report_to_csv(const EvalReport& report) {
  std::string csv = "tau,video_map,frame_map\n";
  char line[128];
  for (const auto& [tau, vmap] : report.per_threshold) {
    double fmap = report.frame_per_threshold.count(tau) ? report.frame_per_threshold.at(tau) : 0.0;
    std::snprintf(line, sizeof(line), "%s,%.4f,%.4f\n", tau.c_str(), vmap, fmap);
    csv += line;
  }
  if (report.kappa_value) {
    std::snprintf(line, sizeof(line), "kappa,%.2f,\n", round2(*report.kappa_value));
    csv += line;
  }
  return csv;
}

// ---------------------------------------------------------------------------
// Robustness table across severity cells (the shape of the paper-style
// benchmark tables: 9 static cells, optional motion columns, FG averages).

struct RobustnessCell {
  double vmap = 0.0;
  double delta_a = 0.0;
  double delta_r = 0.0;
};

struct RobustnessTable {
  std::string tau_key;  // threshold the table is computed at
  double clean_vmap = 0.0;
  std::map<std::string, RobustnessCell> cells;        // FG{f}BG{b} or motion name
  std::map<std::string, RobustnessCell> fg_averages;  // FG1..FG3 when the grid is complete
  std::map<std::string, double> kappas;               // "clean" plus per-cell, when defined
};

namespace detail {

inline void check_same_thresholds(const EvalReport& a, const EvalReport& b,
                                  const std::string& label) {
  if (a.per_threshold.size() != b.per_threshold.size()) {
    throw MismatchedThresholdsError("report '" + label + "' has a different threshold set");
  }
  for (const auto& [key, value] : a.per_threshold) {
    if (!b.per_threshold.count(key)) {
      throw MismatchedThresholdsError("report '" + label + "' is missing threshold " + key);
    }
  }
}

}  // namespace detail

/// Builds the severity-grid robustness table from a clean report and one
/// report per occluded cell. All reports must share the threshold set.
inline RobustnessTable build_robustness_table(
    const EvalReport& clean, const std::map<std::string, EvalReport>& occluded) {
  RobustnessTable table;
  std::string tau_key = format_tau(0.5);
  if (!clean.per_threshold.count(tau_key)) tau_key = format_tau(clean.primary_tau);
  if (!clean.per_threshold.count(tau_key)) {
    throw MismatchedThresholdsError("clean report lacks a usable threshold");
  }
  table.tau_key = tau_key;
  table.clean_vmap = clean.per_threshold.at(tau_key);
  if (clean.kappa_value) table.kappas["clean"] = *clean.kappa_value;

  for (const auto& [cell, report] : occluded) {
    detail::check_same_thresholds(clean, report, cell);
    double vmap = report.per_threshold.at(tau_key);
    RobustnessDeltas deltas = robustness_deltas(table.clean_vmap, vmap);
    table.cells[cell] = RobustnessCell{vmap, deltas.delta_a, deltas.delta_r};
    if (report.kappa_value) table.kappas[cell] = *report.kappa_value;
  }

  // FG-averaged columns over BG1/2/3, as in the benchmark tables.
  for (int fg = 1; fg <= 3; ++fg) {
    double sum = 0.0;
    int found = 0;
    for (int bg = 1; bg <= 3; ++bg) {
      std::string cell = "FG" + std::to_string(fg) + "BG" + std::to_string(bg);
      auto it = table.cells.find(cell);
      if (it != table.cells.end()) {
        sum += it->second.vmap;
        ++found;
      }
    }
    if (found == 3) {
      double mean = sum / 3.0;
      RobustnessDeltas deltas = robustness_deltas(table.clean_vmap, mean);
      table.fg_averages["FG" + std::to_string(fg)] =
          RobustnessCell{mean, deltas.delta_a, deltas.delta_r};
    }
  }
  return table;
}

inline nlohmann::json robustness_table_to_json(const RobustnessTable& table) {
  auto cell_json = [](const RobustnessCell& cell) {
    return nlohmann::json{{"vmap", cell.vmap},
                          {"delta_a", cell.delta_a},
                          {"delta_r", cell.delta_r},
                          {"delta_a_2dp", round2(cell.delta_a)},
                          {"delta_r_2dp", round2(cell.delta_r)}};
  };
  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [name, cell] : table.cells) cells[name] = cell_json(cell);
  nlohmann::json averages = nlohmann::json::object();
  for (const auto& [name, cell] : table.fg_averages) averages[name] = cell_json(cell);
  nlohmann::json out = {{"tau", table.tau_key},
                        {"clean_vmap", table.clean_vmap},
                        {"cells", cells},
                        {"fg_averages", averages}};
  if (!table.kappas.empty()) out["kappa"] = table.kappas;
  return out;
}

/// CSV mirror of the benchmark tables: a row per cell and per FG average,
/// then a kappa row when thresholds 0.2 and 0.5 were both evaluated.
inline std::string robustness_table_to_csv(const RobustnessTable& table) {
  std::string csv = "cell,vmap,delta_a,delta_r\n";
  char line[160];
  auto emit = [&](const std::string& name, const RobustnessCell& cell) {
    std::snprintf(line, sizeof(line), "%s,%.1f,%.2f,%.2f\n", name.c_str(), cell.vmap,
                  round2(cell.delta_a), round2(cell.delta_r));
    csv += line;
  };
  for (const auto& [name, cell] : table.cells) emit(name, cell);
  for (const auto& [name, cell] : table.fg_averages) emit(name, cell);
  auto clean_kappa = table.kappas.find("clean");
  if (clean_kappa != table.kappas.end()) {
    std::snprintf(line, sizeof(line), "kappa,%.2f,,\n", round2(clean_kappa->second));
    csv += line;
  }
  return csv;
}

}  // namespace occbench
