#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "occbench/pipeline.hpp"
#include "occbench/token_masking.hpp"

namespace {

using occbench::Error;

int command_import(const std::string& dir, const std::string& category, const std::string& out) {
  occbench::ImportSummary summary = occbench::import_occluder_directory(dir, category, out);
  std::printf("imported %zu sprites into %s\n", summary.imported.size(), out.c_str());
  for (const auto& [file, error] : summary.failures) {
    std::fprintf(stderr, "skipped %s: %s\n", file.c_str(), error.c_str());
  }
  return summary.failures.empty() ? 0 : 1;
}

int command_generate(const occbench::RunConfig& config) {
  occbench::GenerateSummary summary = occbench::run_generate(config);
  std::printf("videos processed: %ld (failed: %ld, skipped: %ld)\n", summary.videos_processed,
              summary.videos_failed, summary.videos_skipped);
  std::printf("mean realized fractions: fg=%.4f bg=%.4f\n", summary.mean_fg_fraction,
              summary.mean_bg_fraction);
  if (!summary.ok()) {
    nlohmann::json errors = nlohmann::json::array();
    for (const auto& outcome : summary.outcomes) {
      if (outcome.skipped) {
        errors.push_back({{"video_id", outcome.video_id}, {"error", "skipped (strict mode)"}});
      } else if (!outcome.ok) {
        errors.push_back({{"video_id", outcome.video_id}, {"error", outcome.error}});
      }
    }
    std::fprintf(stderr, "%s\n", errors.dump().c_str());
    return 1;
  }
  return 0;
}

int command_evaluate(const std::string& manifest, const std::string& predictions,
                     const std::vector<double>& taus, const std::string& out) {
  occbench::EvalReport report = occbench::run_evaluate(manifest, predictions, taus, out);
  for (const auto& [tau, vmap] : report.per_threshold) {
    std::printf("v-mAP@%s: %.2f\n", tau.c_str(), vmap);
  }
  for (const auto& [tau, fmap] : report.frame_per_threshold) {
    std::printf("f-mAP@%s: %.2f\n", tau.c_str(), fmap);
  }
  if (report.kappa_value) std::printf("kappa: %.2f\n", occbench::round2(*report.kappa_value));
  return 0;
}

int command_report(const std::string& clean, const std::vector<std::string>& cells,
                   const std::string& out) {
  std::map<std::string, std::filesystem::path> cell_paths;
  for (const auto& spec : cells) {
    std::size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw occbench::SchemaError("--cell expects NAME=path, got '" + spec + "'");
    }
    cell_paths[spec.substr(0, eq)] = spec.substr(eq + 1);
  }
  occbench::RobustnessTable table = occbench::run_report(clean, cell_paths, out);
  std::printf("clean v-mAP@%s: %.2f\n", table.tau_key.c_str(), table.clean_vmap);
  for (const auto& [name, cell] : table.cells) {
    std::printf("%s: vmap=%.2f delta_a=%.2f delta_r=%.2f\n", name.c_str(), cell.vmap,
                occbench::round2(cell.delta_a), occbench::round2(cell.delta_r));
  }
  return 0;
}

int command_mask_demo(long l, long d, double p, std::uint64_t seed, const std::string& input,
                      const std::string& out_prefix) {
  occbench::TokenSequence sequence(static_cast<std::size_t>(l), static_cast<std::size_t>(d));
  std::ifstream in(input);
  if (!in) throw occbench::IoError("cannot open '" + input + "'");
  for (std::size_t i = 0; i < sequence.values.size(); ++i) {
    if (!(in >> sequence.values[i])) {
      throw occbench::LengthMismatchError("input holds fewer than L*D values");
    }
  }

  std::vector<std::uint8_t> mask =
      occbench::bernoulli_mask(sequence.length, occbench::MaskConfig{p, seed});
  occbench::TokenSequence masked = occbench::apply_token_mask(sequence, mask);

  std::ofstream mask_out(out_prefix + ".mask.txt");
  for (std::uint8_t bit : mask) mask_out << static_cast<int>(bit) << "\n";
  std::ofstream seq_out(out_prefix + ".masked.txt");
  char value[64];
  for (std::size_t i = 0; i < masked.length; ++i) {
    for (std::size_t j = 0; j < masked.dim; ++j) {
      std::snprintf(value, sizeof(value), "%.17g", masked.at(i, j));
      seq_out << value << (j + 1 == masked.dim ? "" : " ");
    }
    seq_out << "\n";
  }
  long dropped = 0;
  for (std::uint8_t bit : mask) dropped += bit == 0 ? 1 : 0;
  std::printf("masked %ld of %ld tokens (p=%.3f)\n", dropped, l, p);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occbench: occluded action-detection dataset synthesis and evaluation"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");

  // import-occluders
  std::string import_dir, import_category, import_out;
  auto* import_cmd = app.add_subcommand("import-occluders", "build a sprite library from RGBA PNGs");
  import_cmd->add_option("--dir", import_dir, "directory of raw RGBA sprite images")->required();
  import_cmd->add_option("--category", import_category, "indoor|outdoor")->required();
  import_cmd->add_option("--out", import_out, "library output directory")->required();

  // generate
  occbench::RunConfig config;
  std::string motion_text = "static";
  std::string split_text = "train";
  std::string manifest_text, occluders_text, out_text;
  auto* generate_cmd = app.add_subcommand("generate", "synthesize occluded frames from a manifest");
  generate_cmd->add_option("--manifest", manifest_text, "dataset manifest JSON")->required();
  generate_cmd->add_option("--occluders", occluders_text, "occluder library directory")->required();
  generate_cmd->add_option("--out", out_text, "output directory")->required();
  generate_cmd->add_option("--fg", config.fg_level, "FG severity level (1-3)");
  generate_cmd->add_option("--bg", config.bg_level, "BG severity level (1-3)");
  generate_cmd->add_option("--motion", motion_text,
                           "static|linear|circle|sinusoid|zoom-in|zoom-out|random");
  generate_cmd->add_option("--split", split_text, "train|test");
  generate_cmd->add_option("--seed", config.seed, "master seed");
  generate_cmd->add_option("--workers", config.workers, "parallel video workers");
  generate_cmd->add_flag("--strict", config.strict, "abort the batch on the first failure");
  generate_cmd->add_option("--category", config.category_filter, "occluder filter: indoor|outdoor|all");

  // evaluate
  std::string eval_manifest, eval_predictions, eval_out;
  std::vector<double> taus{0.2, 0.5};
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score predictions against a manifest");
  evaluate_cmd->add_option("--manifest", eval_manifest, "ground-truth manifest JSON")->required();
  evaluate_cmd->add_option("--predictions", eval_predictions, "prediction document JSON")->required();
  evaluate_cmd->add_option("--iou", taus, "IoU thresholds")->delimiter(',');
  evaluate_cmd->add_option("--out", eval_out, "report output directory")->required();

  // report
  std::string report_clean, report_out;
  std::vector<std::string> report_cells;
  auto* report_cmd = app.add_subcommand("report", "robustness table from per-cell reports");
  report_cmd->add_option("--clean", report_clean, "clean report.json")->required();
  report_cmd->add_option("--cell", report_cells, "cell report as NAME=path (repeatable)")
      ->required();
  report_cmd->add_option("--out", report_out, "table output directory")->required();

  // mask-demo
  long mask_l = 0, mask_d = 0;
  double mask_p = 0.0;
  std::uint64_t mask_seed = 0;
  std::string mask_input, mask_out;
  auto* mask_cmd = app.add_subcommand("mask-demo", "token masking on an LxD sequence file");
  mask_cmd->add_option("--l", mask_l, "token count L")->required();
  mask_cmd->add_option("--d", mask_d, "embedding dimensionality D")->required();
  mask_cmd->add_option("--p", mask_p, "masking probability")->required();
  mask_cmd->add_option("--seed", mask_seed, "mask seed");
  mask_cmd->add_option("--input", mask_input, "whitespace-delimited L*D values")->required();
  mask_cmd->add_option("--out", mask_out, "output prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*import_cmd) return command_import(import_dir, import_category, import_out);
    if (*generate_cmd) {
      config.manifest_path = manifest_text;
      config.occluder_dir = occluders_text;
      config.output_dir = out_text;
      config.motion = occbench::parse_motion_kind(motion_text);
      config.split = occbench::parse_split(split_text);
      return command_generate(config);
    }
    if (*evaluate_cmd) return command_evaluate(eval_manifest, eval_predictions, taus, eval_out);
    if (*report_cmd) return command_report(report_clean, report_cells, report_out);
    if (*mask_cmd) return command_mask_demo(mask_l, mask_d, mask_p, mask_seed, mask_input, mask_out);
  } catch (const Error& e) {
    nlohmann::json error = {{"error", occbench::error_code_name(e.code())}, {"message", e.what()}};
    std::fprintf(stderr, "%s\n", error.dump().c_str());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":\"Unhandled\",\"message\":\"%s\"}\n", e.what());
    return 1;
  }
  return 0;
}
