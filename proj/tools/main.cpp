// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// dermxai command line tool. Subcommands cover the whole evaluation
// pipeline: simulate -> consensus -> split -> metrics -> explain, plus
// saliency agreement analysis and image augmentation. Every run writes a
// <command>_manifest.json recording the resolved options and input digests;
// all other outputs are byte-stable given identical inputs and seed.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dermxai/augment.hpp"
#include "dermxai/consensus.hpp"
#include "dermxai/csv.hpp"
#include "dermxai/dataset.hpp"
#include "dermxai/error.hpp"
#include "dermxai/folds.hpp"
#include "dermxai/image.hpp"
#include "dermxai/report.hpp"
#include "dermxai/rules.hpp"
#include "dermxai/saliency.hpp"
#include "dermxai/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "Seed driving any randomized step")
      ->capture_default_str();
  cmd->add_option("--out-dir", opts.out_dir, "Directory for output files")
      ->capture_default_str();
  cmd->add_flag("--verbose", opts.verbose, "Print progress information");
  cmd->set_config("--config", "", "Read options from a key = value file");
}

fs::path ensure_out_dir(const CommonOpts& opts) {
  fs::path dir(opts.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    dermxai::throw_io("io_error",
                      "cannot create output directory " + dir.string());
  }
  return dir;
}

void note(const CommonOpts& opts, const std::string& msg) {
  if (opts.verbose) std::cout << msg << "\n";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) dermxai::throw_io("io_error", "cannot write " + path.string());
  out << text;
  if (!out) dermxai::throw_io("io_error", "failed writing " + path.string());
}

std::string timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Timestamps live only here; every other artifact is byte-stable.
void write_manifest(const fs::path& out_dir, const std::string& command,
                    const std::map<std::string, std::string>& options,
                    const std::vector<fs::path>& inputs,
                    const std::vector<std::string>& outputs) {
  json in_list = json::array();
  for (const auto& p : inputs) {
    in_list.push_back(json{{"path", p.string()},
                           {"bytes", fs::file_size(p)},
                           {"fnv1a64", dermxai::file_digest(p)}});
  }
  json doc{{"command", command},
           {"options", options},
           {"inputs", std::move(in_list)},
           {"outputs", outputs},
           {"generated_at", timestamp_utc()}};
  write_text(out_dir / (command + "_manifest.json"), doc.dump(2) + "\n");
}

std::string sanitize_for_filename(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// consensus

struct ConsensusArgs {
  CommonOpts common;
  std::string annotations;
  dermxai::EmConfig em;
};

void run_consensus(const ConsensusArgs& args) {
  const fs::path out_dir = ensure_out_dir(args.common);
  dermxai::EmConfig cfg = args.em;
  cfg.seed = args.common.seed;

  auto rows = dermxai::read_annotation_rows(args.annotations);
  auto ds = dermxai::validate_dataset(rows);
  note(args.common, "loaded " + std::to_string(ds.records().size()) +
                        " annotations (" + std::to_string(ds.n_images()) +
                        " images, " + std::to_string(ds.n_raters()) +
                        " raters)");
  const auto result = dermxai::infer_sr(ds, cfg);
  note(args.common,
       "EM finished after " + std::to_string(result.iterations) +
           " iterations (" + (result.converged ? "converged" : "hit max_iters") +
           ")");

  write_text(out_dir / "consensus.json",
             dermxai::consensus_to_json(result, cfg));
  std::map<std::string, dermxai::PatternVector> sr;
  for (std::size_t i = 0; i < result.images.size(); ++i) {
    sr.emplace(result.images[i], result.hard_labels[i]);
  }
  dermxai::write_labels_csv(out_dir / "sr.csv", sr, /*with_diagnosis=*/true);

  write_manifest(out_dir, "consensus",
                 {{"annotations", args.annotations},
                  {"max_iters", std::to_string(cfg.max_iters)},
                  {"tol", fmt_double(cfg.tol)},
                  {"smoothing", fmt_double(cfg.smoothing)},
                  {"seed", std::to_string(cfg.seed)}},
                 {args.annotations}, {"consensus.json", "sr.csv"});
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  CommonOpts common;
  dermxai::SimParams params;
};

void run_simulate(const SimulateArgs& args) {
  const fs::path out_dir = ensure_out_dir(args.common);
  dermxai::SimParams params = args.params;
  params.seed = args.common.seed;

  const auto sim = dermxai::simulate(params);
  dermxai::write_annotations_csv(out_dir / "annotations.csv", sim.annotations);
  std::map<std::string, dermxai::PatternVector> truth;
  for (std::size_t i = 0; i < sim.images.size(); ++i) {
    truth.emplace(sim.images[i], sim.truth[i]);
  }
  dermxai::write_labels_csv(out_dir / "truth.csv", truth,
                            /*with_diagnosis=*/false);
  write_text(out_dir / "planted.json", dermxai::planted_to_json(sim));
  note(args.common, "simulated " + std::to_string(sim.annotations.size()) +
                        " annotations from " +
                        std::to_string(params.n_raters) + " raters");

  write_manifest(out_dir, "simulate",
                 {{"raters", std::to_string(params.n_raters)},
                  {"images", std::to_string(params.n_images)},
                  {"sens_lo", fmt_double(params.sens_lo)},
                  {"sens_hi", fmt_double(params.sens_hi)},
                  {"spec_lo", fmt_double(params.spec_lo)},
                  {"spec_hi", fmt_double(params.spec_hi)},
                  {"prior_lo", fmt_double(params.prior_lo)},
                  {"prior_hi", fmt_double(params.prior_hi)},
                  {"missing_rate", fmt_double(params.missing_rate)},
                  {"seed", std::to_string(params.seed)}},
                 {}, {"annotations.csv", "truth.csv", "planted.json"});
}

// ---------------------------------------------------------------------------
// split

struct SplitArgs {
  CommonOpts common;
  std::string labels;
  int k = 5;
};

void run_split(const SplitArgs& args) {
  const fs::path out_dir = ensure_out_dir(args.common);
  const auto labels = dermxai::read_labels_csv(args.labels);
  const auto fa = dermxai::stratified_kfold(labels, args.k, args.common.seed);
  const auto balance = dermxai::fold_balance_report(fa, labels);
  note(args.common, "split " + std::to_string(labels.size()) + " images into " +
                        std::to_string(args.k) + " folds (worst prevalence "
                        "deviation " + fmt_double(balance.worst_deviation) + ")");

  dermxai::write_folds_csv(out_dir / "folds.csv", fa);
  write_text(out_dir / "balance.json", dermxai::balance_report_to_json(balance));
  write_text(out_dir / "balance.md", dermxai::balance_report_to_markdown(balance));

  write_manifest(out_dir, "split",
                 {{"labels", args.labels},
                  {"k", std::to_string(args.k)},
                  {"seed", std::to_string(args.common.seed)}},
                 {args.labels}, {"folds.csv", "balance.json", "balance.md"});
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
  CommonOpts common;
  std::string pred, sr, folds;
};

void run_metrics(const MetricsArgs& args) {
  const fs::path out_dir = ensure_out_dir(args.common);
  const auto pred = dermxai::read_labels_csv(args.pred);
  const auto sr = dermxai::read_labels_csv(args.sr);
  const auto folds = dermxai::read_folds_csv(args.folds);
  const auto report = dermxai::build_metrics_report(pred, sr, folds);

  write_text(out_dir / "metrics.json", dermxai::metrics_report_to_json(report));
  write_text(out_dir / "table.md", dermxai::metrics_report_to_markdown(report));
  note(args.common, "evaluated " + std::to_string(sr.size()) + " images over " +
                        std::to_string(folds.k) + " folds");

  write_manifest(out_dir, "metrics",
                 {{"pred", args.pred}, {"sr", args.sr}, {"folds", args.folds}},
                 {fs::path(args.pred), fs::path(args.sr), fs::path(args.folds)},
                 {"metrics.json", "table.md"});
}

// ---------------------------------------------------------------------------
// saliency

struct SaliencyArgs {
  CommonOpts common;
  std::string manifest;
  int bins = 64;
  double threshold = 0.5;
};

void run_saliency(const SaliencyArgs& args) {
  const fs::path out_dir = ensure_out_dir(args.common);
  auto pairs = dermxai::read_saliency_manifest(args.manifest);
  // Relative heatmap/mask paths resolve against the manifest's directory.
  const fs::path base = fs::path(args.manifest).parent_path();
  for (auto& p : pairs) {
    if (!fs::path(p.heatmap_path).is_absolute()) {
      p.heatmap_path = (base / p.heatmap_path).string();
    }
    if (!fs::path(p.mask_path).is_absolute()) {
      p.mask_path = (base / p.mask_path).string();
    }
  }

  const auto report = dermxai::batch_saliency(pairs, args.bins, args.threshold);
  if (!report.warning.empty()) {
    std::cout << "warning: " << report.warning << "\n";
  }
  if (report.n_failed > 0) {
    std::cout << "warning: " << report.n_failed
              << " pair(s) failed and were excluded from the aggregates\n";
  }

  write_text(out_dir / "saliency.json", dermxai::saliency_report_to_json(report));
  write_text(out_dir / "table.md", dermxai::saliency_report_to_markdown(report));

  std::vector<std::string> outputs = {"saliency.json", "table.md"};
  for (const auto& res : report.pairs) {
    if (!res.ok) continue;
    std::string csv = "bin_center,pdf_fg,pdf_bg\n";
    for (int b = 0; b < res.stats.pdf_fg.bins; ++b) {
      char line[96];
      std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g\n",
                    res.stats.pdf_fg.bin_center(b), res.stats.pdf_fg.density[b],
                    res.stats.pdf_bg.density[b]);
      csv += line;
    }
    const std::string name =
        "density_" + sanitize_for_filename(res.spec.image_id) + ".csv";
    write_text(out_dir / name, csv);
    outputs.push_back(name);
  }

  write_manifest(out_dir, "saliency",
                 {{"manifest", args.manifest},
                  {"bins", std::to_string(args.bins)},
                  {"threshold", fmt_double(args.threshold)}},
                 {args.manifest}, outputs);
}

// ---------------------------------------------------------------------------
// explain

struct ExplainArgs {
  CommonOpts common;
  std::string labels;
};

void run_explain(const ExplainArgs& args) {
  const fs::path out_dir = ensure_out_dir(args.common);
  const auto labels = dermxai::read_labels_csv(args.labels);
  std::string out;
  for (const auto& [id, v] : labels) {
    out += dermxai::explanation_to_json_line(id, dermxai::explain(v));
    out += "\n";
  }
  write_text(out_dir / "explanations.jsonl", out);
  note(args.common, "explained " + std::to_string(labels.size()) + " images");

  write_manifest(out_dir, "explain", {{"labels", args.labels}},
                 {args.labels}, {"explanations.jsonl"});
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
  CommonOpts common;
  std::string input_dir;
  int copies = 1;
  dermxai::AugmentConfig cfg;
};

void run_augment(const AugmentArgs& args) {
  const fs::path out_dir = ensure_out_dir(args.common);
  if (!fs::is_directory(args.input_dir)) {
    dermxai::throw_io("io_error",
                      "input is not a directory: " + args.input_dir);
  }
  if (args.copies < 1) {
    dermxai::throw_validation("bad_params", "copies must be >= 1");
  }
  dermxai::AugmentConfig cfg = args.cfg;
  cfg.seed = args.common.seed;

  std::vector<fs::path> inputs;
  for (const auto& entry : fs::directory_iterator(args.input_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      inputs.push_back(entry.path());
    }
  }
  std::sort(inputs.begin(), inputs.end());
  if (inputs.empty()) {
    std::cout << "warning: no .ppm images found in " << args.input_dir << "\n";
  }

  std::vector<std::string> outputs;
  std::uint64_t index = 0;
  for (const auto& path : inputs) {
    const auto img = dermxai::read_ppm(path);
    for (int j = 0; j < args.copies; ++j, ++index) {
      const auto aug = dermxai::augment(img, cfg, index);
      const std::string name =
          path.stem().string() + "_aug" + std::to_string(j) + ".ppm";
      dermxai::write_ppm(out_dir / name, aug);
      outputs.push_back(name);
    }
  }
  note(args.common, "augmented " + std::to_string(inputs.size()) +
                        " images x" + std::to_string(args.copies));

  write_manifest(out_dir, "augment",
                 {{"input_dir", args.input_dir},
                  {"copies", std::to_string(args.copies)},
                  {"rotation_max_deg", fmt_double(cfg.rotation_max_deg)},
                  {"perspective_distortion",
                   fmt_double(cfg.perspective_distortion)},
                  {"blur_sigma_lo", fmt_double(cfg.blur_sigma_lo)},
                  {"blur_sigma_hi", fmt_double(cfg.blur_sigma_hi)},
                  {"p_rotate", fmt_double(cfg.p_rotate)},
                  {"p_perspective", fmt_double(cfg.p_perspective)},
                  {"p_blur", fmt_double(cfg.p_blur)},
                  {"seed", std::to_string(cfg.seed)}},
                 inputs, outputs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-rater consensus, rule-based diagnosis, evaluation "
               "metrics and saliency agreement statistics for dermoscopic "
               "BCC pattern analysis"};
  app.require_subcommand(1);

  ConsensusArgs consensus_args;
  auto* consensus = app.add_subcommand(
      "consensus", "Infer the standard reference from rater annotations");
  consensus->add_option("annotations", consensus_args.annotations,
                        "annotations.csv (image_id,rater_id,pn,...,at)")
      ->required()
      ->check(CLI::ExistingFile);
  consensus->add_option("--max-iters", consensus_args.em.max_iters,
                        "EM iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  consensus->add_option("--tol", consensus_args.em.tol,
                        "Log-likelihood convergence tolerance")
      ->capture_default_str();
  consensus->add_option("--smoothing", consensus_args.em.smoothing,
                        "Additive smoothing on counts and priors")
      ->capture_default_str();
  add_common(consensus, consensus_args.common);

  SimulateArgs simulate_args;
  auto* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic multi-rater annotation set");
  simulate->add_option("--raters", simulate_args.params.n_raters, "Rater count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--images", simulate_args.params.n_images, "Image count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--sens-lo", simulate_args.params.sens_lo,
                       "Sensitivity range low end")->capture_default_str();
  simulate->add_option("--sens-hi", simulate_args.params.sens_hi,
                       "Sensitivity range high end")->capture_default_str();
  simulate->add_option("--spec-lo", simulate_args.params.spec_lo,
                       "Specificity range low end")->capture_default_str();
  simulate->add_option("--spec-hi", simulate_args.params.spec_hi,
                       "Specificity range high end")->capture_default_str();
  simulate->add_option("--prior-lo", simulate_args.params.prior_lo,
                       "Prevalence range low end")->capture_default_str();
  simulate->add_option("--prior-hi", simulate_args.params.prior_hi,
                       "Prevalence range high end")->capture_default_str();
  simulate->add_option("--missing-rate", simulate_args.params.missing_rate,
                       "Chance a rater skips an image")->capture_default_str();
  add_common(simulate, simulate_args.common);

  SplitArgs split_args;
  auto* split = app.add_subcommand(
      "split", "Stratified k-fold split of a multilabel set");
  split->add_option("labels", split_args.labels,
                    "labels.csv (image_id,pn,...,at)")
      ->required()
      ->check(CLI::ExistingFile);
  split->add_option("--k", split_args.k, "Fold count")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_common(split, split_args.common);

  MetricsArgs metrics_args;
  auto* metrics = app.add_subcommand(
      "metrics", "Cross-fold evaluation report against the standard reference");
  metrics->add_option("--pred", metrics_args.pred, "Predicted labels CSV")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--sr", metrics_args.sr, "Standard reference CSV")
      ->required()
      ->check(CLI::ExistingFile);
  metrics->add_option("--folds", metrics_args.folds, "Fold assignment CSV")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(metrics, metrics_args.common);

  SaliencyArgs saliency_args;
  auto* saliency = app.add_subcommand(
      "saliency", "Heatmap vs expert-mask agreement statistics");
  saliency->add_option("manifest", saliency_args.manifest,
                       "manifest.csv (image_id,heatmap_path,mask_path,correct)")
      ->required()
      ->check(CLI::ExistingFile);
  saliency->add_option("--bins", saliency_args.bins,
                       "Histogram bins for the conditional densities")
      ->capture_default_str()
      ->check(CLI::Range(2, 4096));
  saliency->add_option("--threshold", saliency_args.threshold,
                       "Binarization threshold for DICE/Jaccard")
      ->capture_default_str();
  add_common(saliency, saliency_args.common);

  ExplainArgs explain_args;
  auto* explain = app.add_subcommand(
      "explain", "Rule-based diagnosis and explanation per image");
  explain->alias("xai-report");
  explain->add_option("labels", explain_args.labels,
                      "labels.csv (image_id,pn,...,at)")
      ->required()
      ->check(CLI::ExistingFile);
  add_common(explain, explain_args.common);

  AugmentArgs augment_args;
  auto* augment = app.add_subcommand(
      "augment", "Seeded augmentation of a directory of .ppm images");
  augment->add_option("input_dir", augment_args.input_dir,
                      "Directory of input .ppm images")
      ->required()
      ->check(CLI::ExistingDirectory);
  augment->add_option("--copies", augment_args.copies,
                      "Augmented copies per input image")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  augment->add_option("--rotation-max", augment_args.cfg.rotation_max_deg,
                      "Max absolute rotation angle in degrees")
      ->capture_default_str();
  augment->add_option("--distortion", augment_args.cfg.perspective_distortion,
                      "Perspective corner distortion fraction")
      ->capture_default_str();
  augment->add_option("--blur-lo", augment_args.cfg.blur_sigma_lo,
                      "Gaussian blur sigma range low end")
      ->capture_default_str();
  augment->add_option("--blur-hi", augment_args.cfg.blur_sigma_hi,
                      "Gaussian blur sigma range high end")
      ->capture_default_str();
  augment->add_option("--p-rotate", augment_args.cfg.p_rotate,
                      "Rotation apply probability")
      ->capture_default_str();
  augment->add_option("--p-perspective", augment_args.cfg.p_perspective,
                      "Perspective apply probability")
      ->capture_default_str();
  augment->add_option("--p-blur", augment_args.cfg.p_blur,
                      "Blur apply probability")
      ->capture_default_str();
  add_common(augment, augment_args.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (consensus->parsed()) run_consensus(consensus_args);
    if (simulate->parsed()) run_simulate(simulate_args);
    if (split->parsed()) run_split(split_args);
    if (metrics->parsed()) run_metrics(metrics_args);
    if (saliency->parsed()) run_saliency(saliency_args);
    if (explain->parsed()) run_explain(explain_args);
    if (augment->parsed()) run_augment(augment_args);
  } catch (const dermxai::Error& e) {
    const json err{{"error", e.code()},
                   {"kind", e.kind() == dermxai::ErrorKind::Io ? "io"
                                                               : "validation"},
                   {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return e.kind() == dermxai::ErrorKind::Io ? 2 : 1;
  } catch (const std::exception& e) {
    const json err{{"error", "internal_error"},
                   {"kind", "validation"},
                   {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
