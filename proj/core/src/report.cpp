// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "dermxai/error.hpp"

namespace dermxai {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Cross-fold cell "mean (variance)", e.g. "0.85 (2.50e-03)".
std::string cell(const std::optional<MetricAggregate>& agg) {
  if (!agg) return "-";
  return fmt("%.2f", agg->mean) + " (" + fmt("%.2e", agg->variance) + ")";
}

json agg_json(const std::optional<MetricAggregate>& agg) {
  if (!agg) return nullptr;
  return json{{"mean", agg->mean},
              {"variance", agg->variance},
              {"folds_used", agg->n_used},
              {"folds_excluded", agg->n_excluded}};
}

json metrics_json(const Metrics& m) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return json{{"recall", opt(m.recall)},
              {"specificity", opt(m.specificity)},
              {"precision", opt(m.precision)},
              {"accuracy", opt(m.accuracy)}};
}

json counts_json(const ConfusionCounts& c) {
  return json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}};
}

json target_json(const TargetReport& t) {
  json folds = json::array();
  for (std::size_t f = 0; f < t.per_fold.size(); ++f) {
    json entry = metrics_json(t.per_fold[f]);
    if (f < t.per_fold_counts.size()) {
      entry["counts"] = counts_json(t.per_fold_counts[f]);
    }
    folds.push_back(std::move(entry));
  }
  return json{{"name", t.name},
              {"per_fold", std::move(folds)},
              {"recall", agg_json(t.recall)},
              {"specificity", agg_json(t.specificity)},
              {"precision", agg_json(t.precision)},
              {"accuracy", agg_json(t.accuracy)}};
}

void fill_aggregates(TargetReport& t) {
  auto pick = [&t](std::optional<double> Metrics::* member) {
    std::vector<std::optional<double>> v;
    v.reserve(t.per_fold.size());
    for (const auto& m : t.per_fold) v.push_back(m.*member);
    return try_aggregate(v);
  };
  t.recall = pick(&Metrics::recall);
  t.specificity = pick(&Metrics::specificity);
  t.precision = pick(&Metrics::precision);
  t.accuracy = pick(&Metrics::accuracy);
}

std::string group_stats_row(const char* label,
                            const std::optional<SaliencyGroupStats>& g) {
  std::string row = "| ";
  row += label;
  if (!g) {
    row += " | - | - | - | - | - |";
    return row;
  }
  row += " | " + fmt("%.2f", g->intersection) + " | " + fmt("%.2f", g->mean_fg) +
         " | " + fmt("%.2f", g->mean_bg) + " | " + fmt("%.2f", g->std_fg) +
         " | " + fmt("%.2f", g->std_bg) + " |";
  return row;
}

json group_stats_json(const std::optional<SaliencyGroupStats>& g) {
  if (!g) return nullptr;
  return json{{"n", g->n},
              {"intersection", g->intersection},
              {"mean_fg", g->mean_fg},
              {"mean_bg", g->mean_bg},
              {"std_fg", g->std_fg},
              {"std_bg", g->std_bg},
              {"dice", g->dice},
              {"jaccard", g->jaccard}};
}

}  // namespace

MetricsReport build_metrics_report(
    const std::map<std::string, PatternVector>& pred,
    const std::map<std::string, PatternVector>& sr, const FoldAssignment& folds) {
  if (folds.k < 1) {
    throw_validation("bad_params", "fold assignment is empty");
  }
  if (sr.empty()) {
    throw_validation("bad_params", "reference label set is empty");
  }

  // Bucket the reference images per fold, requiring full coverage.
  std::vector<std::vector<const std::string*>> fold_images(
      static_cast<std::size_t>(folds.k));
  for (const auto& [id, v] : sr) {
    auto fit = folds.assignment.find(id);
    if (fit == folds.assignment.end()) {
      throw_validation("missing_image", "image has no fold assignment: " + id);
    }
    if (pred.find(id) == pred.end()) {
      throw_validation("missing_image", "image has no prediction: " + id);
    }
    fold_images[static_cast<std::size_t>(fit->second)].push_back(&id);
  }

  MetricsReport report;
  report.k = folds.k;
  report.binary.name = "BCC/non-BCC";
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    report.patterns[p].name = std::string(kPatternNames[p]);
  }
  report.xai_no_pattern.name = "All 0's";
  report.xai_pn_only.name = "Pigment Network";
  report.xai_bcc_detection.name = "BCC pattern detection";

  for (std::size_t f = 0; f < fold_images.size(); ++f) {
    std::vector<PatternVector> pv, sv;
    pv.reserve(fold_images[f].size());
    sv.reserve(fold_images[f].size());
    for (const auto* id : fold_images[f]) {
      pv.push_back(pred.at(*id));
      sv.push_back(sr.at(*id));
    }

    auto eval_binary_task = [&](auto&& pred_bit, auto&& truth_bit,
                                TargetReport& target) {
      if (pv.empty()) {
        target.per_fold.push_back({});
        target.per_fold_counts.push_back({});
        return;
      }
      std::vector<bool> pb(pv.size()), tb(sv.size());
      for (std::size_t i = 0; i < pv.size(); ++i) {
        pb[i] = pred_bit(pv[i]);
        tb[i] = truth_bit(sv[i]);
      }
      const ConfusionCounts c = confusion(pb, tb);
      target.per_fold.push_back(metrics_of(c));
      target.per_fold_counts.push_back(c);
    };

    auto is_bcc = [](const PatternVector& v) {
      return binary_of(v) == Diagnosis::Bcc;
    };
    eval_binary_task(is_bcc, is_bcc, report.binary);
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      auto bit = [p](const PatternVector& v) { return v.bits[p]; };
      eval_binary_task(bit, bit, report.patterns[p]);
    }

    if (pv.empty()) {
      for (auto& g : report.group_per_fold) g.push_back({});
      report.xai_no_pattern.per_fold.push_back({});
      report.xai_pn_only.per_fold.push_back({});
      report.xai_bcc_detection.per_fold.push_back({});
      report.xai_bcc_detection.per_fold_counts.push_back({});
      continue;
    }
    const XaiGroupEval xai = xai_group_eval(pv, sv);
    for (std::size_t g = 0; g < kDiagnosisGroupCount; ++g) {
      report.group_per_fold[g].push_back(xai.groups[g]);
    }
    Metrics no_pattern_row;
    no_pattern_row.accuracy =
        xai.groups[static_cast<std::size_t>(DiagnosisGroup::NoPattern)].accuracy;
    report.xai_no_pattern.per_fold.push_back(no_pattern_row);
    Metrics pn_row;
    pn_row.accuracy =
        xai.groups[static_cast<std::size_t>(DiagnosisGroup::PigmentNetworkOnly)]
            .accuracy;
    report.xai_pn_only.per_fold.push_back(pn_row);
    report.xai_bcc_detection.per_fold.push_back(xai.bcc_detection_metrics);
    report.xai_bcc_detection.per_fold_counts.push_back(xai.bcc_detection);
  }

  fill_aggregates(report.binary);
  for (auto& t : report.patterns) fill_aggregates(t);
  fill_aggregates(report.xai_no_pattern);
  fill_aggregates(report.xai_pn_only);
  fill_aggregates(report.xai_bcc_detection);
  return report;
}

std::string metrics_report_to_json(const MetricsReport& report) {
  json groups = json::object();
  const char* group_names[] = {"no_pattern", "pigment_network_only",
                               "bcc_pattern"};
  for (std::size_t g = 0; g < kDiagnosisGroupCount; ++g) {
    json folds = json::array();
    for (const auto& ga : report.group_per_fold[g]) {
      folds.push_back(json{
          {"total", ga.total},
          {"correct", ga.correct},
          {"accuracy", ga.accuracy ? json(*ga.accuracy) : json(nullptr)}});
    }
    groups[group_names[g]] = std::move(folds);
  }

  json patterns = json::array();
  for (const auto& t : report.patterns) patterns.push_back(target_json(t));

  json doc{{"k", report.k},
           {"binary", target_json(report.binary)},
           {"patterns", std::move(patterns)},
           {"xai", json{{"all_zeros", target_json(report.xai_no_pattern)},
                        {"pigment_network", target_json(report.xai_pn_only)},
                        {"bcc_pattern_detection",
                         target_json(report.xai_bcc_detection)},
                        {"group_per_fold", std::move(groups)}}}};
  return doc.dump(2) + "\n";
}

std::string metrics_report_to_markdown(const MetricsReport& report) {
  std::string md;
  md += "| Target | Recall (σ²) | Specificity (σ²) | Precision (σ²) | Accuracy (σ²) |\n";
  md += "| --- | --- | --- | --- | --- |\n";
  auto row = [&md](const TargetReport& t) {
    md += "| " + t.name + " | " + cell(t.recall) + " | " + cell(t.specificity) +
          " | " + cell(t.precision) + " | " + cell(t.accuracy) + " |\n";
  };
  md += "| **BCC/non-BCC** |  |  |  |  |\n";
  row(report.binary);
  md += "| **Pattern detection** |  |  |  |  |\n";
  for (const auto& t : report.patterns) row(t);
  md += "| **Clinically-inspired XAI** |  |  |  |  |\n";
  row(report.xai_no_pattern);
  row(report.xai_pn_only);
  row(report.xai_bcc_detection);
  return md;
}

std::string consensus_to_json(const ConsensusResult& result,
                              const EmConfig& cfg) {
  json posteriors = json::object();
  json hard = json::object();
  for (std::size_t i = 0; i < result.images.size(); ++i) {
    json per_pattern = json::object();
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      per_pattern[std::string(kPatternCodes[p])] = result.posteriors[i][p];
    }
    posteriors[result.images[i]] = std::move(per_pattern);
    hard[result.images[i]] = result.hard_labels[i].to_digits();
  }

  json confusions = json::object();
  for (const auto& [rater, conf] : result.confusions) {
    json per_pattern = json::object();
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      per_pattern[std::string(kPatternCodes[p])] =
          json::array({json::array({conf.m[p][0][0], conf.m[p][0][1]}),
                       json::array({conf.m[p][1][0], conf.m[p][1][1]})});
    }
    confusions[rater] = std::move(per_pattern);
  }

  json priors = json::object();
  json traces = json::object();
  json pattern_info = json::object();
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    const std::string code(kPatternCodes[p]);
    priors[code] = result.priors.p_present[p];
    traces[code] = result.pattern_traces[p];
    pattern_info[code] = json{{"iterations", result.pattern_iterations[p]},
                              {"converged", result.pattern_converged[p]}};
  }

  json doc{
      {"config", json{{"max_iters", cfg.max_iters},
                      {"tol", cfg.tol},
                      {"smoothing", cfg.smoothing},
                      {"seed", cfg.seed}}},
      {"tie_rule", "posterior >= 0.5 counts the pattern as present"},
      {"iterations", result.iterations},
      {"converged", result.converged},
      {"priors", std::move(priors)},
      {"confusions", std::move(confusions)},
      {"posteriors", std::move(posteriors)},
      {"hard_labels", std::move(hard)},
      {"loglik_trace", result.loglik_trace},
      {"pattern_traces", std::move(traces)},
      {"patterns", std::move(pattern_info)},
  };
  return doc.dump(2) + "\n";
}

std::string saliency_report_to_json(const SaliencyBatchReport& report) {
  json pairs = json::array();
  for (const auto& res : report.pairs) {
    json entry{{"image_id", res.spec.image_id},
               {"heatmap", res.spec.heatmap_path},
               {"mask", res.spec.mask_path},
               {"correct", res.spec.correct},
               {"ok", res.ok}};
    if (res.ok) {
      entry["intersection"] = res.stats.intersection;
      entry["mean_fg"] = res.stats.region.mean_fg;
      entry["mean_bg"] = res.stats.region.mean_bg;
      entry["std_fg"] = res.stats.region.std_fg;
      entry["std_bg"] = res.stats.region.std_bg;
      entry["n_fg"] = res.stats.region.n_fg;
      entry["n_bg"] = res.stats.region.n_bg;
      entry["dice"] = res.stats.overlap.dice;
      entry["jaccard"] = res.stats.overlap.jaccard;
      entry["constant_heatmap"] = res.stats.constant_heatmap;
    } else {
      entry["error"] = res.error;
    }
    pairs.push_back(std::move(entry));
  }
  json doc{{"bins", report.bins},
           {"threshold", report.threshold},
           {"n_pairs", report.pairs.size()},
           {"n_failed", report.n_failed},
           {"correct", group_stats_json(report.correct)},
           {"incorrect", group_stats_json(report.incorrect)},
           {"pairs", std::move(pairs)}};
  if (!report.warning.empty()) doc["warning"] = report.warning;
  return doc.dump(2) + "\n";
}

std::string saliency_report_to_markdown(const SaliencyBatchReport& report) {
  std::string md;
  md += "| Prediction | Intersection | Mean Fg | Mean Bg | Std Fg | Std Bg |\n";
  md += "| --- | --- | --- | --- | --- | --- |\n";
  md += group_stats_row("Correct", report.correct) + "\n";
  md += group_stats_row("Incorrect", report.incorrect) + "\n";
  return md;
}

std::string balance_report_to_json(const FoldBalanceReport& report) {
  json patterns = json::object();
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    patterns[std::string(kPatternCodes[p])] =
        json{{"positives", report.positives[p]},
             {"prevalence", report.prevalence[p]},
             {"global_prevalence", report.global_prevalence[p]},
             {"max_abs_deviation", report.max_abs_deviation[p]}};
  }
  json doc{{"k", report.k},
           {"fold_sizes", report.fold_sizes},
           {"patterns", std::move(patterns)},
           {"worst_deviation", report.worst_deviation}};
  return doc.dump(2) + "\n";
}

std::string balance_report_to_markdown(const FoldBalanceReport& report) {
  std::string md;
  md += "| Pattern |";
  for (int f = 0; f < report.k; ++f) {
    md += " Fold " + std::to_string(f) + " |";
  }
  md += " Global | Max deviation |\n|";
  for (int f = 0; f < report.k + 3; ++f) md += " --- |";
  md += "\n";
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    md += "| " + std::string(kPatternNames[p]) + " |";
    for (int f = 0; f < report.k; ++f) {
      md += " " + std::to_string(report.positives[p][f]) + " (" +
            fmt("%.3f", report.prevalence[p][f]) + ") |";
    }
    md += " " + fmt("%.3f", report.global_prevalence[p]) + " | " +
          fmt("%.3f", report.max_abs_deviation[p]) + " |\n";
  }
  return md;
}

std::string explanation_to_json_line(const std::string& image_id,
                                     const Explanation& e) {
  json present = json::array();
  json names = json::array();
  for (Pattern p : e.present_patterns) {
    present.push_back(std::string(pattern_code(p)));
    names.push_back(std::string(pattern_name(p)));
  }
  json doc{{"image_id", image_id},
           {"diagnosis", std::string(to_string(e.diagnosis))},
           {"group", std::string(to_string(e.group))},
           {"present_patterns", std::move(present)},
           {"present_pattern_names", std::move(names)}};
  return doc.dump();
}

std::string planted_to_json(const SimResult& sim) {
  json priors = json::object();
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    priors[std::string(kPatternCodes[p])] = sim.priors[p];
  }
  json raters = json::object();
  for (const auto& [id, planted] : sim.planted) {
    json per_pattern = json::object();
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      per_pattern[std::string(kPatternCodes[p])] =
          json{{"sensitivity", planted.sensitivity[p]},
               {"specificity", planted.specificity[p]}};
    }
    raters[id] = std::move(per_pattern);
  }
  json doc{{"priors", std::move(priors)}, {"raters", std::move(raters)}};
  return doc.dump(2) + "\n";
}

}  // namespace dermxai
