// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// Cross-fold evaluation report assembly and serialization of results to
// JSON and Markdown. The metrics table has three blocks: the binary
// BCC/non-BCC task, per-pattern detection, and the clinically inspired
// grouping (All 0's / Pigment Network / BCC pattern detection), each cell
// holding the cross-fold mean with its population variance.

#ifndef DERMXAI_REPORT_HPP_
#define DERMXAI_REPORT_HPP_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dermxai/consensus.hpp"
#include "dermxai/folds.hpp"
#include "dermxai/metrics.hpp"
#include "dermxai/pattern.hpp"
#include "dermxai/rules.hpp"
#include "dermxai/saliency.hpp"
#include "dermxai/simulate.hpp"

namespace dermxai {

/// One table row: per-fold metrics plus cross-fold aggregates. Cells that
/// are structurally absent (e.g. recall of a group-accuracy row) or
/// undefined in every fold stay nullopt and render as "-".
struct TargetReport {
  std::string name;
  std::vector<Metrics> per_fold;
  std::vector<ConfusionCounts> per_fold_counts;
  std::optional<MetricAggregate> recall, specificity, precision, accuracy;
};

struct MetricsReport {
  int k = 0;
  TargetReport binary;
  std::array<TargetReport, kPatternCount> patterns;
  TargetReport xai_no_pattern;      // accuracy only
  TargetReport xai_pn_only;         // accuracy only
  TargetReport xai_bcc_detection;   // full four metrics
  // Per-fold group tallies backing the two accuracy-only rows.
  std::array<std::vector<GroupAccuracy>, kDiagnosisGroupCount> group_per_fold;
};

/// Evaluates predictions against the standard reference fold by fold.
/// Every reference image must have a prediction and a fold assignment.
/// Errors: missing_image, bad_params.
MetricsReport build_metrics_report(
    const std::map<std::string, PatternVector>& pred,
    const std::map<std::string, PatternVector>& sr, const FoldAssignment& folds);

std::string metrics_report_to_json(const MetricsReport& report);
std::string metrics_report_to_markdown(const MetricsReport& report);

std::string consensus_to_json(const ConsensusResult& result, const EmConfig& cfg);

std::string saliency_report_to_json(const SaliencyBatchReport& report);
std::string saliency_report_to_markdown(const SaliencyBatchReport& report);

std::string balance_report_to_json(const FoldBalanceReport& report);
std::string balance_report_to_markdown(const FoldBalanceReport& report);

/// One JSONL line (no trailing newline) for an image's explanation.
std::string explanation_to_json_line(const std::string& image_id,
                                     const Explanation& e);

/// Planted simulation parameters, for comparing recovered estimates.
std::string planted_to_json(const SimResult& sim);

}  // namespace dermxai

#endif  // DERMXAI_REPORT_HPP_
