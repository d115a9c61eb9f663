// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DERMXAI_METRICS_HPP_
#define DERMXAI_METRICS_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dermxai/pattern.hpp"
#include "dermxai/rules.hpp"

namespace dermxai {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

/// Standard confusion counts for binary prediction vs truth.
/// Error: length_mismatch.
ConfusionCounts confusion(const std::vector<bool>& pred,
                          const std::vector<bool>& truth);

/// Ratio metrics of one confusion table. A metric whose denominator is zero
/// is reported as std::nullopt ("undefined"), never as 0 or NaN.
struct Metrics {
  std::optional<double> recall;       // tp / (tp + fn)
  std::optional<double> specificity;  // tn / (tn + fp)
  std::optional<double> precision;    // tp / (tp + fp)
  std::optional<double> accuracy;     // (tp + tn) / total
};

/// Error: empty_counts when total() == 0.
Metrics metrics_of(const ConfusionCounts& c);

/// Cross-fold aggregate of one metric: arithmetic mean and population
/// variance over the folds where the metric was defined.
struct MetricAggregate {
  double mean = 0.0;
  double variance = 0.0;
  int n_used = 0;
  int n_excluded = 0;  // folds where the metric was undefined
};

/// Aggregates one metric across folds, excluding undefined entries.
/// Error: all_undefined when no fold defines the metric.
MetricAggregate aggregate_values(const std::vector<std::optional<double>>& values,
                                 std::string_view metric_name);

/// Like aggregate_values but yields nullopt instead of throwing when every
/// entry is undefined. Used when assembling reports with structurally
/// absent cells.
std::optional<MetricAggregate> try_aggregate(
    const std::vector<std::optional<double>>& values);

struct MetricsAggregate {
  MetricAggregate recall, specificity, precision, accuracy;
};

/// Aggregates the four metrics across folds. Error: all_undefined(metric).
MetricsAggregate fold_aggregate(const std::vector<Metrics>& per_fold);

/// Per-group tally for the clinically inspired XAI evaluation: of the
/// samples whose consensus label falls in the group, how many were predicted
/// in the same group.
struct GroupAccuracy {
  std::uint64_t total = 0;
  std::uint64_t correct = 0;
  std::optional<double> accuracy;  // nullopt when the group is empty
};

struct XaiGroupEval {
  std::array<GroupAccuracy, kDiagnosisGroupCount> groups;  // by DiagnosisGroup
  ConfusionCounts bcc_detection;  // positive class: group == BccPattern
  Metrics bcc_detection_metrics;
};

/// Error: length_mismatch.
XaiGroupEval xai_group_eval(const std::vector<PatternVector>& pred,
                            const std::vector<PatternVector>& sr);

struct FocalLossParams {
  double alpha = 0.25;  // in (0, 1]
  double gamma = 2.0;   // >= 0
};

/// Focal loss -alpha * (1 - p_t)^gamma * log(p_t) with p_t = p for positive
/// targets and 1 - p otherwise. With gamma = 0, alpha = 1 this is binary
/// cross-entropy. Error: domain_error for p outside (0, 1); bad_params for
/// invalid alpha/gamma.
double focal_loss(double p, bool y, const FocalLossParams& params = {});

/// Closed-form d(loss)/dp; matches central finite differences.
double focal_loss_grad(double p, bool y, const FocalLossParams& params = {});

}  // namespace dermxai

#endif  // DERMXAI_METRICS_HPP_
