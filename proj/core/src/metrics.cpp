// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/metrics.hpp"

#include <cmath>
#include <string>

#include "dermxai/error.hpp"

namespace dermxai {

namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void check_focal_params(double p, const FocalLossParams& params) {
  if (!(params.alpha > 0.0 && params.alpha <= 1.0) || !(params.gamma >= 0.0)) {
    throw_validation("bad_params",
                     "focal loss requires alpha in (0,1] and gamma >= 0");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw_validation("domain_error",
                     "focal loss probability must lie strictly in (0,1), got " +
                         std::to_string(p));
  }
}

}  // namespace

ConfusionCounts confusion(const std::vector<bool>& pred,
                          const std::vector<bool>& truth) {
  if (pred.size() != truth.size()) {
    throw_validation("length_mismatch",
                     "prediction and truth lengths differ: " +
                         std::to_string(pred.size()) + " vs " +
                         std::to_string(truth.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (truth[i]) {
      pred[i] ? ++c.tp : ++c.fn;
    } else {
      pred[i] ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

Metrics metrics_of(const ConfusionCounts& c) {
  if (c.total() == 0) {
    throw_validation("empty_counts", "confusion counts sum to zero");
  }
  Metrics m;
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.specificity = ratio(c.tn, c.tn + c.fp);
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.accuracy = ratio(c.tp + c.tn, c.total());
  return m;
}

MetricAggregate aggregate_values(const std::vector<std::optional<double>>& values,
                                 std::string_view metric_name) {
  auto agg = try_aggregate(values);
  if (!agg) {
    throw_validation("all_undefined", "metric '" + std::string(metric_name) +
                                          "' is undefined in every fold");
  }
  return *agg;
}

std::optional<MetricAggregate> try_aggregate(
    const std::vector<std::optional<double>>& values) {
  MetricAggregate agg;
  double sum = 0.0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++agg.n_used;
    } else {
      ++agg.n_excluded;
    }
  }
  if (agg.n_used == 0) return std::nullopt;
  agg.mean = sum / agg.n_used;
  double ss = 0.0;
  for (const auto& v : values) {
    if (v) {
      const double d = *v - agg.mean;
      ss += d * d;
    }
  }
  agg.variance = ss / agg.n_used;  // population variance over the folds
  return agg;
}

MetricsAggregate fold_aggregate(const std::vector<Metrics>& per_fold) {
  if (per_fold.empty()) {
    throw_validation("bad_params", "fold_aggregate needs at least one fold");
  }
  auto pick = [&per_fold](std::optional<double> Metrics::* member) {
    std::vector<std::optional<double>> v;
    v.reserve(per_fold.size());
    for (const auto& m : per_fold) v.push_back(m.*member);
    return v;
  };
  MetricsAggregate out;
  out.recall = aggregate_values(pick(&Metrics::recall), "recall");
  out.specificity = aggregate_values(pick(&Metrics::specificity), "specificity");
  out.precision = aggregate_values(pick(&Metrics::precision), "precision");
  out.accuracy = aggregate_values(pick(&Metrics::accuracy), "accuracy");
  return out;
}

XaiGroupEval xai_group_eval(const std::vector<PatternVector>& pred,
                            const std::vector<PatternVector>& sr) {
  if (pred.size() != sr.size()) {
    throw_validation("length_mismatch",
                     "prediction and reference vector counts differ: " +
                         std::to_string(pred.size()) + " vs " +
                         std::to_string(sr.size()));
  }
  XaiGroupEval eval;
  std::vector<bool> pred_bcc_pattern(pred.size()), sr_bcc_pattern(sr.size());
  for (std::size_t i = 0; i < sr.size(); ++i) {
    const DiagnosisGroup truth_group = group_of(sr[i]);
    const DiagnosisGroup pred_group = group_of(pred[i]);
    auto& g = eval.groups[static_cast<std::size_t>(truth_group)];
    ++g.total;
    if (pred_group == truth_group) ++g.correct;
    pred_bcc_pattern[i] = pred_group == DiagnosisGroup::BccPattern;
    sr_bcc_pattern[i] = truth_group == DiagnosisGroup::BccPattern;
  }
  for (auto& g : eval.groups) {
    if (g.total > 0) {
      g.accuracy = static_cast<double>(g.correct) / static_cast<double>(g.total);
    }
  }
  if (!sr.empty()) {
    eval.bcc_detection = confusion(pred_bcc_pattern, sr_bcc_pattern);
    eval.bcc_detection_metrics = metrics_of(eval.bcc_detection);
  }
  return eval;
}

double focal_loss(double p, bool y, const FocalLossParams& params) {
  check_focal_params(p, params);
  const double pt = y ? p : 1.0 - p;
  if (params.gamma == 0.0) return -params.alpha * std::log(pt);
  return -params.alpha * std::pow(1.0 - pt, params.gamma) * std::log(pt);
}

double focal_loss_grad(double p, bool y, const FocalLossParams& params) {
  check_focal_params(p, params);
  const double pt = y ? p : 1.0 - p;
  // d(loss)/d(pt); chain rule flips the sign for negative targets.
  double d_pt;
  if (params.gamma == 0.0) {
    d_pt = -params.alpha / pt;
  } else {
    const double q = 1.0 - pt;
    d_pt = params.alpha * (params.gamma * std::pow(q, params.gamma - 1.0) *
                               std::log(pt) -
                           std::pow(q, params.gamma) / pt);
  }
  return y ? d_pt : -d_pt;
}

}  // namespace dermxai
