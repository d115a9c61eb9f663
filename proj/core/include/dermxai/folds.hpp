// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DERMXAI_FOLDS_HPP_
#define DERMXAI_FOLDS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dermxai/pattern.hpp"

namespace dermxai {

struct FoldAssignment {
  int k = 0;
  std::map<std::string, int> assignment;  // image_id -> fold in [0, k)
};

/// Stratified k-fold split for multilabel data via iterative stratification:
/// labels are processed rarest first and each positive sample goes to the
/// fold that still needs that label the most. Fold sizes differ by at most
/// one. Fully deterministic given the seed, which only drives tie-breaking.
/// Errors: bad_params (k < 2), too_few_samples (fewer images than folds).
FoldAssignment stratified_kfold(const std::map<std::string, PatternVector>& labels,
                                int k, std::uint64_t seed);

/// Per-fold, per-pattern positive counts and prevalences, plus the largest
/// absolute deviation from the global prevalence.
struct FoldBalanceReport {
  int k = 0;
  std::vector<std::uint64_t> fold_sizes;                             // [fold]
  std::array<std::vector<std::uint64_t>, kPatternCount> positives;   // [pattern][fold]
  std::array<std::vector<double>, kPatternCount> prevalence;         // [pattern][fold]
  std::array<double, kPatternCount> global_prevalence{};
  std::array<double, kPatternCount> max_abs_deviation{};             // per pattern
  double worst_deviation = 0.0;                                      // over all patterns
};

/// Error: unknown_image when the assignment references an image that is
/// missing from `labels`.
FoldBalanceReport fold_balance_report(
    const FoldAssignment& fa, const std::map<std::string, PatternVector>& labels);

}  // namespace dermxai

#endif  // DERMXAI_FOLDS_HPP_
