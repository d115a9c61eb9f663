// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/folds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dermxai/error.hpp"
#include "dermxai/rng.hpp"

namespace dermxai {

FoldAssignment stratified_kfold(const std::map<std::string, PatternVector>& labels,
                                int k, std::uint64_t seed) {
  if (k < 2) {
    throw_validation("bad_params", "fold count must be at least 2, got " +
                                       std::to_string(k));
  }
  const std::size_t n = labels.size();
  if (n < static_cast<std::size_t>(k)) {
    throw_validation("too_few_samples",
                     "cannot split " + std::to_string(n) + " images into " +
                         std::to_string(k) + " folds");
  }

  // Canonical sample order: lexicographic image id (std::map iteration).
  std::vector<const std::string*> ids;
  std::vector<PatternVector> vecs;
  ids.reserve(n);
  vecs.reserve(n);
  for (const auto& [id, v] : labels) {
    ids.push_back(&id);
    vecs.push_back(v);
  }

  // Seeded fold order used for the final tie-break; capacities are as equal
  // as possible, with the spare slots following the same order.
  std::vector<int> fold_order(k);
  std::iota(fold_order.begin(), fold_order.end(), 0);
  Rng rng(seed);
  rng.shuffle(fold_order);
  std::vector<int> tie_rank(k);  // tie_rank[fold] = position in fold_order
  for (int r = 0; r < k; ++r) tie_rank[fold_order[r]] = r;

  std::vector<std::uint64_t> capacity(k, n / static_cast<std::size_t>(k));
  for (std::size_t s = 0; s < n % static_cast<std::size_t>(k); ++s) {
    ++capacity[fold_order[s]];
  }

  std::vector<std::uint64_t> remaining_pos(kPatternCount, 0);
  for (const auto& v : vecs) {
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      if (v.bits[p]) ++remaining_pos[p];
    }
  }

  // assigned_pos[p][fold]: positives of pattern p placed so far. With a
  // uniform per-fold quota the fold with the greatest remaining demand for a
  // label is exactly the one with the fewest assigned positives of it, so
  // demand comparisons stay in integers.
  std::vector<std::array<std::uint64_t, kPatternCount>> fold_pos(
      k, std::array<std::uint64_t, kPatternCount>{});

  std::vector<bool> assigned(n, false);
  std::vector<int> fold_of(n, -1);
  std::size_t n_left = n;

  auto pick_fold = [&](std::size_t pattern, bool use_demand) {
    int best = -1;
    for (int j = 0; j < k; ++j) {
      if (capacity[j] == 0) continue;
      if (best < 0) {
        best = j;
        continue;
      }
      if (use_demand) {
        if (fold_pos[j][pattern] != fold_pos[best][pattern]) {
          if (fold_pos[j][pattern] < fold_pos[best][pattern]) best = j;
          continue;
        }
      }
      if (capacity[j] != capacity[best]) {
        if (capacity[j] > capacity[best]) best = j;
        continue;
      }
      if (tie_rank[j] < tie_rank[best]) best = j;
    }
    return best;
  };

  auto place = [&](std::size_t sample, int fold) {
    assigned[sample] = true;
    fold_of[sample] = fold;
    --capacity[fold];
    --n_left;
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      if (vecs[sample].bits[p]) {
        ++fold_pos[fold][p];
        --remaining_pos[p];
      }
    }
  };

  while (n_left > 0) {
    // Rarest label still in the pool; ties resolve to the lowest index.
    std::size_t label = kPatternCount;
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      if (remaining_pos[p] == 0) continue;
      if (label == kPatternCount || remaining_pos[p] < remaining_pos[label]) {
        label = p;
      }
    }
    if (label == kPatternCount) {
      // Only label-free samples remain; spread them by capacity.
      for (std::size_t s = 0; s < n; ++s) {
        if (!assigned[s]) place(s, pick_fold(0, /*use_demand=*/false));
      }
      break;
    }
    for (std::size_t s = 0; s < n; ++s) {
      if (!assigned[s] && vecs[s].bits[label]) {
        place(s, pick_fold(label, /*use_demand=*/true));
      }
    }
  }

  FoldAssignment fa;
  fa.k = k;
  for (std::size_t s = 0; s < n; ++s) fa.assignment.emplace(*ids[s], fold_of[s]);
  return fa;
}

FoldBalanceReport fold_balance_report(
    const FoldAssignment& fa, const std::map<std::string, PatternVector>& labels) {
  FoldBalanceReport rep;
  rep.k = fa.k;
  rep.fold_sizes.assign(static_cast<std::size_t>(fa.k), 0);
  for (auto& v : rep.positives) v.assign(static_cast<std::size_t>(fa.k), 0);
  for (auto& v : rep.prevalence) v.assign(static_cast<std::size_t>(fa.k), 0.0);

  std::array<std::uint64_t, kPatternCount> global_pos{};
  for (const auto& [id, fold] : fa.assignment) {
    auto it = labels.find(id);
    if (it == labels.end()) {
      throw_validation("unknown_image",
                       "fold assignment references unlabeled image: " + id);
    }
    if (fold < 0 || fold >= fa.k) {
      throw_validation("bad_params", "fold index out of range for image: " + id);
    }
    ++rep.fold_sizes[static_cast<std::size_t>(fold)];
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      if (it->second.bits[p]) {
        ++rep.positives[p][static_cast<std::size_t>(fold)];
        ++global_pos[p];
      }
    }
  }

  const double n = static_cast<double>(fa.assignment.size());
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    rep.global_prevalence[p] = n > 0 ? static_cast<double>(global_pos[p]) / n : 0.0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(fa.k); ++j) {
      const double size = static_cast<double>(rep.fold_sizes[j]);
      const double prev =
          size > 0 ? static_cast<double>(rep.positives[p][j]) / size : 0.0;
      rep.prevalence[p][j] = prev;
      rep.max_abs_deviation[p] = std::max(
          rep.max_abs_deviation[p], std::abs(prev - rep.global_prevalence[p]));
    }
    rep.worst_deviation = std::max(rep.worst_deviation, rep.max_abs_deviation[p]);
  }
  return rep;
}

}  // namespace dermxai
