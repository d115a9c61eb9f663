// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// Standard Reference inference from multi-rater pattern annotations via a
// Dawid-Skene style Expectation-Maximization, run independently per pattern
// on its binary annotation column. Each rater gets a 2x2 row-stochastic
// confusion matrix per pattern; posteriors and parameters are re-estimated
// until the observed-data log-likelihood stabilizes.

#ifndef DERMXAI_CONSENSUS_HPP_
#define DERMXAI_CONSENSUS_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dermxai/dataset.hpp"
#include "dermxai/pattern.hpp"

namespace dermxai {

struct EmConfig {
  int max_iters = 100;
  double tol = 1e-6;        // absolute log-likelihood change
  double smoothing = 0.01;  // additive smoothing on counts and priors
  std::uint64_t seed = 0;   // recorded for provenance; the algorithm itself
                            // is deterministic (majority-vote start)
};

/// One rater's reliability: per pattern a 2x2 row-stochastic matrix,
/// m[pattern][true_state][reported_state]. Smoothing keeps every entry
/// strictly inside (0,1).
struct RaterConfusion {
  std::array<std::array<std::array<double, 2>, 2>, kPatternCount> m{};
};

struct ClassPrior {
  std::array<double, kPatternCount> p_present{};
};

struct ConsensusResult {
  std::vector<std::string> images;  // sorted, aligned with rows below
  std::vector<std::array<double, kPatternCount>> posteriors;
  std::vector<PatternVector> hard_labels;  // posterior >= 0.5 -> present
  std::map<std::string, RaterConfusion> confusions;
  ClassPrior priors;
  std::vector<double> loglik_trace;  // summed across patterns, per iteration
  std::array<std::vector<double>, kPatternCount> pattern_traces;
  std::array<int, kPatternCount> pattern_iterations{};
  std::array<bool, kPatternCount> pattern_converged{};
  int iterations = 0;     // max over patterns
  bool converged = false; // all patterns reached tol before max_iters
};

/// Per image and pattern: present iff strictly more than half of the
/// image's raters marked it present; an exact tie counts as present
/// (consistent with the posterior tie rule).
std::map<std::string, PatternVector> majority_vote(const AnnotationDataset& ds);

/// Observed-data marginal log-likelihood of the annotations under the given
/// parameters, summed over patterns. An empty dataset yields 0.
double log_likelihood(const AnnotationDataset& ds,
                      const std::map<std::string, RaterConfusion>& confusions,
                      const ClassPrior& priors);

/// Runs the EM and returns the full consensus. Non-convergence is not an
/// error; the result is flagged via `converged`. Errors: bad_params,
/// empty_pattern_column (dataset with no annotations at all).
ConsensusResult infer_sr(const AnnotationDataset& ds, const EmConfig& cfg);

}  // namespace dermxai

#endif  // DERMXAI_CONSENSUS_HPP_
