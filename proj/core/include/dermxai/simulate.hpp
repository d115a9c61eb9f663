// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DERMXAI_SIMULATE_HPP_
#define DERMXAI_SIMULATE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dermxai/dataset.hpp"
#include "dermxai/pattern.hpp"

namespace dermxai {

/// Generator of synthetic multi-rater annotation sets with known ground
/// truth: per-pattern priors and per-rater, per-pattern sensitivity and
/// specificity are drawn from the given ranges, truth is sampled from the
/// priors, and each rater reports through their planted error rates. Used
/// to exercise the consensus EM against parameters known by construction.
struct SimParams {
  int n_raters = 5;
  int n_images = 500;
  double sens_lo = 0.7, sens_hi = 0.95;
  double spec_lo = 0.7, spec_hi = 0.95;
  double prior_lo = 0.1, prior_hi = 0.5;
  double missing_rate = 0.0;  // chance a rater skips an image entirely
  std::uint64_t seed = 0;
};

struct PlantedRater {
  std::array<double, kPatternCount> sensitivity{};
  std::array<double, kPatternCount> specificity{};
};

struct SimResult {
  std::vector<std::string> images;  // sorted
  std::vector<std::string> raters;  // sorted
  std::vector<PatternVector> truth; // aligned with images
  std::vector<AnnotationRecord> annotations;  // sorted by (image, rater)
  std::map<std::string, PlantedRater> planted;
  std::array<double, kPatternCount> priors{};
};

/// Error: bad_params.
SimResult simulate(const SimParams& params);

}  // namespace dermxai

#endif  // DERMXAI_SIMULATE_HPP_
