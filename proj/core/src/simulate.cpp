// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/simulate.hpp"

#include <cstdio>

#include "dermxai/error.hpp"
#include "dermxai/rng.hpp"

namespace dermxai {

namespace {

std::string padded_id(const char* prefix, int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*d", prefix, width, value);
  return buf;
}

void check_range(double lo, double hi, double min, double max,
                 const char* name) {
  if (!(lo >= min && hi <= max && lo <= hi)) {
    throw_validation("bad_params", std::string(name) + " range invalid");
  }
}

}  // namespace

SimResult simulate(const SimParams& params) {
  if (params.n_raters < 1 || params.n_images < 1) {
    throw_validation("bad_params", "need at least 1 rater and 1 image");
  }
  check_range(params.sens_lo, params.sens_hi, 0.0, 1.0, "sensitivity");
  check_range(params.spec_lo, params.spec_hi, 0.0, 1.0, "specificity");
  check_range(params.prior_lo, params.prior_hi, 0.0, 1.0, "prior");
  if (!(params.missing_rate >= 0.0 && params.missing_rate < 1.0)) {
    throw_validation("bad_params", "missing rate must lie in [0,1)");
  }

  Rng rng(params.seed);
  SimResult res;

  // Draw order is fixed: priors, then per-rater parameters, then truth,
  // then reports; identical seeds reproduce identical files.
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    res.priors[p] = rng.uniform(params.prior_lo, params.prior_hi);
  }

  res.raters.reserve(params.n_raters);
  for (int r = 0; r < params.n_raters; ++r) {
    const std::string id = padded_id("rater", r + 1, 2);
    res.raters.push_back(id);
    PlantedRater planted;
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      planted.sensitivity[p] = rng.uniform(params.sens_lo, params.sens_hi);
      planted.specificity[p] = rng.uniform(params.spec_lo, params.spec_hi);
    }
    res.planted.emplace(id, planted);
  }

  res.images.reserve(params.n_images);
  res.truth.reserve(params.n_images);
  for (int i = 0; i < params.n_images; ++i) {
    res.images.push_back(padded_id("img", i + 1, 5));
    PatternVector t;
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      t.bits[p] = rng.bernoulli(res.priors[p]);
    }
    res.truth.push_back(t);
  }

  res.annotations.reserve(static_cast<std::size_t>(params.n_images) *
                          params.n_raters);
  for (int i = 0; i < params.n_images; ++i) {
    for (int r = 0; r < params.n_raters; ++r) {
      if (params.missing_rate > 0.0 && rng.bernoulli(params.missing_rate)) {
        continue;  // this rater never saw the image
      }
      const PlantedRater& pr = res.planted.at(res.raters[r]);
      AnnotationRecord rec;
      rec.image_id = res.images[i];
      rec.rater_id = res.raters[r];
      for (std::size_t p = 0; p < kPatternCount; ++p) {
        if (res.truth[i].bits[p]) {
          rec.labels.bits[p] = rng.bernoulli(pr.sensitivity[p]);
        } else {
          rec.labels.bits[p] = !rng.bernoulli(pr.specificity[p]);
        }
      }
      res.annotations.push_back(std::move(rec));
    }
  }
  return res;
}

}  // namespace dermxai
