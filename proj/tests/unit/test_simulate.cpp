// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/simulate.hpp"

#include <doctest.h>

#include <cmath>

#include "dermxai/error.hpp"

using namespace dermxai;

TEST_CASE("perfect raters copy the truth") {
  SimParams params;
  params.n_raters = 3;
  params.n_images = 40;
  params.sens_lo = params.sens_hi = 1.0;
  params.spec_lo = params.spec_hi = 1.0;
  params.seed = 1;
  const auto sim = simulate(params);
  CHECK(sim.annotations.size() == 120);
  for (const auto& rec : sim.annotations) {
    std::size_t i = 0;
    while (sim.images[i] != rec.image_id) ++i;
    CHECK(rec.labels == sim.truth[i]);
  }
}

TEST_CASE("uninformative raters are uncorrelated with the truth") {
  SimParams params;
  params.n_raters = 1;
  params.n_images = 1000;
  params.sens_lo = params.sens_hi = 0.5;
  params.spec_lo = params.spec_hi = 0.5;
  params.prior_lo = params.prior_hi = 0.5;
  params.seed = 6;
  const auto sim = simulate(params);
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    double sum_x = 0, sum_y = 0, sum_xx = 0, sum_yy = 0, sum_xy = 0;
    const double n = static_cast<double>(sim.annotations.size());
    for (std::size_t i = 0; i < sim.annotations.size(); ++i) {
      const double x = sim.truth[i].bits[p] ? 1.0 : 0.0;
      const double y = sim.annotations[i].labels.bits[p] ? 1.0 : 0.0;
      sum_x += x;
      sum_y += y;
      sum_xx += x * x;
      sum_yy += y * y;
      sum_xy += x * y;
    }
    const double cov = sum_xy / n - (sum_x / n) * (sum_y / n);
    const double var_x = sum_xx / n - (sum_x / n) * (sum_x / n);
    const double var_y = sum_yy / n - (sum_y / n) * (sum_y / n);
    const double r = cov / std::sqrt(var_x * var_y);
    CHECK(std::abs(r) < 0.1);
  }
}

TEST_CASE("fixed seed reproduces the draw exactly") {
  SimParams params;
  params.seed = 99;
  params.n_images = 50;
  const auto a = simulate(params);
  const auto b = simulate(params);
  CHECK(a.annotations == b.annotations);
  CHECK(a.truth == b.truth);
  CHECK(a.priors == b.priors);
  const auto c = simulate([&] {
    SimParams p = params;
    p.seed = 100;
    return p;
  }());
  CHECK(a.annotations != c.annotations);
}

TEST_CASE("missing rate produces a sparse set") {
  SimParams params;
  params.n_raters = 4;
  params.n_images = 200;
  params.missing_rate = 0.3;
  params.seed = 12;
  const auto sim = simulate(params);
  CHECK(sim.annotations.size() < 800);
  CHECK(sim.annotations.size() > 400);
}

TEST_CASE("parameter validation") {
  SimParams bad;
  bad.n_raters = 0;
  CHECK_THROWS_AS(simulate(bad), Error);
  SimParams bad_range;
  bad_range.sens_lo = 0.9;
  bad_range.sens_hi = 0.7;
  CHECK_THROWS_AS(simulate(bad_range), Error);
}
