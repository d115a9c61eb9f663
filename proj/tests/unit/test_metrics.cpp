// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>

#include "dermxai/error.hpp"
#include "dermxai/rng.hpp"

using namespace dermxai;

namespace {

std::string error_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

}  // namespace

TEST_CASE("confusion counting") {
  const auto perfect = confusion({1, 0, 1}, {1, 0, 1});
  CHECK(perfect.tp == 2);
  CHECK(perfect.tn == 1);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);

  const auto c = confusion(std::vector<bool>(10, true),
                           {1, 1, 1, 1, 1, 1, 1, 1, 1, 0});
  CHECK(c.tp == 9);
  CHECK(c.fp == 1);

  const auto misses = confusion({0, 0}, {1, 1});
  CHECK(misses.fn == 2);

  CHECK(error_code([] { confusion({1}, {1, 0}); }) == "length_mismatch");
}

TEST_CASE("metrics from counts") {
  const Metrics m = metrics_of({.tp = 9, .fp = 2, .tn = 8, .fn = 1});
  CHECK(*m.recall == doctest::Approx(0.90).epsilon(1e-12));
  CHECK(*m.specificity == doctest::Approx(0.80).epsilon(1e-12));
  CHECK(*m.precision == doctest::Approx(9.0 / 11.0).epsilon(1e-12));
  CHECK(*m.accuracy == doctest::Approx(0.85).epsilon(1e-12));

  // Zero-denominator metrics are undefined, not 0.
  const Metrics no_pos = metrics_of({.tp = 0, .fp = 0, .tn = 5, .fn = 0});
  CHECK(!no_pos.recall.has_value());
  CHECK(!no_pos.precision.has_value());
  CHECK(no_pos.specificity.has_value());

  const Metrics ideal = metrics_of({.tp = 3, .fp = 0, .tn = 4, .fn = 0});
  CHECK(*ideal.recall == 1.0);
  CHECK(*ideal.specificity == 1.0);
  CHECK(*ideal.precision == 1.0);
  CHECK(*ideal.accuracy == 1.0);

  CHECK(error_code([] { metrics_of({}); }) == "empty_counts");
}

TEST_CASE("metrics are scale-free") {
  const ConfusionCounts base{.tp = 9, .fp = 2, .tn = 8, .fn = 1};
  const Metrics m = metrics_of(base);
  for (std::uint64_t k : {2, 7, 100}) {
    const Metrics scaled = metrics_of(
        {.tp = base.tp * k, .fp = base.fp * k, .tn = base.tn * k, .fn = base.fn * k});
    CHECK(*scaled.recall == doctest::Approx(*m.recall).epsilon(1e-12));
    CHECK(*scaled.specificity == doctest::Approx(*m.specificity).epsilon(1e-12));
    CHECK(*scaled.precision == doctest::Approx(*m.precision).epsilon(1e-12));
    CHECK(*scaled.accuracy == doctest::Approx(*m.accuracy).epsilon(1e-12));
  }
}

TEST_CASE("fold aggregation: mean and population variance") {
  const auto agg = aggregate_values({0.8, 0.9}, "recall");
  CHECK(agg.mean == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(agg.variance == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(agg.n_used == 2);
  CHECK(agg.n_excluded == 0);

  CHECK(aggregate_values({0.7}, "recall").variance == 0.0);
  CHECK(aggregate_values({0.6, 0.6, 0.6}, "recall").variance == 0.0);

  const auto sparse = aggregate_values({0.8, std::nullopt, 0.9}, "recall");
  CHECK(sparse.n_used == 2);
  CHECK(sparse.n_excluded == 1);
  CHECK(sparse.mean == doctest::Approx(0.85).epsilon(1e-12));

  CHECK(error_code([] {
          aggregate_values({std::nullopt, std::nullopt}, "recall");
        }) == "all_undefined");
}

TEST_CASE("fold aggregation is permutation invariant") {
  Rng rng(7);
  std::vector<std::optional<double>> values;
  for (int i = 0; i < 12; ++i) values.push_back(rng.uniform01());
  const auto base = aggregate_values(values, "m");
  std::vector<std::optional<double>> shuffled = values;
  rng.shuffle(shuffled);
  const auto agg = aggregate_values(shuffled, "m");
  CHECK(agg.mean == doctest::Approx(base.mean).epsilon(1e-12));
  CHECK(agg.variance == doctest::Approx(base.variance).epsilon(1e-12));
}

TEST_CASE("fold_aggregate covers the four metrics") {
  std::vector<Metrics> folds(2);
  folds[0] = metrics_of({.tp = 8, .fp = 2, .tn = 8, .fn = 2});
  folds[1] = metrics_of({.tp = 9, .fp = 1, .tn = 9, .fn = 1});
  const auto agg = fold_aggregate(folds);
  CHECK(agg.recall.mean == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(agg.recall.variance == doctest::Approx(0.0025).epsilon(1e-12));
  CHECK(agg.accuracy.mean == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(error_code([] { fold_aggregate({}); }) == "bad_params");
}

TEST_CASE("xai group evaluation") {
  auto vec = [](std::string_view d) { return PatternVector::from_digits(d); };

  SUBCASE("identity predictions score 1.0 everywhere") {
    const std::vector<PatternVector> sr = {vec("0000000"), vec("1000000"),
                                           vec("0100000"), vec("0010000")};
    const auto eval = xai_group_eval(sr, sr);
    for (const auto& g : eval.groups) {
      REQUIRE(g.accuracy.has_value());
      CHECK(*g.accuracy == 1.0);
    }
    CHECK(*eval.bcc_detection_metrics.accuracy == 1.0);
    // Group totals partition the samples.
    CHECK(eval.groups[0].total + eval.groups[1].total + eval.groups[2].total ==
          sr.size());
  }

  SUBCASE("PN-only accuracy 3/4") {
    const std::vector<PatternVector> sr(4, vec("1000000"));
    const std::vector<PatternVector> pred = {vec("1000000"), vec("1000000"),
                                             vec("1000000"), vec("0000000")};
    const auto eval = xai_group_eval(pred, sr);
    const auto& pn =
        eval.groups[static_cast<std::size_t>(DiagnosisGroup::PigmentNetworkOnly)];
    CHECK(pn.total == 4);
    CHECK(pn.correct == 3);
    CHECK(*pn.accuracy == doctest::Approx(0.75).epsilon(1e-12));
    // Empty groups are undefined, not zero.
    CHECK(!eval.groups[static_cast<std::size_t>(DiagnosisGroup::BccPattern)]
               .accuracy.has_value());
  }

  SUBCASE("length mismatch") {
    CHECK(error_code([&] {
            xai_group_eval({vec("0000000")}, {});
          }) == "length_mismatch");
  }
}

TEST_CASE("focal loss reference values") {
  // gamma = 0, alpha = 1 reduces to cross-entropy.
  CHECK(focal_loss(0.5, true, {1.0, 0.0}) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(focal_loss(0.9, true, {1.0, 2.0}) ==
        doctest::Approx(0.01 * -std::log(0.9)).epsilon(1e-9));
  CHECK(focal_loss(0.9, true, {1.0, 2.0}) ==
        doctest::Approx(1.0536051565782634e-3).epsilon(1e-9));

  for (double p : {0.05, 0.3, 0.7, 0.99}) {
    const double ce = -std::log(p);
    CHECK(focal_loss(p, true, {1.0, 0.0}) == doctest::Approx(ce).epsilon(1e-12));
    CHECK(focal_loss(1.0 - p, false, {1.0, 0.0}) ==
          doctest::Approx(ce).epsilon(1e-12));
  }

  CHECK(error_code([] { focal_loss(0.0, true); }) == "domain_error");
  CHECK(error_code([] { focal_loss(1.0, true); }) == "domain_error");
  CHECK(error_code([] { focal_loss(0.5, true, {0.0, 2.0}); }) == "bad_params");
  CHECK(error_code([] { focal_loss(0.5, true, {0.25, -1.0}); }) == "bad_params");
}

TEST_CASE("focal loss shape: nonnegative, decreasing in p_t, damped by gamma") {
  const FocalLossParams params{0.25, 2.0};
  double prev = focal_loss(0.01, true, params);
  for (double p = 0.02; p < 1.0 - 1e-9; p += 0.01) {
    const double cur = focal_loss(p, true, params);
    CHECK(cur >= 0.0);
    CHECK(cur < prev);
    prev = cur;
  }
  for (double p : {0.1, 0.5, 0.9}) {
    CHECK(focal_loss(p, true, {1.0, 2.0}) < focal_loss(p, true, {1.0, 1.0}));
    CHECK(focal_loss(p, true, {1.0, 1.0}) < focal_loss(p, true, {1.0, 0.0}));
  }
  // p_t -> 1 drives the loss to 0.
  CHECK(focal_loss(1.0 - 1e-12, true, params) ==
        doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("focal loss gradient matches finite differences") {
  const double h = 1e-6;
  for (double gamma : {0.0, 1.0, 2.0, 5.0}) {
    for (bool y : {false, true}) {
      for (double p : {0.1, 0.5, 0.9}) {
        const FocalLossParams params{0.25, gamma};
        const double fd = (focal_loss(p + h, y, params) -
                           focal_loss(p - h, y, params)) /
                          (2.0 * h);
        const double grad = focal_loss_grad(p, y, params);
        CHECK(std::abs(grad - fd) / std::max(1e-12, std::abs(fd)) < 1e-5);
      }
    }
  }
}

TEST_CASE("focal loss gradient closed forms") {
  // gamma=0, alpha=1, positive target: exactly -1/p.
  for (double p : {0.1, 0.25, 0.5, 0.9}) {
    CHECK(focal_loss_grad(p, true, {1.0, 0.0}) ==
          doctest::Approx(-1.0 / p).epsilon(1e-12));
  }
  // Negative-target gradient is the negated positive-target gradient at 1-p.
  for (double gamma : {0.0, 1.0, 2.0, 5.0}) {
    for (double p : {0.2, 0.5, 0.8}) {
      const FocalLossParams params{0.25, gamma};
      CHECK(focal_loss_grad(p, false, params) ==
            doctest::Approx(-focal_loss_grad(1.0 - p, true, params))
                .epsilon(1e-12));
    }
  }
}
