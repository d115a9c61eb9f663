// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/folds.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <functional>

#include "dermxai/error.hpp"
#include "dermxai/rng.hpp"

using namespace dermxai;

namespace {

std::map<std::string, PatternVector> make_labels(
    int n, const std::function<PatternVector(int)>& gen) {
  std::map<std::string, PatternVector> labels;
  for (int i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof(id), "img%04d", i);
    labels.emplace(id, gen(i));
  }
  return labels;
}

std::vector<std::uint64_t> positives_per_fold(const FoldAssignment& fa,
                                              const std::map<std::string, PatternVector>& labels,
                                              std::size_t pattern) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(fa.k), 0);
  for (const auto& [id, fold] : fa.assignment) {
    if (labels.at(id).bits[pattern]) ++counts[static_cast<std::size_t>(fold)];
  }
  return counts;
}

}  // namespace

TEST_CASE("identical labels split into equal folds") {
  const auto labels = make_labels(10, [](int) {
    return PatternVector::from_digits("0100000");
  });
  const auto fa = stratified_kfold(labels, 5, 1);
  std::vector<int> sizes(5, 0);
  for (const auto& [id, fold] : fa.assignment) ++sizes[fold];
  for (int s : sizes) CHECK(s == 2);
  const auto pos = positives_per_fold(fa, labels, 1);
  for (auto c : pos) CHECK(c == 2);
}

TEST_CASE("20% prevalence spreads to 4 positives per fold") {
  const auto labels = make_labels(100, [](int i) {
    PatternVector v;
    v.set(Pattern::Ulceration, i % 5 == 0);
    return v;
  });
  const auto fa = stratified_kfold(labels, 5, 42);
  const auto pos = positives_per_fold(fa, labels, 1);
  for (auto c : pos) {
    CHECK(c >= 3);
    CHECK(c <= 5);
  }
  const auto report = fold_balance_report(fa, labels);
  CHECK(report.max_abs_deviation[1] <= 0.05);
}

TEST_CASE("error paths") {
  const auto labels = make_labels(3, [](int) { return PatternVector{}; });
  CHECK_THROWS_WITH_AS(stratified_kfold(labels, 5, 0),
                       doctest::Contains("cannot split"), Error);
  try {
    stratified_kfold(labels, 5, 0);
  } catch (const Error& e) {
    CHECK(e.code() == "too_few_samples");
  }
  try {
    stratified_kfold(labels, 1, 0);
  } catch (const Error& e) {
    CHECK(e.code() == "bad_params");
  }
}

TEST_CASE("partition and determinism") {
  Rng rng(11);
  const auto labels = make_labels(57, [&rng](int) {
    PatternVector v;
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      v.bits[p] = rng.bernoulli(0.3);
    }
    return v;
  });

  const auto a = stratified_kfold(labels, 4, 9);
  const auto b = stratified_kfold(labels, 4, 9);
  CHECK(a.assignment == b.assignment);

  // Every image appears exactly once with a fold in range, and no fold is
  // empty.
  CHECK(a.assignment.size() == labels.size());
  std::vector<int> sizes(4, 0);
  for (const auto& [id, fold] : a.assignment) {
    CHECK(labels.count(id) == 1);
    REQUIRE(fold >= 0);
    REQUIRE(fold < 4);
    ++sizes[fold];
  }
  for (int s : sizes) CHECK(s > 0);
  // Sizes as equal as possible: 57 = 4*14 + 1.
  CHECK(*std::max_element(sizes.begin(), sizes.end()) -
            *std::min_element(sizes.begin(), sizes.end()) <=
        1);

  const auto c = stratified_kfold(labels, 4, 10);
  CHECK(c.assignment != a.assignment);  // overwhelmingly likely
}

TEST_CASE("prevalence balance over random label matrices") {
  Rng rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    std::array<double, kPatternCount> rates{};
    for (auto& r : rates) r = rng.uniform(0.05, 0.6);
    const auto labels = make_labels(120, [&](int) {
      PatternVector v;
      for (std::size_t p = 0; p < kPatternCount; ++p) {
        v.bits[p] = rng.bernoulli(rates[p]);
      }
      return v;
    });
    const int k = 5;
    const auto fa = stratified_kfold(labels, k, trial);
    const auto report = fold_balance_report(fa, labels);
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      std::uint64_t total = 0;
      for (auto c : report.positives[p]) total += c;
      if (total >= static_cast<std::uint64_t>(k)) {
        CHECK(report.max_abs_deviation[p] <= 1.0 / k);
      }
    }
  }
}

TEST_CASE("balance report") {
  SUBCASE("perfect split has zero deviation") {
    const auto labels = make_labels(10, [](int i) {
      PatternVector v;
      v.set(Pattern::Ulceration, i % 2 == 0);
      return v;
    });
    const auto fa = stratified_kfold(labels, 5, 3);
    const auto report = fold_balance_report(fa, labels);
    CHECK(report.max_abs_deviation[1] == 0.0);
    CHECK(report.global_prevalence[1] == doctest::Approx(0.5));
  }

  SUBCASE("single-image folds are legal") {
    const auto labels = make_labels(4, [](int i) {
      PatternVector v;
      v.set(Pattern::Ulceration, i < 2);
      return v;
    });
    const auto fa = stratified_kfold(labels, 4, 0);
    const auto report = fold_balance_report(fa, labels);
    for (double prev : report.prevalence[1]) {
      CHECK((prev == 0.0 || prev == 1.0));
    }
  }

  SUBCASE("unknown image is rejected") {
    FoldAssignment fa;
    fa.k = 2;
    fa.assignment = {{"a", 0}, {"b", 1}};
    std::map<std::string, PatternVector> labels = {{"a", PatternVector{}}};
    try {
      fold_balance_report(fa, labels);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == "unknown_image");
    }
  }
}
