// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/consensus.hpp"

#include <algorithm>
#include <cmath>

#include "dermxai/error.hpp"

namespace dermxai {

namespace {

// Flattened view of one pattern's annotation column: per image, the raters
// who annotated it and the reported bit. Index order is canonical (sorted
// images, sorted raters within an image), so sums are permutation-invariant.
struct PatternColumn {
  std::vector<std::vector<std::pair<std::size_t, bool>>> obs;  // [image] -> (rater, bit)
};

PatternColumn column_of(const AnnotationDataset& ds, std::size_t pattern) {
  PatternColumn col;
  col.obs.resize(ds.n_images());
  for (std::size_t i = 0; i < ds.n_images(); ++i) {
    for (const auto& rec : ds.records_for_image(i)) {
      col.obs[i].emplace_back(ds.rater_index(rec.rater_id),
                              rec.labels.bits[pattern]);
    }
  }
  return col;
}

struct PatternEmState {
  std::vector<double> posterior;                    // per image
  std::vector<std::array<std::array<double, 2>, 2>> confusion;  // per rater
  double prior = 0.5;
  std::vector<double> trace;
  int iterations = 0;
  bool converged = false;
};

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// One pattern's binary Dawid-Skene EM.
PatternEmState run_pattern_em(const PatternColumn& col, std::size_t n_raters,
                              const EmConfig& cfg) {
  PatternEmState st;
  const std::size_t n_images = col.obs.size();
  st.posterior.resize(n_images);
  st.confusion.assign(n_raters, {});

  // Soft majority-vote start: strict majority pins the posterior, an exact
  // tie leaves it at 0.5.
  for (std::size_t i = 0; i < n_images; ++i) {
    std::size_t present = 0;
    for (const auto& [r, bit] : col.obs[i]) present += bit ? 1 : 0;
    const std::size_t votes = col.obs[i].size();
    if (2 * present > votes) {
      st.posterior[i] = 1.0;
    } else if (2 * present < votes) {
      st.posterior[i] = 0.0;
    } else {
      st.posterior[i] = 0.5;
    }
  }

  const double eps = cfg.smoothing;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // M-step: smoothed prior and per-rater confusion rows from the current
    // posterior weights.
    double prior_num = eps;
    for (double q : st.posterior) prior_num += q;
    st.prior = prior_num / (2.0 * eps + static_cast<double>(n_images));

    std::vector<std::array<std::array<double, 2>, 2>> counts(
        n_raters, {{{0.0, 0.0}, {0.0, 0.0}}});
    for (std::size_t i = 0; i < n_images; ++i) {
      const double q = st.posterior[i];
      for (const auto& [r, bit] : col.obs[i]) {
        counts[r][1][bit ? 1 : 0] += q;
        counts[r][0][bit ? 1 : 0] += 1.0 - q;
      }
    }
    for (std::size_t r = 0; r < n_raters; ++r) {
      for (int t = 0; t < 2; ++t) {
        const double row = counts[r][t][0] + counts[r][t][1];
        st.confusion[r][t][0] = (eps + counts[r][t][0]) / (2.0 * eps + row);
        st.confusion[r][t][1] = (eps + counts[r][t][1]) / (2.0 * eps + row);
      }
    }

    // E-step in log space, accumulating the marginal log-likelihood of the
    // just-fitted parameters along the way.
    double loglik = 0.0;
    const double log_prior1 = std::log(st.prior);
    const double log_prior0 = std::log(1.0 - st.prior);
    for (std::size_t i = 0; i < n_images; ++i) {
      double l1 = log_prior1, l0 = log_prior0;
      for (const auto& [r, bit] : col.obs[i]) {
        l1 += std::log(st.confusion[r][1][bit ? 1 : 0]);
        l0 += std::log(st.confusion[r][0][bit ? 1 : 0]);
      }
      loglik += log_sum_exp(l0, l1);
      st.posterior[i] = 1.0 / (1.0 + std::exp(l0 - l1));
    }

    st.trace.push_back(loglik);
    st.iterations = iter + 1;
    if (iter > 0 &&
        std::abs(st.trace[iter] - st.trace[iter - 1]) < cfg.tol) {
      st.converged = true;
      break;
    }
  }
  return st;
}

}  // namespace

std::map<std::string, PatternVector> majority_vote(const AnnotationDataset& ds) {
  std::map<std::string, PatternVector> out;
  for (std::size_t i = 0; i < ds.n_images(); ++i) {
    const auto recs = ds.records_for_image(i);
    PatternVector v;
    for (std::size_t p = 0; p < kPatternCount; ++p) {
      std::size_t present = 0;
      for (const auto& rec : recs) present += rec.labels.bits[p] ? 1 : 0;
      v.bits[p] = 2 * present >= recs.size();  // tie counts as present
    }
    out.emplace(ds.images()[i], v);
  }
  return out;
}

double log_likelihood(const AnnotationDataset& ds,
                      const std::map<std::string, RaterConfusion>& confusions,
                      const ClassPrior& priors) {
  double total = 0.0;
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    const double log_prior1 = std::log(priors.p_present[p]);
    const double log_prior0 = std::log(1.0 - priors.p_present[p]);
    for (std::size_t i = 0; i < ds.n_images(); ++i) {
      double l1 = log_prior1, l0 = log_prior0;
      for (const auto& rec : ds.records_for_image(i)) {
        auto it = confusions.find(rec.rater_id);
        if (it == confusions.end()) {
          throw_validation("unknown_rater",
                           "no confusion matrix for rater: " + rec.rater_id);
        }
        const int y = rec.labels.bits[p] ? 1 : 0;
        l1 += std::log(it->second.m[p][1][y]);
        l0 += std::log(it->second.m[p][0][y]);
      }
      total += log_sum_exp(l0, l1);
    }
  }
  return total;
}

ConsensusResult infer_sr(const AnnotationDataset& ds, const EmConfig& cfg) {
  if (cfg.max_iters < 1 || !(cfg.tol > 0.0) || !(cfg.smoothing > 0.0)) {
    throw_validation("bad_params",
                     "EM needs max_iters >= 1, tol > 0 and smoothing > 0");
  }
  if (ds.records().empty()) {
    throw_validation("empty_pattern_column",
                     "pattern '" + std::string(kPatternCodes[0]) +
                         "' has no annotations");
  }

  ConsensusResult res;
  res.images = ds.images();
  res.posteriors.assign(ds.n_images(), {});
  res.hard_labels.assign(ds.n_images(), PatternVector{});
  for (const auto& rater : ds.raters()) res.confusions[rater] = RaterConfusion{};

  // The seven patterns are independent binary problems.
  std::array<PatternEmState, kPatternCount> states;
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    states[p] = run_pattern_em(column_of(ds, p), ds.n_raters(), cfg);
  }

  for (std::size_t p = 0; p < kPatternCount; ++p) {
    const auto& st = states[p];
    res.priors.p_present[p] = st.prior;
    res.pattern_traces[p] = st.trace;
    res.pattern_iterations[p] = st.iterations;
    res.pattern_converged[p] = st.converged;
    for (std::size_t r = 0; r < ds.n_raters(); ++r) {
      res.confusions[ds.raters()[r]].m[p] = st.confusion[r];
    }
    for (std::size_t i = 0; i < ds.n_images(); ++i) {
      res.posteriors[i][p] = st.posterior[i];
      res.hard_labels[i].bits[p] = st.posterior[i] >= 0.5;  // tie -> present
    }
    res.iterations = std::max(res.iterations, st.iterations);
  }
  res.converged =
      std::all_of(res.pattern_converged.begin(), res.pattern_converged.end(),
                  [](bool c) { return c; });

  // Combined trace: per-pattern traces aligned per iteration, shorter ones
  // padded with their final value so the sum stays non-decreasing.
  res.loglik_trace.resize(static_cast<std::size_t>(res.iterations), 0.0);
  for (std::size_t p = 0; p < kPatternCount; ++p) {
    const auto& tr = states[p].trace;
    for (std::size_t t = 0; t < res.loglik_trace.size(); ++t) {
      res.loglik_trace[t] += tr[std::min(t, tr.size() - 1)];
    }
  }
  return res;
}

}  // namespace dermxai
