// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// Agreement statistics between a class-activation heatmap and an expert
// segmentation mask: conditional densities of the normalized activation
// inside (Fg) and outside (Bg) the mask, their overlap area, and auxiliary
// threshold-based DICE/Jaccard coefficients.

#ifndef DERMXAI_SALIENCY_HPP_
#define DERMXAI_SALIENCY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dermxai/image.hpp"

namespace dermxai {

struct Heatmap {
  int width = 0;
  int height = 0;
  std::vector<double> z;  // row-major activation values
  bool constant = false;  // set by normalize_heatmap on degenerate input

  double at(int x, int y) const {
    return z[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t size() const { return z.size(); }
};

struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> fg;  // nonzero = foreground

  bool at(int x, int y) const {
    return fg[static_cast<std::size_t>(y) * width + x] != 0;
  }
};

/// z in [0,1] via min-max scaling; a constant map becomes all zeros with the
/// `constant` flag set. Error: empty_image.
Heatmap normalize_heatmap(const Heatmap& raw);

/// Grayscale pixel value / 255. Callers normalize afterwards.
Heatmap heatmap_from_gray(const GrayImage& img);

/// Foreground where the pixel exceeds 50% of full scale.
Mask mask_from_gray(const GrayImage& img);

/// Nearest-neighbor resample to the given size (used to align expert masks
/// drawn at image resolution with upsampled network heatmaps).
Mask resample_nearest(const Mask& mask, int width, int height);

/// Histogram density estimate on [0,1] with equal-width bins; integrates
/// to 1 (sum of density * bin width).
struct Pdf {
  int bins = 0;
  std::vector<double> density;

  double bin_width() const { return 1.0 / bins; }
  double bin_center(int b) const { return (b + 0.5) * bin_width(); }
};

struct ConditionalPdfs {
  Pdf fg;
  Pdf bg;
};

/// Densities of heatmap values over Fg and Bg pixels. Errors:
/// dimension_mismatch, empty_region, bad_params (bins < 2).
ConditionalPdfs conditional_pdfs(const Heatmap& h, const Mask& m, int bins);

struct RegionStats {
  double mean_fg = 0.0;
  double mean_bg = 0.0;
  double std_fg = 0.0;  // population standard deviation
  double std_bg = 0.0;
  std::uint64_t n_fg = 0;
  std::uint64_t n_bg = 0;
};

/// Mean and population std of the heatmap over each region. Errors:
/// dimension_mismatch, empty_region.
RegionStats region_stats(const Heatmap& h, const Mask& m);

/// Overlap area sum(min(fg, bg)) * bin width, in [0,1]. 1 means the two
/// densities are indistinguishable, 0 that they have disjoint support.
/// Error: grid_mismatch.
double pdf_intersection(const Pdf& fg, const Pdf& bg);

struct OverlapCoefficients {
  double dice = 0.0;
  double jaccard = 0.0;
};

/// Binarizes the heatmap at `threshold` (z >= threshold) and compares with
/// the mask. Both-empty convention: dice = jaccard = 1.
OverlapCoefficients dice_jaccard(const Heatmap& h, const Mask& m,
                                 double threshold);

struct SaliencyStats {
  RegionStats region;
  Pdf pdf_fg;
  Pdf pdf_bg;
  double intersection = 0.0;
  OverlapCoefficients overlap;  // auxiliary, threshold-based
  bool constant_heatmap = false;
};

/// Full per-pair analysis of a raw (unnormalized) heatmap against a mask.
/// The mask is resampled to the heatmap grid when sizes differ.
SaliencyStats analyze_pair(const Heatmap& raw, const Mask& mask, int bins,
                           double threshold = 0.5);

struct SaliencyPairSpec {
  std::string image_id;
  std::string heatmap_path;
  std::string mask_path;
  bool correct = false;  // was the model prediction for this image correct
};

struct SaliencyPairResult {
  SaliencyPairSpec spec;
  bool ok = false;
  std::string error;  // failure reason when !ok
  SaliencyStats stats;
};

/// Means of the per-pair statistics over one prediction-outcome group.
struct SaliencyGroupStats {
  std::uint64_t n = 0;
  double intersection = 0.0;
  double mean_fg = 0.0;
  double mean_bg = 0.0;
  double std_fg = 0.0;
  double std_bg = 0.0;
  double dice = 0.0;
  double jaccard = 0.0;
};

struct SaliencyBatchReport {
  int bins = 0;
  double threshold = 0.5;
  std::vector<SaliencyPairResult> pairs;
  std::optional<SaliencyGroupStats> correct;
  std::optional<SaliencyGroupStats> incorrect;
  std::uint64_t n_failed = 0;
  std::string warning;  // e.g. empty input
};

/// Loads every pair from disk (8-bit PGM), analyzes it, and aggregates group
/// means over correct and incorrect predictions. Per-pair failures are
/// collected and excluded from the aggregates.
SaliencyBatchReport batch_saliency(const std::vector<SaliencyPairSpec>& pairs,
                                   int bins, double threshold = 0.5);

}  // namespace dermxai

#endif  // DERMXAI_SALIENCY_HPP_
