// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dermxai/error.hpp"

namespace dermxai {

namespace {

void check_aligned(const Heatmap& h, const Mask& m) {
  if (h.width != m.width || h.height != m.height) {
    throw_validation("dimension_mismatch",
                     "heatmap " + std::to_string(h.width) + "x" +
                         std::to_string(h.height) + " vs mask " +
                         std::to_string(m.width) + "x" +
                         std::to_string(m.height));
  }
  if (h.z.empty()) {
    throw_validation("empty_image", "heatmap has no pixels");
  }
}

int bin_of(double z, int bins) {
  int b = static_cast<int>(z * bins);
  return std::clamp(b, 0, bins - 1);
}

double region_mean(const Heatmap& h, const Mask& m, bool fg, std::uint64_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < h.z.size(); ++i) {
    if ((m.fg[i] != 0) == fg) sum += h.z[i];
  }
  return sum / static_cast<double>(n);
}

double region_std(const Heatmap& h, const Mask& m, bool fg, double mean,
                  std::uint64_t n) {
  double ss = 0.0;
  for (std::size_t i = 0; i < h.z.size(); ++i) {
    if ((m.fg[i] != 0) == fg) {
      const double d = h.z[i] - mean;
      ss += d * d;
    }
  }
  return std::sqrt(ss / static_cast<double>(n));
}

SaliencyGroupStats group_means(const std::vector<const SaliencyStats*>& members) {
  SaliencyGroupStats g;
  g.n = members.size();
  for (const auto* s : members) {
    g.intersection += s->intersection;
    g.mean_fg += s->region.mean_fg;
    g.mean_bg += s->region.mean_bg;
    g.std_fg += s->region.std_fg;
    g.std_bg += s->region.std_bg;
    g.dice += s->overlap.dice;
    g.jaccard += s->overlap.jaccard;
  }
  const double n = static_cast<double>(g.n);
  g.intersection /= n;
  g.mean_fg /= n;
  g.mean_bg /= n;
  g.std_fg /= n;
  g.std_bg /= n;
  g.dice /= n;
  g.jaccard /= n;
  return g;
}

}  // namespace

Heatmap normalize_heatmap(const Heatmap& raw) {
  if (raw.z.empty()) {
    throw_validation("empty_image", "cannot normalize an empty heatmap");
  }
  const auto [lo_it, hi_it] = std::minmax_element(raw.z.begin(), raw.z.end());
  const double lo = *lo_it, hi = *hi_it;
  Heatmap out;
  out.width = raw.width;
  out.height = raw.height;
  out.z.resize(raw.z.size());
  if (lo == hi) {
    std::fill(out.z.begin(), out.z.end(), 0.0);
    out.constant = true;
    return out;
  }
  const double scale = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < raw.z.size(); ++i) {
    out.z[i] = (raw.z[i] - lo) * scale;
  }
  return out;
}

Heatmap heatmap_from_gray(const GrayImage& img) {
  Heatmap h;
  h.width = img.width;
  h.height = img.height;
  h.z.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    h.z[i] = img.pixels[i] / 255.0;
  }
  return h;
}

Mask mask_from_gray(const GrayImage& img) {
  Mask m;
  m.width = img.width;
  m.height = img.height;
  m.fg.resize(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    m.fg[i] = img.pixels[i] > 127 ? 1 : 0;
  }
  return m;
}

Mask resample_nearest(const Mask& mask, int width, int height) {
  if (mask.fg.empty() || width <= 0 || height <= 0) {
    throw_validation("empty_image", "cannot resample an empty mask");
  }
  if (mask.width == width && mask.height == height) return mask;
  Mask out;
  out.width = width;
  out.height = height;
  out.fg.resize(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    const int sy = std::min<int>(
        mask.height - 1,
        static_cast<int>((y + 0.5) * mask.height / height));
    for (int x = 0; x < width; ++x) {
      const int sx = std::min<int>(
          mask.width - 1, static_cast<int>((x + 0.5) * mask.width / width));
      out.fg[static_cast<std::size_t>(y) * width + x] = mask.at(sx, sy) ? 1 : 0;
    }
  }
  return out;
}

ConditionalPdfs conditional_pdfs(const Heatmap& h, const Mask& m, int bins) {
  check_aligned(h, m);
  if (bins < 2) {
    throw_validation("bad_params",
                     "need at least 2 bins, got " + std::to_string(bins));
  }
  std::vector<std::uint64_t> count_fg(bins, 0), count_bg(bins, 0);
  std::uint64_t n_fg = 0, n_bg = 0;
  for (std::size_t i = 0; i < h.z.size(); ++i) {
    const int b = bin_of(h.z[i], bins);
    if (m.fg[i] != 0) {
      ++count_fg[b];
      ++n_fg;
    } else {
      ++count_bg[b];
      ++n_bg;
    }
  }
  if (n_fg == 0) throw_validation("empty_region", "mask has no Fg pixels");
  if (n_bg == 0) throw_validation("empty_region", "mask has no Bg pixels");

  ConditionalPdfs pdfs;
  pdfs.fg.bins = bins;
  pdfs.bg.bins = bins;
  pdfs.fg.density.resize(bins);
  pdfs.bg.density.resize(bins);
  for (int b = 0; b < bins; ++b) {
    pdfs.fg.density[b] = static_cast<double>(count_fg[b]) * bins /
                         static_cast<double>(n_fg);
    pdfs.bg.density[b] = static_cast<double>(count_bg[b]) * bins /
                         static_cast<double>(n_bg);
  }
  return pdfs;
}

RegionStats region_stats(const Heatmap& h, const Mask& m) {
  check_aligned(h, m);
  RegionStats st;
  for (std::uint8_t f : m.fg) f ? ++st.n_fg : ++st.n_bg;
  if (st.n_fg == 0) throw_validation("empty_region", "mask has no Fg pixels");
  if (st.n_bg == 0) throw_validation("empty_region", "mask has no Bg pixels");
  st.mean_fg = region_mean(h, m, true, st.n_fg);
  st.mean_bg = region_mean(h, m, false, st.n_bg);
  st.std_fg = region_std(h, m, true, st.mean_fg, st.n_fg);
  st.std_bg = region_std(h, m, false, st.mean_bg, st.n_bg);
  return st;
}

double pdf_intersection(const Pdf& fg, const Pdf& bg) {
  if (fg.bins != bg.bins || fg.bins < 2 ||
      fg.density.size() != bg.density.size()) {
    throw_validation("grid_mismatch",
                     "pdf bin grids differ: " + std::to_string(fg.bins) +
                         " vs " + std::to_string(bg.bins));
  }
  auto check_mass = [](const Pdf& p, const char* which) {
    double mass = 0.0;
    for (double d : p.density) mass += d * p.bin_width();
    if (std::abs(mass - 1.0) > 1e-9) {
      throw_validation("grid_mismatch", std::string(which) +
                                            " density does not integrate to 1");
    }
  };
  check_mass(fg, "fg");
  check_mass(bg, "bg");
  double area = 0.0;
  for (int b = 0; b < fg.bins; ++b) {
    area += std::min(fg.density[b], bg.density[b]) * fg.bin_width();
  }
  return area;
}

OverlapCoefficients dice_jaccard(const Heatmap& h, const Mask& m,
                                 double threshold) {
  check_aligned(h, m);
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw_validation("bad_params", "threshold must lie in [0,1]");
  }
  std::uint64_t a = 0, b = 0, both = 0;
  for (std::size_t i = 0; i < h.z.size(); ++i) {
    const bool in_a = h.z[i] >= threshold;
    const bool in_b = m.fg[i] != 0;
    if (in_a) ++a;
    if (in_b) ++b;
    if (in_a && in_b) ++both;
  }
  OverlapCoefficients out;
  if (a + b == 0) {
    out.dice = 1.0;
    out.jaccard = 1.0;
    return out;
  }
  out.dice = 2.0 * static_cast<double>(both) / static_cast<double>(a + b);
  out.jaccard =
      static_cast<double>(both) / static_cast<double>(a + b - both);
  return out;
}

SaliencyStats analyze_pair(const Heatmap& raw, const Mask& mask, int bins,
                           double threshold) {
  Mask aligned = mask;
  if (mask.width != raw.width || mask.height != raw.height) {
    aligned = resample_nearest(mask, raw.width, raw.height);
  }
  const Heatmap norm = normalize_heatmap(raw);
  SaliencyStats stats;
  stats.constant_heatmap = norm.constant;
  stats.region = region_stats(norm, aligned);
  ConditionalPdfs pdfs = conditional_pdfs(norm, aligned, bins);
  stats.pdf_fg = std::move(pdfs.fg);
  stats.pdf_bg = std::move(pdfs.bg);
  stats.intersection = pdf_intersection(stats.pdf_fg, stats.pdf_bg);
  stats.overlap = dice_jaccard(norm, aligned, threshold);
  return stats;
}

SaliencyBatchReport batch_saliency(const std::vector<SaliencyPairSpec>& pairs,
                                   int bins, double threshold) {
  SaliencyBatchReport report;
  report.bins = bins;
  report.threshold = threshold;
  if (pairs.empty()) {
    report.warning = "no heatmap/mask pairs supplied; report is empty";
    return report;
  }
  std::vector<const SaliencyStats*> correct_stats, incorrect_stats;
  report.pairs.reserve(pairs.size());
  for (const auto& spec : pairs) {
    SaliencyPairResult res;
    res.spec = spec;
    try {
      const Heatmap raw = heatmap_from_gray(read_pgm(spec.heatmap_path));
      const Mask mask = mask_from_gray(read_pgm(spec.mask_path));
      res.stats = analyze_pair(raw, mask, bins, threshold);
      res.ok = true;
    } catch (const Error& e) {
      res.error = e.what();
      ++report.n_failed;
    }
    report.pairs.push_back(std::move(res));
  }
  for (const auto& res : report.pairs) {
    if (!res.ok) continue;
    (res.spec.correct ? correct_stats : incorrect_stats).push_back(&res.stats);
  }
  if (!correct_stats.empty()) report.correct = group_means(correct_stats);
  if (!incorrect_stats.empty()) report.incorrect = group_means(incorrect_stats);
  return report;
}

}  // namespace dermxai
