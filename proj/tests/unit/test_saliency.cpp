// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/saliency.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "dermxai/error.hpp"
#include "dermxai/rng.hpp"

using namespace dermxai;

namespace {

Heatmap make_heatmap(int w, int h, const std::vector<double>& z) {
  Heatmap hm;
  hm.width = w;
  hm.height = h;
  hm.z = z;
  return hm;
}

Mask make_mask(int w, int h, const std::vector<int>& fg) {
  Mask m;
  m.width = w;
  m.height = h;
  m.fg.assign(fg.begin(), fg.end());
  return m;
}

// Independent naive tally, written separately from the library path: walks
// pixels in reverse, accumulates its own sums and histogram counts.
struct NaiveStats {
  double mean_fg = 0, mean_bg = 0, std_fg = 0, std_bg = 0;
  std::vector<double> pdf_fg, pdf_bg;
  double intersection = 0;
};

NaiveStats naive_stats(const Heatmap& h, const Mask& m, int bins) {
  NaiveStats out;
  double sum_fg = 0, sum_bg = 0;
  long n_fg = 0, n_bg = 0;
  for (std::size_t i = h.z.size(); i-- > 0;) {
    if (m.fg[i]) {
      sum_fg += h.z[i];
      ++n_fg;
    } else {
      sum_bg += h.z[i];
      ++n_bg;
    }
  }
  out.mean_fg = sum_fg / n_fg;
  out.mean_bg = sum_bg / n_bg;
  double ss_fg = 0, ss_bg = 0;
  std::vector<long> count_fg(bins, 0), count_bg(bins, 0);
  for (std::size_t i = h.z.size(); i-- > 0;) {
    int b = static_cast<int>(h.z[i] * bins);
    if (b >= bins) b = bins - 1;
    if (b < 0) b = 0;
    if (m.fg[i]) {
      ss_fg += (h.z[i] - out.mean_fg) * (h.z[i] - out.mean_fg);
      ++count_fg[b];
    } else {
      ss_bg += (h.z[i] - out.mean_bg) * (h.z[i] - out.mean_bg);
      ++count_bg[b];
    }
  }
  out.std_fg = std::sqrt(ss_fg / n_fg);
  out.std_bg = std::sqrt(ss_bg / n_bg);
  const double width = 1.0 / bins;
  out.pdf_fg.resize(bins);
  out.pdf_bg.resize(bins);
  for (int b = 0; b < bins; ++b) {
    out.pdf_fg[b] = count_fg[b] / (n_fg * width);
    out.pdf_bg[b] = count_bg[b] / (n_bg * width);
    out.intersection += std::min(out.pdf_fg[b], out.pdf_bg[b]) * width;
  }
  return out;
}

std::pair<Heatmap, Mask> random_pair(Rng& rng, int max_side) {
  const int w = 2 + static_cast<int>(rng.uniform_index(max_side - 1));
  const int h = 2 + static_cast<int>(rng.uniform_index(max_side - 1));
  Heatmap hm;
  hm.width = w;
  hm.height = h;
  hm.z.resize(static_cast<std::size_t>(w) * h);
  for (auto& z : hm.z) z = rng.uniform01();
  Mask m;
  m.width = w;
  m.height = h;
  m.fg.resize(hm.z.size());
  // Guarantee both regions are non-empty.
  for (;;) {
    long fg = 0;
    for (auto& f : m.fg) {
      f = rng.bernoulli(0.4) ? 1 : 0;
      fg += f;
    }
    if (fg > 0 && fg < static_cast<long>(m.fg.size())) break;
  }
  return {hm, m};
}

}  // namespace

TEST_CASE("min-max normalization") {
  const Heatmap n = normalize_heatmap(make_heatmap(3, 1, {2, 4, 6}));
  CHECK(n.z[0] == 0.0);
  CHECK(n.z[1] == 0.5);
  CHECK(n.z[2] == 1.0);
  CHECK(!n.constant);

  const Heatmap c = normalize_heatmap(make_heatmap(2, 2, {5, 5, 5, 5}));
  for (double z : c.z) CHECK(z == 0.0);
  CHECK(c.constant);

  // Idempotent on an already normalized map.
  const Heatmap again = normalize_heatmap(n);
  CHECK(again.z == n.z);

  CHECK_THROWS_AS(normalize_heatmap(Heatmap{}), Error);
}

TEST_CASE("conditional pdfs on a separated heatmap") {
  // Heatmap equals the mask: Fg mass lands in the last bin, Bg in the first.
  const Mask m = make_mask(4, 2, {1, 1, 0, 0, 1, 0, 0, 0});
  Heatmap h = make_heatmap(4, 2, {1, 1, 0, 0, 1, 0, 0, 0});
  const auto pdfs = conditional_pdfs(h, m, 10);
  CHECK(pdfs.fg.density[9] == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(pdfs.bg.density[0] == doctest::Approx(10.0).epsilon(1e-12));
  for (int b = 1; b < 9; ++b) {
    CHECK(pdfs.fg.density[b] == 0.0);
    CHECK(pdfs.bg.density[b] == 0.0);
  }
  CHECK(pdf_intersection(pdfs.fg, pdfs.bg) == 0.0);
}

TEST_CASE("empty regions and misaligned inputs are rejected") {
  const Heatmap h = make_heatmap(2, 1, {0.5, 0.7});
  try {
    conditional_pdfs(h, make_mask(2, 1, {1, 1}), 8);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "empty_region");
  }
  try {
    conditional_pdfs(h, make_mask(1, 1, {1}), 8);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "dimension_mismatch");
  }
  try {
    conditional_pdfs(h, make_mask(2, 1, {1, 0}), 1);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "bad_params");
  }
}

TEST_CASE("region stats on trivial maps") {
  const Mask m = make_mask(2, 2, {1, 0, 0, 0});
  const Heatmap focus = make_heatmap(2, 2, {1, 0, 0, 0});
  const RegionStats st = region_stats(focus, m);
  CHECK(st.mean_fg == 1.0);
  CHECK(st.mean_bg == 0.0);
  CHECK(st.std_fg == 0.0);
  CHECK(st.std_bg == 0.0);
  CHECK(st.n_fg + st.n_bg == 4);

  const Heatmap flat = make_heatmap(2, 2, {0.5, 0.5, 0.5, 0.5});
  const RegionStats uninformative = region_stats(flat, m);
  CHECK(uninformative.mean_fg == 0.5);
  CHECK(uninformative.mean_bg == 0.5);
}

TEST_CASE("pdf intersection analytic fixtures") {
  const int bins = 64;
  Pdf uniform_full{bins, std::vector<double>(bins, 1.0)};
  CHECK(pdf_intersection(uniform_full, uniform_full) ==
        doctest::Approx(1.0).epsilon(1e-9));

  // Uniform on [0,1] vs uniform on [0,0.5] (density 2): overlap area 0.5.
  Pdf half{bins, std::vector<double>(bins, 0.0)};
  for (int b = 0; b < bins / 2; ++b) half.density[b] = 2.0;
  CHECK(pdf_intersection(uniform_full, half) ==
        doctest::Approx(0.5).epsilon(1e-9));

  Pdf low{bins, std::vector<double>(bins, 0.0)};
  Pdf high{bins, std::vector<double>(bins, 0.0)};
  for (int b = 0; b < bins / 2; ++b) low.density[b] = 2.0;
  for (int b = bins / 2; b < bins; ++b) high.density[b] = 2.0;
  CHECK(pdf_intersection(low, high) == 0.0);

  Pdf other{32, std::vector<double>(32, 1.0)};
  try {
    pdf_intersection(uniform_full, other);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == "grid_mismatch");
  }
}

TEST_CASE("dice and jaccard") {
  const Mask m = make_mask(2, 2, {1, 1, 0, 0});
  const Heatmap match = make_heatmap(2, 2, {1, 1, 0, 0});
  const auto ideal = dice_jaccard(match, m, 0.5);
  CHECK(ideal.dice == 1.0);
  CHECK(ideal.jaccard == 1.0);

  const Heatmap disjoint = make_heatmap(2, 2, {0, 0, 1, 1});
  const auto none = dice_jaccard(disjoint, m, 0.5);
  CHECK(none.dice == 0.0);
  CHECK(none.jaccard == 0.0);

  // A is half of B and contained in it: jaccard 1/2, dice 2/3.
  const Mask big = make_mask(4, 1, {1, 1, 0, 0});
  const Heatmap small = make_heatmap(4, 1, {1, 0, 0, 0});
  const auto sub = dice_jaccard(small, big, 0.5);
  CHECK(sub.jaccard == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sub.dice == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // Both sides empty.
  const Mask empty = make_mask(2, 1, {0, 0});
  const Heatmap zero = make_heatmap(2, 1, {0, 0});
  const auto both_empty = dice_jaccard(zero, empty, 0.5);
  CHECK(both_empty.dice == 1.0);
  CHECK(both_empty.jaccard == 1.0);
}

TEST_CASE("random pairs match the naive oracle within 1e-12") {
  Rng rng(314);
  const int bins = 64;
  for (int trial = 0; trial < 50; ++trial) {
    const auto [h, m] = random_pair(rng, 16);
    const auto naive = naive_stats(h, m, bins);

    const RegionStats st = region_stats(h, m);
    CHECK(st.mean_fg == doctest::Approx(naive.mean_fg).epsilon(1e-12));
    CHECK(st.mean_bg == doctest::Approx(naive.mean_bg).epsilon(1e-12));
    CHECK(st.std_fg == doctest::Approx(naive.std_fg).epsilon(1e-12));
    CHECK(st.std_bg == doctest::Approx(naive.std_bg).epsilon(1e-12));

    const auto pdfs = conditional_pdfs(h, m, bins);
    for (int b = 0; b < bins; ++b) {
      CHECK(pdfs.fg.density[b] ==
            doctest::Approx(naive.pdf_fg[b]).epsilon(1e-12));
      CHECK(pdfs.bg.density[b] ==
            doctest::Approx(naive.pdf_bg[b]).epsilon(1e-12));
    }
    const double inter = pdf_intersection(pdfs.fg, pdfs.bg);
    CHECK(inter == doctest::Approx(naive.intersection).epsilon(1e-12));
    CHECK(inter >= 0.0);
    CHECK(inter <= 1.0);

    const auto overlap = dice_jaccard(h, m, 0.5);
    CHECK(overlap.dice >= overlap.jaccard);
  }
}

TEST_CASE("swapping Fg and Bg swaps the statistics") {
  Rng rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    const auto [h, m] = random_pair(rng, 12);
    Mask inverted = m;
    for (auto& f : inverted.fg) f = f ? 0 : 1;

    const RegionStats a = region_stats(h, m);
    const RegionStats b = region_stats(h, inverted);
    CHECK(a.mean_fg == doctest::Approx(b.mean_bg).epsilon(1e-12));
    CHECK(a.std_fg == doctest::Approx(b.std_bg).epsilon(1e-12));
    CHECK(a.n_fg == b.n_bg);

    const auto pdfs_a = conditional_pdfs(h, m, 32);
    const auto pdfs_b = conditional_pdfs(h, inverted, 32);
    CHECK(pdf_intersection(pdfs_a.fg, pdfs_a.bg) ==
          doctest::Approx(pdf_intersection(pdfs_b.fg, pdfs_b.bg))
              .epsilon(1e-12));
  }
}

TEST_CASE("intersection is invariant to affine rescaling of the raw map") {
  Rng rng(16180);
  const auto [h, m] = random_pair(rng, 12);
  const auto base = analyze_pair(h, m, 32);
  Heatmap scaled = h;
  for (auto& z : scaled.z) z = 3.5 * z + 11.0;
  const auto rescaled = analyze_pair(scaled, m, 32);
  CHECK(rescaled.intersection ==
        doctest::Approx(base.intersection).epsilon(1e-12));
  CHECK(rescaled.region.mean_fg ==
        doctest::Approx(base.region.mean_fg).epsilon(1e-12));
}

TEST_CASE("mask resampling aligns sizes") {
  // 2x2 mask upsampled to 4x4 replicates each cell into a 2x2 block.
  const Mask m = make_mask(2, 2, {1, 0, 0, 1});
  const Mask up = resample_nearest(m, 4, 4);
  CHECK(up.at(0, 0));
  CHECK(up.at(1, 1));
  CHECK(!up.at(2, 0));
  CHECK(!up.at(3, 1));
  CHECK(up.at(2, 2));
  CHECK(up.at(3, 3));
  CHECK(!up.at(0, 3));

  // analyze_pair accepts mismatched sizes by resampling the mask.
  Heatmap h = make_heatmap(4, 4, std::vector<double>(16, 0.0));
  h.z[0] = 1.0;
  const auto stats = analyze_pair(h, m, 8);
  CHECK(stats.region.n_fg == 8);
  CHECK(stats.region.n_bg == 8);
}

TEST_CASE("batch saliency aggregates per-group means") {
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / "dermxai_saliency_batch_test";
  fs::create_directories(dir);

  // Perfect-focus pair: heatmap equals mask.
  GrayImage gray;
  gray.width = 4;
  gray.height = 4;
  gray.pixels.assign(16, 0);
  for (int i = 0; i < 4; ++i) gray.pixels[i] = 255;
  write_pgm(dir / "heat.pgm", gray);
  write_pgm(dir / "mask.pgm", gray);

  std::vector<SaliencyPairSpec> pairs(2);
  for (int i = 0; i < 2; ++i) {
    pairs[i].image_id = "img" + std::to_string(i);
    pairs[i].heatmap_path = (dir / "heat.pgm").string();
    pairs[i].mask_path = (dir / "mask.pgm").string();
    pairs[i].correct = true;
  }
  const auto report = batch_saliency(pairs, 16);
  REQUIRE(report.correct.has_value());
  CHECK(!report.incorrect.has_value());
  CHECK(report.correct->n == 2);
  CHECK(report.correct->intersection == 0.0);
  CHECK(report.correct->mean_fg == 1.0);
  CHECK(report.correct->mean_bg == 0.0);

  // A missing file is collected as a per-pair failure, not a crash.
  pairs.push_back({"bad", (dir / "missing.pgm").string(),
                   (dir / "mask.pgm").string(), false});
  const auto partial = batch_saliency(pairs, 16);
  CHECK(partial.n_failed == 1);
  CHECK(!partial.incorrect.has_value());
  CHECK(partial.pairs.back().ok == false);
  CHECK(!partial.pairs.back().error.empty());

  const auto empty = batch_saliency({}, 16);
  CHECK(empty.pairs.empty());
  CHECK(!empty.warning.empty());

  fs::remove_all(dir);
}

TEST_CASE("batch group means equal the mean of per-pair oracle values") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dermxai_saliency_rand";
  fs::create_directories(dir);
  Rng rng(515);
  std::vector<SaliencyPairSpec> pairs;
  double sum_inter_correct = 0.0, sum_mean_fg_correct = 0.0;
  int n_correct = 0;
  const int bins = 64;
  for (int i = 0; i < 20; ++i) {
    GrayImage heat, mask;
    heat.width = mask.width = 8;
    heat.height = mask.height = 8;
    heat.pixels.resize(64);
    mask.pixels.resize(64);
    bool has_fg = false, has_bg = false;
    for (int px = 0; px < 64; ++px) {
      heat.pixels[px] = static_cast<std::uint8_t>(rng.uniform_index(256));
      const bool fg = rng.bernoulli(0.5);
      mask.pixels[px] = fg ? 255 : 0;
      has_fg |= fg;
      has_bg |= !fg;
    }
    if (!has_fg) mask.pixels[0] = 255;
    if (!has_bg) mask.pixels[1] = 0;
    const auto hp = dir / ("h" + std::to_string(i) + ".pgm");
    const auto mp = dir / ("m" + std::to_string(i) + ".pgm");
    write_pgm(hp, heat);
    write_pgm(mp, mask);
    const bool correct = i % 2 == 0;
    pairs.push_back({"img" + std::to_string(i), hp.string(), mp.string(),
                     correct});
    if (correct) {
      const auto st =
          analyze_pair(heatmap_from_gray(heat), mask_from_gray(mask), bins);
      sum_inter_correct += st.intersection;
      sum_mean_fg_correct += st.region.mean_fg;
      ++n_correct;
    }
  }
  const auto report = batch_saliency(pairs, bins);
  REQUIRE(report.correct.has_value());
  CHECK(report.correct->n == static_cast<std::uint64_t>(n_correct));
  CHECK(report.correct->intersection ==
        doctest::Approx(sum_inter_correct / n_correct).epsilon(1e-12));
  CHECK(report.correct->mean_fg ==
        doctest::Approx(sum_mean_fg_correct / n_correct).epsilon(1e-12));
  fs::remove_all(dir);
}
