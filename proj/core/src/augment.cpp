// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/augment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dermxai/error.hpp"
#include "dermxai/rng.hpp"

namespace dermxai {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint8_t round_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0l, 255l));
}

// Bilinear sample with black outside the image.
void sample_bilinear(const RgbImage& img, double sx, double sy,
                     double out[3]) {
  out[0] = out[1] = out[2] = 0.0;
  if (sx <= -1.0 || sy <= -1.0 || sx >= img.width || sy >= img.height) return;
  const int x0 = static_cast<int>(std::floor(sx));
  const int y0 = static_cast<int>(std::floor(sy));
  const double fx = sx - x0;
  const double fy = sy - y0;
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy,
                       fx * fy};
  const int xs[4] = {x0, x0 + 1, x0, x0 + 1};
  const int ys[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int i = 0; i < 4; ++i) {
    if (xs[i] < 0 || ys[i] < 0 || xs[i] >= img.width || ys[i] >= img.height) {
      continue;  // black contribution
    }
    const std::size_t off =
        (static_cast<std::size_t>(ys[i]) * img.width + xs[i]) * 3;
    for (int c = 0; c < 3; ++c) out[c] += w[i] * img.pixels[off + c];
  }
}

RgbImage warp(const RgbImage& img,
              const std::function<void(double, double, double&, double&)>& map) {
  RgbImage out;
  out.width = img.width;
  out.height = img.height;
  out.pixels.resize(img.pixels.size());
  std::size_t off = 0;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double sx, sy;
      map(static_cast<double>(x), static_cast<double>(y), sx, sy);
      double rgb[3];
      sample_bilinear(img, sx, sy, rgb);
      for (int c = 0; c < 3; ++c) out.pixels[off++] = round_u8(rgb[c]);
    }
  }
  return out;
}

// Solves A x = b for an 8x8 system with partial pivoting.
void solve8(double a[8][8], double b[8], double x[8]) {
  for (int col = 0; col < 8; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 8; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) {
      throw_validation("bad_params", "degenerate perspective corner layout");
    }
    if (pivot != col) {
      for (int c = 0; c < 8; ++c) std::swap(a[col][c], a[pivot][c]);
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < 8; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 8; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (int r = 7; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < 8; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
}

void check_nonempty(const RgbImage& img) {
  if (img.width <= 0 || img.height <= 0 || img.pixels.empty()) {
    throw_validation("empty_image", "image has no pixels");
  }
}

}  // namespace

RgbImage rotate_rgb(const RgbImage& img, double degrees) {
  check_nonempty(img);
  const double rad = degrees * kPi / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  const double cx = (img.width - 1) / 2.0;
  const double cy = (img.height - 1) / 2.0;
  // Inverse map: rotate output coordinates by -angle about the center.
  return warp(img, [=](double x, double y, double& sx, double& sy) {
    const double dx = x - cx, dy = y - cy;
    sx = cx + c * dx + s * dy;
    sy = cy - s * dx + c * dy;
  });
}

RgbImage perspective_rgb(const RgbImage& img,
                         const std::array<std::array<double, 2>, 4>& corners) {
  check_nonempty(img);
  const double w = img.width - 1.0;
  const double h = img.height - 1.0;
  const double dst[4][2] = {{0, 0}, {w, 0}, {w, h}, {0, h}};
  // Homography (output -> input): u = (a x + b y + c)/(g x + h y + 1), same
  // for v; eight unknowns from the four corner correspondences.
  double a[8][8] = {};
  double b[8] = {};
  for (int i = 0; i < 4; ++i) {
    const double x = dst[i][0], y = dst[i][1];
    const double u = corners[i][0], v = corners[i][1];
    double* r0 = a[2 * i];
    double* r1 = a[2 * i + 1];
    r0[0] = x; r0[1] = y; r0[2] = 1; r0[6] = -u * x; r0[7] = -u * y;
    r1[3] = x; r1[4] = y; r1[5] = 1; r1[6] = -v * x; r1[7] = -v * y;
    b[2 * i] = u;
    b[2 * i + 1] = v;
  }
  double m[8];
  solve8(a, b, m);
  return warp(img, [=](double x, double y, double& sx, double& sy) {
    const double den = m[6] * x + m[7] * y + 1.0;
    sx = (m[0] * x + m[1] * y + m[2]) / den;
    sy = (m[3] * x + m[4] * y + m[5]) / den;
  });
}

RgbImage gaussian_blur_rgb(const RgbImage& img, double sigma) {
  check_nonempty(img);
  if (sigma <= 0.0) return img;
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double norm = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    norm += kernel[i + radius];
  }
  for (double& k : kernel) k /= norm;

  const int w = img.width, h = img.height;
  auto clampx = [w](int x) { return std::clamp(x, 0, w - 1); };
  auto clampy = [h](int y) { return std::clamp(y, 0, h - 1); };

  // Horizontal pass into a float buffer, vertical pass back to bytes; the
  // intermediate stays unrounded.
  std::vector<double> tmp(img.pixels.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const std::size_t off =
            (static_cast<std::size_t>(y) * w + clampx(x + i)) * 3;
        for (int c = 0; c < 3; ++c) {
          acc[c] += kernel[i + radius] * img.pixels[off + c];
        }
      }
      const std::size_t out_off = (static_cast<std::size_t>(y) * w + x) * 3;
      for (int c = 0; c < 3; ++c) tmp[out_off + c] = acc[c];
    }
  }
  RgbImage out;
  out.width = w;
  out.height = h;
  out.pixels.resize(img.pixels.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc[3] = {0, 0, 0};
      for (int i = -radius; i <= radius; ++i) {
        const std::size_t off =
            (static_cast<std::size_t>(clampy(y + i)) * w + x) * 3;
        for (int c = 0; c < 3; ++c) acc[c] += kernel[i + radius] * tmp[off + c];
      }
      const std::size_t out_off = (static_cast<std::size_t>(y) * w + x) * 3;
      for (int c = 0; c < 3; ++c) out.pixels[out_off + c] = round_u8(acc[c]);
    }
  }
  return out;
}

RgbImage augment(const RgbImage& img, const AugmentConfig& cfg,
                 std::uint64_t index) {
  check_nonempty(img);
  if (!(cfg.perspective_distortion >= 0.0 && cfg.perspective_distortion < 1.0)) {
    throw_validation("bad_params", "perspective distortion must lie in [0,1)");
  }
  if (cfg.blur_sigma_lo < 0.0 || cfg.blur_sigma_hi < cfg.blur_sigma_lo) {
    throw_validation("bad_params", "blur sigma range must satisfy 0 <= lo <= hi");
  }
  Rng rng(cfg.seed, index);

  // All parameters are drawn up front in a fixed order; the apply flags only
  // gate whether a stage runs.
  const bool apply_rot = rng.uniform01() < cfg.p_rotate;
  const double angle = rng.uniform(-cfg.rotation_max_deg, cfg.rotation_max_deg);
  const bool apply_persp = rng.uniform01() < cfg.p_perspective;
  const double dx = cfg.perspective_distortion * (img.width - 1) / 2.0;
  const double dy = cfg.perspective_distortion * (img.height - 1) / 2.0;
  std::array<std::array<double, 2>, 4> shift{};
  for (auto& corner : shift) {
    corner[0] = rng.uniform(0.0, dx);
    corner[1] = rng.uniform(0.0, dy);
  }
  const bool apply_blur = rng.uniform01() < cfg.p_blur;
  const double sigma = rng.uniform(cfg.blur_sigma_lo, cfg.blur_sigma_hi);

  RgbImage out = img;
  if (apply_rot && angle != 0.0) out = rotate_rgb(out, angle);
  if (apply_persp && cfg.perspective_distortion > 0.0) {
    const double w = img.width - 1.0, h = img.height - 1.0;
    const std::array<std::array<double, 2>, 4> corners = {{
        {shift[0][0], shift[0][1]},          // TL moves right/down
        {w - shift[1][0], shift[1][1]},      // TR
        {w - shift[2][0], h - shift[2][1]},  // BR
        {shift[3][0], h - shift[3][1]},      // BL
    }};
    out = perspective_rgb(out, corners);
  }
  if (apply_blur && sigma > 0.0) out = gaussian_blur_rgb(out, sigma);
  return out;
}

}  // namespace dermxai
