// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded image augmentation: rotation, random perspective, Gaussian blur,
// applied in that fixed order. Every parameter comes from a stream derived
// from (seed, sample index), so a given input always produces bit-identical
// output. Geometric transforms use bilinear sampling with black fill and
// keep the input dimensions.

#ifndef DERMXAI_AUGMENT_HPP_
#define DERMXAI_AUGMENT_HPP_

#include <array>
#include <cstdint>

#include "dermxai/image.hpp"

namespace dermxai {

struct AugmentConfig {
  std::uint64_t seed = 0;
  double rotation_max_deg = 180.0;     // angle drawn from [-max, max]
  double perspective_distortion = 0.3; // corner shift fraction, in [0, 1)
  double blur_sigma_lo = 0.5;
  double blur_sigma_hi = 1.5;
  double p_rotate = 0.5;
  double p_perspective = 0.5;
  double p_blur = 0.5;
};

/// Rotation about the image center by `degrees` (counterclockwise).
RgbImage rotate_rgb(const RgbImage& img, double degrees);

/// Warps so that the output corners (TL, TR, BR, BL order) sample from the
/// given source points in the input image.
RgbImage perspective_rgb(const RgbImage& img,
                         const std::array<std::array<double, 2>, 4>& corners);

/// Separable Gaussian blur with edge clamping; sigma <= 0 is the identity.
RgbImage gaussian_blur_rgb(const RgbImage& img, double sigma);

/// Applies rotation -> perspective -> blur, each gated by its probability.
/// `index` is the sample counter mixed into the seed. Error: empty_image.
RgbImage augment(const RgbImage& img, const AugmentConfig& cfg,
                 std::uint64_t index);

}  // namespace dermxai

#endif  // DERMXAI_AUGMENT_HPP_
