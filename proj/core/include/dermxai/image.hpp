// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// Minimal lossless raster I/O. Heatmaps and masks travel as 8-bit binary
// PGM (P5); color images for augmentation as binary PPM (P6). Both formats
// are byte-exact and dependency-free, which keeps every pipeline output
// reproducible bit for bit.

#ifndef DERMXAI_IMAGE_HPP_
#define DERMXAI_IMAGE_HPP_

#include <cstdint>
#include <filesystem>
#include <vector>

namespace dermxai {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, width*height

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
};

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 3 bytes per pixel

  bool operator==(const RgbImage&) const = default;
};

GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

RgbImage read_ppm(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

}  // namespace dermxai

#endif  // DERMXAI_IMAGE_HPP_
