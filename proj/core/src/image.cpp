// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/image.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <string>

#include "dermxai/error.hpp"

namespace dermxai {

namespace {

// Reads the next whitespace-delimited header token, skipping '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  return tok;
}

int parse_dim(const std::string& tok, const std::filesystem::path& path) {
  try {
    const long v = std::stol(tok);
    if (v <= 0 || v > 1 << 20) throw std::out_of_range("dim");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw_io("parse_error",
             path.string() + ": bad netpbm header token '" + tok + "'");
  }
}

void read_header(std::istream& in, const std::filesystem::path& path,
                 const char* magic, int& width, int& height) {
  std::string tok = next_token(in);
  if (tok != magic) {
    throw_io("parse_error", path.string() + ": expected " + magic +
                                " header, got '" + tok + "'");
  }
  width = parse_dim(next_token(in), path);
  height = parse_dim(next_token(in), path);
  const int maxval = parse_dim(next_token(in), path);
  if (maxval != 255) {
    throw_io("parse_error",
             path.string() + ": only 8-bit images supported (maxval 255)");
  }
  // exactly one whitespace byte separates the header from the raster
}

std::vector<std::uint8_t> read_raster(std::istream& in,
                                      const std::filesystem::path& path,
                                      std::size_t n) {
  std::vector<std::uint8_t> data(n);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw_io("parse_error", path.string() + ": truncated raster data");
  }
  return data;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("io_error", "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io_error", "cannot write " + path.string());
  return out;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
  auto in = open_in(path);
  GrayImage img;
  read_header(in, path, "P5", img.width, img.height);
  img.pixels = read_raster(
      in, path, static_cast<std::size_t>(img.width) * img.height);
  return img;
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  auto out = open_out(path);
  out << "P5\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw_io("io_error", "failed writing " + path.string());
}

RgbImage read_ppm(const std::filesystem::path& path) {
  auto in = open_in(path);
  RgbImage img;
  read_header(in, path, "P6", img.width, img.height);
  img.pixels = read_raster(
      in, path, static_cast<std::size_t>(img.width) * img.height * 3);
  return img;
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
  auto out = open_out(path);
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw_io("io_error", "failed writing " + path.string());
}

}  // namespace dermxai
