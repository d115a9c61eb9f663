// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DERMXAI_PATTERN_HPP_
#define DERMXAI_PATTERN_HPP_

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "dermxai/error.hpp"

namespace dermxai {

/// The seven dermoscopic criteria, in the fixed order used by every file
/// format and in-memory vector. Index 0 (Pigment Network) is the single
/// negative criterion; indices 1..6 argue for BCC.
enum class Pattern : int {
  PigmentNetwork = 0,
  Ulceration = 1,
  OvoidNests = 2,
  Multiglobules = 3,
  MapleLeafLike = 4,
  SpokeWheel = 5,
  ArborizingTelangiectasia = 6,
};

inline constexpr std::size_t kPatternCount = 7;

inline constexpr std::array<Pattern, kPatternCount> kAllPatterns = {
    Pattern::PigmentNetwork,    Pattern::Ulceration,
    Pattern::OvoidNests,        Pattern::Multiglobules,
    Pattern::MapleLeafLike,     Pattern::SpokeWheel,
    Pattern::ArborizingTelangiectasia,
};

/// Short codes, used as CSV column names and JSON keys.
inline constexpr std::array<std::string_view, kPatternCount> kPatternCodes = {
    "pn", "u", "on", "mg", "ml", "sw", "at"};

inline constexpr std::array<std::string_view, kPatternCount> kPatternNames = {
    "Pigment Network",  "Ulceration",  "Ovoid Nests",      "Multiglobules",
    "Maple Leaf-like",  "Spoke Wheel", "Arborizing Telangiectasia"};

constexpr std::size_t pattern_index(Pattern p) {
  return static_cast<std::size_t>(p);
}

constexpr std::string_view pattern_code(Pattern p) {
  return kPatternCodes[pattern_index(p)];
}

constexpr std::string_view pattern_name(Pattern p) {
  return kPatternNames[pattern_index(p)];
}

/// Presence/absence of each of the seven patterns for one image.
struct PatternVector {
  std::array<bool, kPatternCount> bits{};

  bool operator==(const PatternVector&) const = default;

  bool at(Pattern p) const { return bits[pattern_index(p)]; }
  bool at(std::size_t i) const { return bits.at(i); }
  void set(Pattern p, bool value) { bits[pattern_index(p)] = value; }
  void set(std::size_t i, bool value) { bits.at(i) = value; }

  /// True iff any bit is set, Pigment Network included.
  bool any() const {
    for (bool b : bits) {
      if (b) return true;
    }
    return false;
  }

  /// True iff any of the six BCC-positive patterns (indices 1..6) is set.
  bool any_bcc_positive() const {
    for (std::size_t i = 1; i < kPatternCount; ++i) {
      if (bits[i]) return true;
    }
    return false;
  }

  /// Compact form "0101101" in fixed pattern order.
  std::string to_digits() const {
    std::string s(kPatternCount, '0');
    for (std::size_t i = 0; i < kPatternCount; ++i) {
      if (bits[i]) s[i] = '1';
    }
    return s;
  }

  /// Parses the compact form; rejects anything that is not 7 binary digits.
  static PatternVector from_digits(std::string_view digits) {
    if (digits.size() != kPatternCount) {
      throw_validation("bad_vector_length",
                       "pattern vector must have exactly 7 digits, got " +
                           std::to_string(digits.size()));
    }
    PatternVector v;
    for (std::size_t i = 0; i < kPatternCount; ++i) {
      if (digits[i] == '1') {
        v.bits[i] = true;
      } else if (digits[i] != '0') {
        throw_validation("non_binary_value",
                         "pattern vector digits must be 0 or 1, got '" +
                             std::string(1, digits[i]) + "'");
      }
    }
    return v;
  }

  /// All 128 possible vectors, ordered by the integer whose bit i is
  /// pattern i. Handy for exhaustive checks.
  static PatternVector from_code(unsigned code) {
    PatternVector v;
    for (std::size_t i = 0; i < kPatternCount; ++i) {
      v.bits[i] = (code >> i) & 1u;
    }
    return v;
  }
};

}  // namespace dermxai

#endif  // DERMXAI_PATTERN_HPP_
