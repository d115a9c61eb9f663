// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic mapping from a pattern vector to the binary diagnosis and to
// the three clinically inspired explanation groups. The rule set mirrors how
// a dermatologist reads the criteria: any BCC-positive pattern is enough for
// a BCC verdict; Pigment Network alone (or no pattern at all) means non-BCC.

#ifndef DERMXAI_RULES_HPP_
#define DERMXAI_RULES_HPP_

#include <string_view>
#include <vector>

#include "dermxai/pattern.hpp"

namespace dermxai {

enum class Diagnosis { NonBcc = 0, Bcc = 1 };

/// Explanation group of a vector: no pattern at all, Pigment Network as the
/// only finding, or at least one BCC-positive pattern.
enum class DiagnosisGroup { NoPattern = 0, PigmentNetworkOnly = 1, BccPattern = 2 };

inline constexpr std::size_t kDiagnosisGroupCount = 3;

constexpr std::string_view to_string(Diagnosis d) {
  return d == Diagnosis::Bcc ? "bcc" : "non_bcc";
}

constexpr std::string_view to_string(DiagnosisGroup g) {
  switch (g) {
    case DiagnosisGroup::NoPattern: return "no_pattern";
    case DiagnosisGroup::PigmentNetworkOnly: return "pigment_network_only";
    case DiagnosisGroup::BccPattern: return "bcc_pattern";
  }
  return "no_pattern";
}

/// BCC iff any positive pattern (indices 1..6) is present. Pigment Network
/// never blocks a verdict driven by a positive pattern.
inline Diagnosis binary_of(const PatternVector& v) {
  return v.any_bcc_positive() ? Diagnosis::Bcc : Diagnosis::NonBcc;
}

inline DiagnosisGroup group_of(const PatternVector& v) {
  if (v.any_bcc_positive()) return DiagnosisGroup::BccPattern;
  if (v.at(Pattern::PigmentNetwork)) return DiagnosisGroup::PigmentNetworkOnly;
  return DiagnosisGroup::NoPattern;
}

struct Explanation {
  Diagnosis diagnosis = Diagnosis::NonBcc;
  DiagnosisGroup group = DiagnosisGroup::NoPattern;
  std::vector<Pattern> present_patterns;  // set bits in fixed order
};

inline Explanation explain(const PatternVector& v) {
  Explanation e;
  e.diagnosis = binary_of(v);
  e.group = group_of(v);
  for (Pattern p : kAllPatterns) {
    if (v.at(p)) e.present_patterns.push_back(p);
  }
  return e;
}

}  // namespace dermxai

#endif  // DERMXAI_RULES_HPP_
