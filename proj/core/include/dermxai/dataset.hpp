// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#ifndef DERMXAI_DATASET_HPP_
#define DERMXAI_DATASET_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dermxai/pattern.hpp"

namespace dermxai {

/// One rater's pattern vector for one image. Ids are opaque keys and are
/// never parsed for meaning.
struct AnnotationRecord {
  std::string image_id;
  std::string rater_id;
  PatternVector labels;

  bool operator==(const AnnotationRecord&) const = default;
};

/// A parsed-but-unvalidated annotation row, as produced by CSV ingestion.
/// `values` holds the raw label cells so that validation can report
/// malformed rows precisely.
struct RawAnnotationRow {
  std::size_t line = 0;  // 1-based source line, for error messages
  std::string image_id;
  std::string rater_id;
  std::vector<std::string> values;
};

/// Validated, immutable annotation set. Records are kept sorted by
/// (image_id, rater_id) and the image/rater key sets are sorted and unique,
/// which makes every downstream computation independent of input order.
/// The set may be sparse: not every rater has to annotate every image.
class AnnotationDataset {
 public:
  AnnotationDataset() = default;

  const std::vector<AnnotationRecord>& records() const { return records_; }
  const std::vector<std::string>& images() const { return images_; }
  const std::vector<std::string>& raters() const { return raters_; }

  std::size_t n_images() const { return images_.size(); }
  std::size_t n_raters() const { return raters_.size(); }
  bool empty() const { return records_.empty(); }

  /// Index of an image id in images(); throws unknown_image if absent.
  std::size_t image_index(const std::string& image_id) const;
  std::size_t rater_index(const std::string& rater_id) const;

  /// Records of one image (contiguous because records are sorted).
  std::span<const AnnotationRecord> records_for_image(std::size_t image_idx) const;

  /// Builds a dataset from records already carrying well-formed vectors.
  /// Rejects duplicate (image, rater) pairs, empty ids, and empty input.
  static AnnotationDataset from_records(std::vector<AnnotationRecord> records);

 private:
  std::vector<AnnotationRecord> records_;
  std::vector<std::string> images_;
  std::vector<std::string> raters_;
  std::vector<std::size_t> image_offsets_;  // size n_images()+1 into records_
};

/// Validates raw ingestion rows: every row must carry exactly 7 strictly
/// binary label cells and (image, rater) pairs must be unique.
/// Errors: bad_vector_length, non_binary_value, duplicate_annotation.
AnnotationDataset validate_dataset(const std::vector<RawAnnotationRow>& raw);

}  // namespace dermxai

#endif  // DERMXAI_DATASET_HPP_
