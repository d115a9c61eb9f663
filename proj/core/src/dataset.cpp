// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/dataset.hpp"

#include <algorithm>

#include "dermxai/error.hpp"

namespace dermxai {

std::size_t AnnotationDataset::image_index(const std::string& image_id) const {
  auto it = std::lower_bound(images_.begin(), images_.end(), image_id);
  if (it == images_.end() || *it != image_id) {
    throw_validation("unknown_image", "unknown image id: " + image_id);
  }
  return static_cast<std::size_t>(it - images_.begin());
}

std::size_t AnnotationDataset::rater_index(const std::string& rater_id) const {
  auto it = std::lower_bound(raters_.begin(), raters_.end(), rater_id);
  if (it == raters_.end() || *it != rater_id) {
    throw_validation("unknown_rater", "unknown rater id: " + rater_id);
  }
  return static_cast<std::size_t>(it - raters_.begin());
}

std::span<const AnnotationRecord> AnnotationDataset::records_for_image(
    std::size_t image_idx) const {
  const std::size_t lo = image_offsets_.at(image_idx);
  const std::size_t hi = image_offsets_.at(image_idx + 1);
  return {records_.data() + lo, hi - lo};
}

AnnotationDataset AnnotationDataset::from_records(
    std::vector<AnnotationRecord> records) {
  if (records.empty()) {
    throw_validation("empty_dataset", "annotation dataset has no records");
  }
  for (const auto& r : records) {
    if (r.image_id.empty() || r.rater_id.empty()) {
      throw_validation("empty_id", "image_id and rater_id must be non-empty");
    }
  }

  std::sort(records.begin(), records.end(),
            [](const AnnotationRecord& a, const AnnotationRecord& b) {
              if (a.image_id != b.image_id) return a.image_id < b.image_id;
              return a.rater_id < b.rater_id;
            });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].image_id == records[i - 1].image_id &&
        records[i].rater_id == records[i - 1].rater_id) {
      throw_validation("duplicate_annotation",
                       "duplicate annotation for image '" +
                           records[i].image_id + "', rater '" +
                           records[i].rater_id + "'");
    }
  }

  AnnotationDataset ds;
  ds.records_ = std::move(records);
  for (const auto& r : ds.records_) {
    if (ds.images_.empty() || ds.images_.back() != r.image_id) {
      ds.images_.push_back(r.image_id);
      ds.image_offsets_.push_back(&r - ds.records_.data());
    }
  }
  ds.image_offsets_.push_back(ds.records_.size());

  ds.raters_.reserve(8);
  for (const auto& r : ds.records_) ds.raters_.push_back(r.rater_id);
  std::sort(ds.raters_.begin(), ds.raters_.end());
  ds.raters_.erase(std::unique(ds.raters_.begin(), ds.raters_.end()),
                   ds.raters_.end());
  return ds;
}

AnnotationDataset validate_dataset(const std::vector<RawAnnotationRow>& raw) {
  std::vector<AnnotationRecord> records;
  records.reserve(raw.size());
  for (const auto& row : raw) {
    const std::string where = "row " + std::to_string(row.line);
    if (row.values.size() != kPatternCount) {
      throw_validation("bad_vector_length",
                       where + ": expected 7 label values, got " +
                           std::to_string(row.values.size()));
    }
    PatternVector v;
    for (std::size_t i = 0; i < kPatternCount; ++i) {
      const std::string& cell = row.values[i];
      if (cell == "1") {
        v.bits[i] = true;
      } else if (cell != "0") {
        throw_validation("non_binary_value",
                         where + ": label '" + std::string(kPatternCodes[i]) +
                             "' must be 0 or 1, got '" + cell + "'");
      }
    }
    records.push_back({row.image_id, row.rater_id, v});
  }
  return AnnotationDataset::from_records(std::move(records));
}

}  // namespace dermxai
