// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0
//
// Plain comma-separated interchange files. Fields are not quoted; ids must
// not contain commas or newlines (enforced on write). Headers are fixed per
// file kind:
//   annotations: image_id,rater_id,pn,u,on,mg,ml,sw,at
//   labels:      image_id,pn,u,on,mg,ml,sw,at[,bcc]   (extras ignored on read)
//   folds:       image_id,fold
//   saliency:    image_id,heatmap_path,mask_path,correct

#ifndef DERMXAI_CSV_HPP_
#define DERMXAI_CSV_HPP_

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dermxai/dataset.hpp"
#include "dermxai/folds.hpp"
#include "dermxai/pattern.hpp"
#include "dermxai/saliency.hpp"

namespace dermxai {

std::vector<RawAnnotationRow> read_annotation_rows(
    const std::filesystem::path& path);

void write_annotations_csv(const std::filesystem::path& path,
                           const std::vector<AnnotationRecord>& records);

/// Reads image_id + 7 pattern bits; unknown trailing columns are ignored so
/// consensus outputs (with their diagnosis column) can be fed back in.
/// Errors: schema_error, non_binary_value, duplicate_image.
std::map<std::string, PatternVector> read_labels_csv(
    const std::filesystem::path& path);

/// Writes labels sorted by image id; with_diagnosis appends a `bcc` column
/// containing the rule-based binary diagnosis.
void write_labels_csv(const std::filesystem::path& path,
                      const std::map<std::string, PatternVector>& labels,
                      bool with_diagnosis);

FoldAssignment read_folds_csv(const std::filesystem::path& path);
void write_folds_csv(const std::filesystem::path& path, const FoldAssignment& fa);

/// Relative heatmap/mask paths are kept verbatim; the caller resolves them.
std::vector<SaliencyPairSpec> read_saliency_manifest(
    const std::filesystem::path& path);

/// FNV-1a 64-bit digest of a file, hex-encoded; used in run manifests.
std::string file_digest(const std::filesystem::path& path);

}  // namespace dermxai

#endif  // DERMXAI_CSV_HPP_
