// Copyright 2026 The dermxai authors
// SPDX-License-Identifier: Apache-2.0

#include "dermxai/csv.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dermxai/error.hpp"
#include "dermxai/rules.hpp"

namespace dermxai {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::ifstream open_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_io("io_error", "cannot open " + path.string());
  return in;
}

std::ofstream create_file(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io_error", "cannot write " + path.string());
  return out;
}

void check_id(const std::string& id) {
  if (id.find_first_of(",\n\r") != std::string::npos) {
    throw_validation("bad_params", "id contains a CSV delimiter: " + id);
  }
}

// Header must start with the expected columns; extras are tolerated when
// allow_extra is set.
std::size_t check_header(const std::vector<std::string>& fields,
                         const std::vector<std::string>& expected,
                         bool allow_extra, const std::filesystem::path& path) {
  if (fields.size() < expected.size() ||
      (!allow_extra && fields.size() != expected.size())) {
    throw_io("schema_error",
             path.string() + ": unexpected CSV header column count");
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (fields[i] != expected[i]) {
      throw_io("schema_error", path.string() + ": expected column '" +
                                   expected[i] + "', got '" + fields[i] + "'");
    }
  }
  return expected.size();
}

std::vector<std::string> label_header(bool with_rater, bool with_diagnosis) {
  std::vector<std::string> h = {"image_id"};
  if (with_rater) h.push_back("rater_id");
  for (auto code : kPatternCodes) h.emplace_back(code);
  if (with_diagnosis) h.push_back("bcc");
  return h;
}

}  // namespace

std::vector<RawAnnotationRow> read_annotation_rows(
    const std::filesystem::path& path) {
  auto in = open_csv(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw_io("schema_error", path.string() + ": empty file");
  }
  check_header(split_fields(line), label_header(true, false), false, path);

  std::vector<RawAnnotationRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    RawAnnotationRow row;
    row.line = line_no;
    if (fields.size() >= 2) {
      row.image_id = fields[0];
      row.rater_id = fields[1];
      row.values.assign(fields.begin() + 2, fields.end());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_annotations_csv(const std::filesystem::path& path,
                           const std::vector<AnnotationRecord>& records) {
  auto out = create_file(path);
  out << "image_id,rater_id";
  for (auto code : kPatternCodes) out << "," << code;
  out << "\n";
  for (const auto& rec : records) {
    check_id(rec.image_id);
    check_id(rec.rater_id);
    out << rec.image_id << "," << rec.rater_id;
    for (bool b : rec.labels.bits) out << "," << (b ? '1' : '0');
    out << "\n";
  }
  if (!out) throw_io("io_error", "failed writing " + path.string());
}

std::map<std::string, PatternVector> read_labels_csv(
    const std::filesystem::path& path) {
  auto in = open_csv(path);
  std::string line;
  if (!std::getline(in, line)) {
    return {};  // zero-byte file: no labels
  }
  check_header(split_fields(line), label_header(false, false), true, path);

  std::map<std::string, PatternVector> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    const std::string where = path.string() + " row " + std::to_string(line_no);
    if (fields.size() < 1 + kPatternCount) {
      throw_validation("bad_vector_length",
                       where + ": expected 7 label values");
    }
    if (fields[0].empty()) {
      throw_validation("empty_id", where + ": empty image id");
    }
    PatternVector v;
    for (std::size_t i = 0; i < kPatternCount; ++i) {
      const std::string& cell = fields[1 + i];
      if (cell == "1") {
        v.bits[i] = true;
      } else if (cell != "0") {
        throw_validation("non_binary_value",
                         where + ": label must be 0 or 1, got '" + cell + "'");
      }
    }
    if (!labels.emplace(fields[0], v).second) {
      throw_validation("duplicate_image",
                       where + ": duplicate image id '" + fields[0] + "'");
    }
  }
  return labels;
}

void write_labels_csv(const std::filesystem::path& path,
                      const std::map<std::string, PatternVector>& labels,
                      bool with_diagnosis) {
  auto out = create_file(path);
  out << "image_id";
  for (auto code : kPatternCodes) out << "," << code;
  if (with_diagnosis) out << ",bcc";
  out << "\n";
  for (const auto& [id, v] : labels) {
    check_id(id);
    out << id;
    for (bool b : v.bits) out << "," << (b ? '1' : '0');
    if (with_diagnosis) {
      out << "," << (binary_of(v) == Diagnosis::Bcc ? '1' : '0');
    }
    out << "\n";
  }
  if (!out) throw_io("io_error", "failed writing " + path.string());
}

FoldAssignment read_folds_csv(const std::filesystem::path& path) {
  auto in = open_csv(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw_io("schema_error", path.string() + ": empty file");
  }
  check_header(split_fields(line), {"image_id", "fold"}, false, path);

  FoldAssignment fa;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    const std::string where = path.string() + " row " + std::to_string(line_no);
    if (fields.size() != 2 || fields[0].empty()) {
      throw_validation("schema_error", where + ": expected image_id,fold");
    }
    int fold = -1;
    try {
      fold = std::stoi(fields[1]);
    } catch (const std::exception&) {
      throw_validation("schema_error", where + ": fold must be an integer");
    }
    if (fold < 0) {
      throw_validation("schema_error", where + ": fold must be >= 0");
    }
    if (!fa.assignment.emplace(fields[0], fold).second) {
      throw_validation("duplicate_image",
                       where + ": duplicate image id '" + fields[0] + "'");
    }
    fa.k = std::max(fa.k, fold + 1);
  }
  return fa;
}

void write_folds_csv(const std::filesystem::path& path,
                     const FoldAssignment& fa) {
  auto out = create_file(path);
  out << "image_id,fold\n";
  for (const auto& [id, fold] : fa.assignment) {
    check_id(id);
    out << id << "," << fold << "\n";
  }
  if (!out) throw_io("io_error", "failed writing " + path.string());
}

std::vector<SaliencyPairSpec> read_saliency_manifest(
    const std::filesystem::path& path) {
  auto in = open_csv(path);
  std::string line;
  if (!std::getline(in, line)) {
    throw_io("schema_error", path.string() + ": empty file");
  }
  check_header(split_fields(line),
               {"image_id", "heatmap_path", "mask_path", "correct"}, false,
               path);

  std::vector<SaliencyPairSpec> pairs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_fields(line);
    const std::string where = path.string() + " row " + std::to_string(line_no);
    if (fields.size() != 4 || fields[0].empty()) {
      throw_validation("schema_error",
                       where + ": expected image_id,heatmap_path,mask_path,correct");
    }
    SaliencyPairSpec spec;
    spec.image_id = fields[0];
    spec.heatmap_path = fields[1];
    spec.mask_path = fields[2];
    if (fields[3] == "1") {
      spec.correct = true;
    } else if (fields[3] == "0") {
      spec.correct = false;
    } else {
      throw_validation("non_binary_value",
                       where + ": correct must be 0 or 1, got '" + fields[3] + "'");
    }
    pairs.push_back(std::move(spec));
  }
  return pairs;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("io_error", "cannot open " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(hash));
  return hex;
}

}  // namespace dermxai
