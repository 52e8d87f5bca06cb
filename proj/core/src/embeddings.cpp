// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/embeddings.hpp"

#include <cmath>

#include <json.hpp>

#include "binary_io.hpp"
#include "shapekit/csv.hpp"
#include "shapekit/error.hpp"

namespace shapekit {

using nlohmann::json;

void EmbeddingSet::validate(double tol) const {
  for (const auto& s : subjects) {
    if (s.vectors.rows() == 0) {
      throw Error(ErrorCode::invalid_argument, "subject has no embeddings", "subjects." + s.id);
    }
    if (s.vectors.cols() != dim) {
      throw Error(ErrorCode::dimension_mismatch, "embedding width differs from set dimension", "subjects." + s.id);
    }
    for (Eigen::Index r = 0; r < s.vectors.rows(); ++r) {
      const double n = s.vectors.row(r).norm();
      if (std::abs(n - 1.0) > tol) {
        throw Error(ErrorCode::invalid_argument, "embedding is not unit length (norm " + format_double(n) + ")",
                    "subjects." + s.id + ".images[" + std::to_string(r) + "]");
      }
    }
  }
}

EmbeddingSet load_embeddings(const std::filesystem::path& manifest) {
  json doc;
  try {
    doc = json::parse(detail::read_text(manifest));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::malformed_manifest, e.what(), manifest.string());
  }
  EmbeddingSet set;
  std::vector<float> buffer;
  std::size_t num_images = 0;
  try {
    if (doc.at("format").get<std::string>() != "shapekit-embeddings") {
      throw Error(ErrorCode::malformed_manifest, "unexpected format tag", "manifest.format");
    }
    set.source = doc.value("source", "");
    set.dim = doc.value("dim", kEmbeddingDim);
    num_images = doc.at("num_images").get<std::size_t>();
    const auto bytes = detail::read_file(manifest.parent_path() / doc.at("buffer").get<std::string>());
    buffer = detail::decode_le<float>(bytes, "manifest.buffer");
    if (buffer.size() != num_images * static_cast<std::size_t>(set.dim)) {
      throw Error(ErrorCode::dimension_mismatch,
                  "buffer holds " + std::to_string(buffer.size()) + " floats, expected " +
                      std::to_string(num_images * static_cast<std::size_t>(set.dim)),
                  "manifest.buffer");
    }
    const auto& subjects = doc.at("subjects");
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      const auto& s = subjects[i];
      const std::string where = "manifest.subjects[" + std::to_string(i) + "]";
      SubjectEmbeddings out;
      out.id = s.at("id").get<std::string>();
      out.gender = parse_gender(s.value("gender", "neutral"));
      const auto rows = s.at("rows").get<std::vector<std::size_t>>();
      if (rows.size() != 2 || rows[0] > rows[1] || rows[1] > num_images) {
        throw Error(ErrorCode::malformed_manifest, "rows must be [begin, end) within the buffer", where + ".rows");
      }
      out.vectors.resize(static_cast<Eigen::Index>(rows[1] - rows[0]), set.dim);
      for (std::size_t r = rows[0]; r < rows[1]; ++r) {
        for (int c = 0; c < set.dim; ++c) {
          out.vectors(static_cast<Eigen::Index>(r - rows[0]), c) = buffer[r * static_cast<std::size_t>(set.dim) + c];
        }
      }
      set.subjects.push_back(std::move(out));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::malformed_manifest, e.what(), manifest.string());
  }
  return set;
}

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& manifest) {
  std::vector<float> buffer;
  json subjects = json::array();
  std::size_t row = 0;
  for (const auto& s : set.subjects) {
    for (Eigen::Index r = 0; r < s.vectors.rows(); ++r) {
      for (Eigen::Index c = 0; c < s.vectors.cols(); ++c) buffer.push_back(static_cast<float>(s.vectors(r, c)));
    }
    subjects.push_back({{"id", s.id},
                        {"gender", std::string(to_string(s.gender))},
                        {"rows", {row, row + static_cast<std::size_t>(s.vectors.rows())}}});
    row += static_cast<std::size_t>(s.vectors.rows());
  }
  const std::string buffer_name = manifest.stem().string() + ".f32";
  json doc = {{"format", "shapekit-embeddings"}, {"version", 1},        {"source", set.source},
              {"dim", set.dim},                  {"num_images", row},   {"buffer", buffer_name},
              {"subjects", subjects}};
  detail::write_file(manifest.parent_path() / buffer_name, detail::encode_le<float>(buffer));
  detail::write_text(manifest, doc.dump(2) + "\n");
}

std::optional<double> SubjectRecord::effective_bmi() const {
  if (bmi) return bmi;
  if (height && weight && *height > 0.0) return *weight / (*height * *height);
  return std::nullopt;
}

std::vector<SubjectRecord> read_subjects_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::size_t id_col = table.require_column("subject_id");
  const auto gender_col = table.column("gender");
  const auto h_col = table.column("height_m");
  const auto w_col = table.column("weight_kg");
  const auto n_col = table.column("image_count");
  const auto b_col = table.column("bmi");
  std::vector<SubjectRecord> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const std::string where = path.string() + ":" + std::to_string(i + 2);
    SubjectRecord rec;
    rec.id = row[id_col];
    if (gender_col && !row[*gender_col].empty()) rec.gender = parse_gender(row[*gender_col]);
    if (h_col) rec.height = parse_optional_double(row[*h_col], where);
    if (w_col) rec.weight = parse_optional_double(row[*w_col], where);
    if (b_col) rec.bmi = parse_optional_double(row[*b_col], where);
    if (n_col && !row[*n_col].empty()) rec.image_count = static_cast<int>(parse_double(row[*n_col], where));
    if ((rec.height && *rec.height <= 0.0) || (rec.weight && *rec.weight <= 0.0)) {
      throw Error(ErrorCode::invalid_argument, "height and weight must be positive", where);
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_subjects_csv(const std::vector<SubjectRecord>& subjects, const std::filesystem::path& path) {
  CsvTable table;
  table.header = {"subject_id", "gender", "height_m", "weight_kg", "image_count", "bmi"};
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& s : subjects) {
    table.rows.push_back({s.id, std::string(to_string(s.gender)), opt(s.height), opt(s.weight), std::to_string(s.image_count),
                          opt(s.bmi)});
  }
  write_csv(path, table);
}

}  // namespace shapekit
