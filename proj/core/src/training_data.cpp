// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/training_data.hpp"

#include <string>

#include "shapekit/csv.hpp"
#include "shapekit/error.hpp"

namespace shapekit {

namespace {

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.size() >= prefix.size() && s.compare(0, prefix.size(), prefix) == 0;
}

std::string cell_context(const std::filesystem::path& path, std::size_t row, const std::string& col) {
  return path.filename().string() + ":row " + std::to_string(row + 1) + ":" + col;
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

}  // namespace

TrainingSet TrainingSet::filter(Gender gender) const {
  TrainingSet out;
  out.attribute_names = attribute_names;
  out.num_betas = num_betas;
  for (const auto& s : samples) {
    if (s.gender == gender) out.samples.push_back(s);
  }
  return out;
}

TrainingSet read_training_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  TrainingSet set;
  std::vector<std::size_t> attr_cols;
  std::vector<std::size_t> beta_cols;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    const auto& h = table.header[c];
    if (starts_with(h, "attr_")) {
      set.attribute_names.push_back(h.substr(5));
      attr_cols.push_back(c);
    } else if (starts_with(h, "beta_")) {
      if (h != "beta_" + std::to_string(beta_cols.size())) {
        throw Error(ErrorCode::parse_error, "beta columns must be beta_0, beta_1, ... in order", h);
      }
      beta_cols.push_back(c);
    }
  }
  set.num_betas = static_cast<int>(beta_cols.size());

  const auto id_col = table.column("subject_id");
  const auto gender_col = table.column("gender");
  const std::pair<const char*, std::optional<double> SubjectSample::*> meas[] = {
      {"height_m", &SubjectSample::height}, {"weight_kg", &SubjectSample::weight},
      {"chest_m", &SubjectSample::chest},   {"waist_m", &SubjectSample::waist},
      {"hip_m", &SubjectSample::hip}};

  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    SubjectSample s;
    s.id = id_col ? row[*id_col] : std::to_string(r);
    if (gender_col && !row[*gender_col].empty()) s.gender = parse_gender(row[*gender_col]);
    for (const auto& [name, member] : meas) {
      if (auto c = table.column(name)) s.*member = parse_optional_double(row[*c], cell_context(path, r, name));
    }
    s.attributes.resize(static_cast<Eigen::Index>(attr_cols.size()));
    for (std::size_t k = 0; k < attr_cols.size(); ++k) {
      s.attributes[static_cast<Eigen::Index>(k)] =
          parse_double(row[attr_cols[k]], cell_context(path, r, table.header[attr_cols[k]]));
    }
    s.betas.resize(static_cast<Eigen::Index>(beta_cols.size()));
    for (std::size_t k = 0; k < beta_cols.size(); ++k) {
      s.betas[static_cast<Eigen::Index>(k)] =
          parse_double(row[beta_cols[k]], cell_context(path, r, table.header[beta_cols[k]]));
    }
    set.samples.push_back(std::move(s));
  }
  return set;
}

void write_training_csv(const std::filesystem::path& path, const TrainingSet& set) {
  CsvTable table;
  table.header = {"subject_id", "gender", "height_m", "weight_kg", "chest_m", "waist_m", "hip_m"};
  for (const auto& a : set.attribute_names) table.header.push_back("attr_" + a);
  for (int b = 0; b < set.num_betas; ++b) table.header.push_back("beta_" + std::to_string(b));
  for (const auto& s : set.samples) {
    std::vector<std::string> row = {s.id,
                                    std::string(to_string(s.gender)),
                                    optional_cell(s.height),
                                    optional_cell(s.weight),
                                    optional_cell(s.chest),
                                    optional_cell(s.waist),
                                    optional_cell(s.hip)};
    for (Eigen::Index k = 0; k < s.attributes.size(); ++k) row.push_back(format_double(s.attributes[k]));
    for (Eigen::Index k = 0; k < s.betas.size(); ++k) row.push_back(format_double(s.betas[k]));
    table.rows.push_back(std::move(row));
  }
  write_csv(path, table);
}

Eigen::VectorXd assemble_input(const FeatureSpec& spec, const SubjectSample& s) {
  std::vector<double> values;
  auto scalar = [&](const std::optional<double>& v, const char* name) {
    if (!v) throw Error(ErrorCode::invalid_argument, "sample lacks " + std::string(name), s.id);
    values.push_back(*v);
  };
  for (Channel c : spec.channels) {
    switch (c) {
      case Channel::attributes:
        if (s.attributes.size() == 0) throw Error(ErrorCode::invalid_argument, "sample lacks attributes", s.id);
        values.insert(values.end(), s.attributes.data(), s.attributes.data() + s.attributes.size());
        break;
      case Channel::betas:
        if (s.betas.size() == 0) throw Error(ErrorCode::invalid_argument, "sample lacks betas", s.id);
        values.insert(values.end(), s.betas.data(), s.betas.data() + s.betas.size());
        break;
      case Channel::height: scalar(s.height, "height"); break;
      case Channel::weight: scalar(s.weight, "weight"); break;
      case Channel::chest: scalar(s.chest, "chest circumference"); break;
      case Channel::waist: scalar(s.waist, "waist circumference"); break;
      case Channel::hip: scalar(s.hip, "hip circumference"); break;
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

DesignMatrices design_matrices(const TrainingSet& set, const FeatureSpec& spec, OutputKind output) {
  DesignMatrices d;
  const auto n = static_cast<Eigen::Index>(set.samples.size());
  const auto in_dim = static_cast<Eigen::Index>(input_dim(spec, set.layout()));
  const auto out_dim = output == OutputKind::betas ? set.num_betas : static_cast<int>(set.attribute_names.size());
  d.inputs.resize(n, in_dim);
  d.targets.resize(n, out_dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = set.samples[static_cast<std::size_t>(i)];
    const Eigen::VectorXd x = assemble_input(spec, s);
    if (x.size() != in_dim) {
      throw Error(ErrorCode::dimension_mismatch, "sample input has wrong length", s.id);
    }
    d.inputs.row(i) = x.transpose();
    const Eigen::VectorXd& y = output == OutputKind::betas ? s.betas : s.attributes;
    if (y.size() != out_dim) throw Error(ErrorCode::dimension_mismatch, "sample target has wrong length", s.id);
    d.targets.row(i) = y.transpose();
  }
  return d;
}

BetaTable read_betas_csv(const std::filesystem::path& path) {
  const TrainingSet set = read_training_csv(path);
  BetaTable t;
  for (const auto& s : set.samples) {
    t.ids.push_back(s.id);
    t.betas.push_back(s.betas);
  }
  return t;
}

void write_betas_csv(const std::filesystem::path& path, const BetaTable& table) {
  CsvTable csv;
  csv.header = {"subject_id"};
  const Eigen::Index b = table.betas.empty() ? 0 : table.betas.front().size();
  for (Eigen::Index k = 0; k < b; ++k) csv.header.push_back("beta_" + std::to_string(k));
  for (std::size_t i = 0; i < table.betas.size(); ++i) {
    std::vector<std::string> row = {i < table.ids.size() ? table.ids[i] : std::to_string(i)};
    for (Eigen::Index k = 0; k < table.betas[i].size(); ++k) row.push_back(format_double(table.betas[i][k]));
    csv.rows.push_back(std::move(row));
  }
  write_csv(path, csv);
}

void write_measurements_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                            const std::vector<MeasurementSet>& rows) {
  CsvTable csv;
  if (!ids.empty()) csv.header.push_back("subject_id");
  for (const char* h : {"height_m", "weight_kg", "chest_m", "waist_m", "hip_m"}) csv.header.emplace_back(h);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<std::string> row;
    if (!ids.empty()) row.push_back(ids[i]);
    for (double v : rows[i].as_array()) row.push_back(format_double(v));
    csv.rows.push_back(std::move(row));
  }
  write_csv(path, csv);
}

std::vector<MeasurementSet> read_measurements_csv(const std::filesystem::path& path,
                                                  std::vector<std::string>* ids) {
  const CsvTable csv = read_csv(path);
  const std::size_t cols[5] = {csv.require_column("height_m"), csv.require_column("weight_kg"),
                               csv.require_column("chest_m"), csv.require_column("waist_m"),
                               csv.require_column("hip_m")};
  const auto id_col = csv.column("subject_id");
  std::vector<MeasurementSet> out;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    std::array<double, 5> a{};
    for (int k = 0; k < 5; ++k) a[k] = parse_double(csv.rows[r][cols[k]], cell_context(path, r, csv.header[cols[k]]));
    out.push_back(MeasurementSet::from_array(a));
    if (ids) ids->push_back(id_col ? csv.rows[r][*id_col] : std::to_string(r));
  }
  return out;
}

}  // namespace shapekit
