// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/poly_mapper.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <json.hpp>

#include "binary_io.hpp"
#include "shapekit/error.hpp"

namespace shapekit {

RatingMatrix::RatingMatrix(std::size_t subjects, std::vector<std::string> attribute_names,
                           std::size_t raters, std::vector<std::uint8_t> scores, Gender gender)
    : subjects_(subjects),
      names_(std::move(attribute_names)),
      raters_(raters),
      scores_(std::move(scores)),
      gender_(gender) {
  if (names_.empty() || raters_ == 0) {
    throw Error(ErrorCode::invalid_argument, "rating matrix needs at least one attribute and rater");
  }
  if (scores_.size() != subjects_ * names_.size() * raters_) {
    throw Error(ErrorCode::dimension_mismatch, "rating buffer size does not match N x A x K", "scores");
  }
  for (std::size_t i = 0; i < scores_.size(); ++i) {
    if (scores_[i] < 1 || scores_[i] > 5) {
      throw Error(ErrorCode::invalid_argument, "rating outside the 1..5 Likert scale",
                  "scores[" + std::to_string(i) + "]");
    }
  }
}

AttributeScores aggregate_ratings(const RatingMatrix& r) {
  AttributeScores means(static_cast<Eigen::Index>(r.num_subjects()), static_cast<Eigen::Index>(r.num_attributes()));
  for (std::size_t i = 0; i < r.num_subjects(); ++i) {
    for (std::size_t j = 0; j < r.num_attributes(); ++j) {
      int sum = 0;
      for (std::size_t k = 0; k < r.num_raters(); ++k) sum += r.at(i, j, k);
      means(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(sum) / static_cast<double>(r.num_raters());
    }
  }
  return means;
}

std::string_view to_string(Channel channel) {
  switch (channel) {
    case Channel::attributes: return "attributes";
    case Channel::betas: return "betas";
    case Channel::height: return "height";
    case Channel::weight: return "weight";
    case Channel::chest: return "chest";
    case Channel::waist: return "waist";
    case Channel::hip: return "hip";
  }
  return "?";
}

namespace {

Channel parse_channel(std::string_view text) {
  for (Channel c : {Channel::attributes, Channel::betas, Channel::height, Channel::weight,
                    Channel::chest, Channel::waist, Channel::hip}) {
    if (to_string(c) == text) return c;
  }
  throw Error(ErrorCode::parse_error, "unknown channel '" + std::string(text) + "'");
}

}  // namespace

FeatureSpec FeatureSpec::from_variant(std::string_view name, int degree) {
  FeatureSpec spec;
  spec.degree = degree;
  if (name == "S2A") {
    spec.channels = {Channel::betas};
    return spec;
  }
  const auto pos = name.find("2S");
  if (pos == std::string_view::npos || pos + 2 != name.size() || pos == 0) {
    throw Error(ErrorCode::invalid_argument, "unknown mapper variant '" + std::string(name) + "'");
  }
  const std::string_view letters = name.substr(0, pos);
  // Canonical channel order regardless of letter order.
  const bool a = letters.find('A') != letters.npos;
  const bool h = letters.find('H') != letters.npos;
  const bool w = letters.find('W') != letters.npos;
  const bool c = letters.find('C') != letters.npos;
  if (static_cast<std::size_t>(a + h + w + c) != letters.size()) {
    throw Error(ErrorCode::invalid_argument, "unknown mapper variant '" + std::string(name) + "'");
  }
  if (a) spec.channels.push_back(Channel::attributes);
  if (h) spec.channels.push_back(Channel::height);
  if (w) spec.channels.push_back(Channel::weight);
  if (c) {
    spec.channels.push_back(Channel::chest);
    spec.channels.push_back(Channel::waist);
    spec.channels.push_back(Channel::hip);
  }
  return spec;
}

std::string FeatureSpec::variant_name() const {
  if (channels.size() == 1 && channels[0] == Channel::betas) return "S2A";
  std::string name;
  auto has = [this](Channel ch) { return std::find(channels.begin(), channels.end(), ch) != channels.end(); };
  if (has(Channel::attributes)) name += 'A';
  if (has(Channel::height)) name += 'H';
  if (has(Channel::weight)) name += 'W';
  if (has(Channel::chest) || has(Channel::waist) || has(Channel::hip)) name += 'C';
  return name + "2S";
}

OutputKind variant_output(std::string_view name) {
  return name == "S2A" ? OutputKind::attribute_scores : OutputKind::betas;
}

std::size_t input_dim(const FeatureSpec& spec, const ChannelLayout& layout) {
  std::size_t dim = 0;
  for (Channel c : spec.channels) {
    if (c == Channel::attributes) {
      dim += static_cast<std::size_t>(layout.num_attributes);
    } else if (c == Channel::betas) {
      dim += static_cast<std::size_t>(layout.num_betas);
    } else {
      dim += 1;
    }
  }
  return dim;
}

std::size_t num_poly_features(std::size_t m, int degree) {
  if (degree == 1) return m + 1;
  if (degree == 2) return (m + 2) * (m + 1) / 2;
  throw Error(ErrorCode::invalid_argument, "polynomial degree must be 1 or 2", "degree");
}

Eigen::VectorXd poly_features(const Eigen::VectorXd& raw, int degree) {
  const auto m = static_cast<std::size_t>(raw.size());
  Eigen::VectorXd out(static_cast<Eigen::Index>(num_poly_features(m, degree)));
  out[0] = 1.0;
  out.segment(1, raw.size()) = raw;
  if (degree == 2) {
    Eigen::Index k = 1 + raw.size();
    for (Eigen::Index i = 0; i < raw.size(); ++i) {
      for (Eigen::Index j = i; j < raw.size(); ++j) out[k++] = raw[i] * raw[j];
    }
  }
  return out;
}

Eigen::MatrixXd poly_features_jacobian(const Eigen::VectorXd& raw, int degree) {
  const auto m = raw.size();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(num_poly_features(static_cast<std::size_t>(m), degree)), m);
  jac.block(1, 0, m, m).setIdentity();
  if (degree == 2) {
    Eigen::Index k = 1 + m;
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i; j < m; ++j, ++k) {
        jac(k, i) += raw[j];
        jac(k, j) += raw[i];
      }
    }
  }
  return jac;
}

PolyMapper::PolyMapper(FeatureSpec spec, ChannelLayout layout, OutputKind output_kind,
                       Eigen::MatrixXd weights, std::vector<std::string> attribute_names, Gender gender)
    : spec_(std::move(spec)),
      layout_(layout),
      output_kind_(output_kind),
      weights_(std::move(weights)),
      attribute_names_(std::move(attribute_names)),
      gender_(gender) {
  if (spec_.channels.empty()) throw Error(ErrorCode::invalid_argument, "feature spec has no channels", "spec");
  const auto features = num_poly_features(input_dim(), spec_.degree);
  if (static_cast<std::size_t>(weights_.rows()) != features) {
    throw Error(ErrorCode::dimension_mismatch,
                "weights have " + std::to_string(weights_.rows()) + " rows, features need " +
                    std::to_string(features),
                "weights");
  }
}

void PolyMapper::check_input(const Eigen::VectorXd& raw) const {
  if (static_cast<std::size_t>(raw.size()) != input_dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "mapper input has length " + std::to_string(raw.size()) + ", expected " +
                    std::to_string(input_dim()),
                "input");
  }
}

Eigen::VectorXd PolyMapper::transform(const Eigen::VectorXd& raw) const {
  check_input(raw);
  Eigen::VectorXd x = raw;
  if (!spec_.unit_transforms) return x;
  Eigen::Index k = 0;
  for (Channel c : spec_.channels) {
    if (c == Channel::attributes) {
      k += layout_.num_attributes;
    } else if (c == Channel::betas) {
      k += layout_.num_betas;
    } else {
      if (c == Channel::height) x[k] = 100.0 * raw[k];
      if (c == Channel::weight) x[k] = std::cbrt(raw[k]);
      ++k;
    }
  }
  return x;
}

Eigen::VectorXd PolyMapper::apply(const Eigen::VectorXd& raw) const {
  return weights_.transpose() * poly_features(transform(raw), spec_.degree);
}

Eigen::MatrixXd PolyMapper::apply_jacobian(const Eigen::VectorXd& raw) const {
  const Eigen::VectorXd x = transform(raw);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(x.size());
  if (spec_.unit_transforms) {
    Eigen::Index k = 0;
    for (Channel c : spec_.channels) {
      if (c == Channel::attributes) {
        k += layout_.num_attributes;
      } else if (c == Channel::betas) {
        k += layout_.num_betas;
      } else {
        if (c == Channel::height) scale[k] = 100.0;
        if (c == Channel::weight) scale[k] = 1.0 / (3.0 * x[k] * x[k]);
        ++k;
      }
    }
  }
  return weights_.transpose() * poly_features_jacobian(x, spec_.degree) * scale.asDiagonal();
}

PolyMapper fit_mapper(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                      const FeatureSpec& spec, const ChannelLayout& layout, OutputKind output_kind,
                      double ridge, std::vector<std::string> attribute_names, Gender gender) {
  if (spec.channels.empty()) throw Error(ErrorCode::invalid_argument, "feature spec has no channels", "spec");
  if (ridge < 0.0) throw Error(ErrorCode::invalid_argument, "ridge must be >= 0", "ridge");
  const std::size_t dim = input_dim(spec, layout);
  if (static_cast<std::size_t>(inputs.cols()) != dim) {
    throw Error(ErrorCode::dimension_mismatch,
                "inputs have " + std::to_string(inputs.cols()) + " columns, spec needs " + std::to_string(dim),
                "inputs");
  }
  if (inputs.rows() != targets.rows()) {
    throw Error(ErrorCode::dimension_mismatch, "inputs and targets differ in row count", "targets");
  }
  const auto features = static_cast<Eigen::Index>(num_poly_features(dim, spec.degree));
  const Eigen::Index n = inputs.rows();

  // Feature matrix through a throwaway mapper so transforms match apply().
  const PolyMapper shell(spec, layout, output_kind, Eigen::MatrixXd::Zero(features, targets.cols()),
                         attribute_names, gender);
  Eigen::MatrixXd phi(n, features);
  for (Eigen::Index i = 0; i < n; ++i) {
    phi.row(i) = poly_features(shell.transform(inputs.row(i).transpose()), spec.degree).transpose();
  }

  Eigen::MatrixXd weights;
  if (ridge == 0.0) {
    if (n < features) {
      throw Error(ErrorCode::rank_deficient,
                  std::to_string(n) + " samples for " + std::to_string(features) +
                      " polynomial features; add samples or use ridge > 0",
                  "ridge");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(phi);
    if (qr.rank() < features) {
      throw Error(ErrorCode::rank_deficient,
                  "feature matrix has rank " + std::to_string(qr.rank()) + " < " +
                      std::to_string(features) + "; use ridge > 0",
                  "ridge");
    }
    weights = qr.solve(targets);
  } else {
    // [phi; sqrt(ridge) I] W = [Y; 0] has the ridge normal equations as its
    // normal equations; QR avoids squaring the condition number.
    Eigen::MatrixXd aug(n + features, features);
    aug.topRows(n) = phi;
    aug.bottomRows(features) = std::sqrt(ridge) * Eigen::MatrixXd::Identity(features, features);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n + features, targets.cols());
    rhs.topRows(n) = targets;
    weights = Eigen::HouseholderQR<Eigen::MatrixXd>(aug).solve(rhs);
  }
  return PolyMapper(spec, layout, output_kind, std::move(weights), std::move(attribute_names), gender);
}

double training_residual(const PolyMapper& mapper, const Eigen::MatrixXd& inputs,
                         const Eigen::MatrixXd& targets) {
  double ss = 0.0;
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    ss += (mapper.apply(inputs.row(i).transpose()) - targets.row(i).transpose()).squaredNorm();
  }
  return std::sqrt(ss);
}

AttributePrediction s2a(const PolyMapper& mapper, const ShapeVector& beta) {
  if (mapper.output_kind() != OutputKind::attribute_scores || mapper.spec().channels.size() != 1 ||
      mapper.spec().channels[0] != Channel::betas) {
    throw Error(ErrorCode::invalid_argument, "mapper is not a shape-to-attributes mapper", "mapper");
  }
  AttributePrediction out;
  out.scores = mapper.apply(beta);
  out.clamped.resize(static_cast<std::size_t>(out.scores.size()), false);
  for (Eigen::Index j = 0; j < out.scores.size(); ++j) {
    const double c = std::clamp(out.scores[j], 1.0, 5.0);
    out.clamped[static_cast<std::size_t>(j)] = c != out.scores[j];
    out.scores[j] = c;
  }
  return out;
}

void save_mapper(const PolyMapper& mapper, const std::filesystem::path& json_path) {
  nlohmann::json j;
  j["format"] = "shapekit-poly-mapper";
  j["version"] = 1;
  j["variant"] = mapper.spec().variant_name();
  std::vector<std::string> channels;
  for (Channel c : mapper.spec().channels) channels.emplace_back(to_string(c));
  j["channels"] = channels;
  j["degree"] = mapper.spec().degree;
  j["unit_transforms"] = mapper.spec().unit_transforms;
  j["output_kind"] = mapper.output_kind() == OutputKind::betas ? "betas" : "attribute_scores";
  j["num_attributes"] = mapper.layout().num_attributes;
  j["num_betas"] = mapper.layout().num_betas;
  j["input_dim"] = mapper.input_dim();
  j["output_dim"] = mapper.output_dim();
  j["num_features"] = mapper.weights().rows();
  j["attribute_names"] = mapper.attribute_names();
  j["gender"] = std::string(to_string(mapper.gender()));
  auto bin = json_path;
  bin.replace_extension(".bin");
  j["weights"] = {{"file", bin.filename().string()},
                  {"dtype", "float64"},
                  {"shape", {mapper.weights().rows(), mapper.weights().cols()}},
                  {"order", "row-major"}};

  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(mapper.weights().size()));
  for (Eigen::Index r = 0; r < mapper.weights().rows(); ++r) {
    for (Eigen::Index c = 0; c < mapper.weights().cols(); ++c) w.push_back(mapper.weights()(r, c));
  }
  detail::write_text(json_path, j.dump(2) + "\n");
  detail::write_file(bin, detail::encode_le<double>(w));
}

PolyMapper load_mapper(const std::filesystem::path& json_path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(detail::read_text(json_path));
    FeatureSpec spec;
    for (const auto& c : j.at("channels")) spec.channels.push_back(parse_channel(c.get<std::string>()));
    spec.degree = j.at("degree").get<int>();
    spec.unit_transforms = j.value("unit_transforms", true);
    ChannelLayout layout{j.at("num_attributes").get<int>(), j.at("num_betas").get<int>()};
    const OutputKind kind =
        j.at("output_kind").get<std::string>() == "betas" ? OutputKind::betas : OutputKind::attribute_scores;
    const auto rows = j.at("weights").at("shape").at(0).get<Eigen::Index>();
    const auto cols = j.at("weights").at("shape").at(1).get<Eigen::Index>();
    const auto values = detail::decode_le<double>(
        detail::read_file(json_path.parent_path() / j.at("weights").at("file").get<std::string>()),
        "weights");
    if (static_cast<Eigen::Index>(values.size()) != rows * cols) {
      throw Error(ErrorCode::dimension_mismatch, "weight buffer size does not match shape", "weights");
    }
    Eigen::MatrixXd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = values[static_cast<std::size_t>(r * cols + c)];
    }
    return PolyMapper(spec, layout, kind, std::move(w),
                      j.value("attribute_names", std::vector<std::string>{}),
                      parse_gender(j.value("gender", std::string("neutral"))));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::malformed_manifest, std::string("bad mapper manifest: ") + e.what(),
                json_path.string());
  }
}

}  // namespace shapekit
