// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "shapekit/embeddings.hpp"

namespace shapekit {

inline constexpr double kDefaultMatchThreshold = 0.3;

// Cosine similarity of every image of `q` against every image of `t`.
Eigen::MatrixXd pairwise_similarity(const SubjectEmbeddings& q, const SubjectEmbeddings& t);

struct MatchOptions {
  double tau = kDefaultMatchThreshold;
  // Default: a pair is dropped as dissimilar only when neither S nor its
  // column means S_T has an entry above tau. Strict: dropped when S_T has
  // none.
  bool strict = false;
};

struct MatchedPair {
  std::string a;
  std::string b;
  double s_tq = 0.0;
};

enum class RejectStage { dissimilar, below_threshold };

struct RejectedPair {
  std::string a;
  std::string b;
  RejectStage stage = RejectStage::dissimilar;
  double s_tq = 0.0;
};

struct MatchReport {
  double tau = kDefaultMatchThreshold;
  bool strict = false;
  std::vector<MatchedPair> matched;
  std::vector<RejectedPair> rejected;
  std::size_t compared = 0;         // same-gender pairs examined
  std::size_t skipped_gender = 0;   // pairs never compared

  std::size_t rejected_at(RejectStage stage) const;
};

// Pairs are examined in (a index, b index) order; only same-gender pairs
// are compared.
MatchReport match_identities(const EmbeddingSet& source_a, const EmbeddingSet& source_b,
                             const MatchOptions& opts = {});

struct BalanceOptions {
  double bin_h = 0.05;  // m
  double bin_w = 5.0;   // kg
  int cap = 3;
  std::uint64_t seed = 0;
};

struct BalanceResult {
  std::vector<std::string> selected;  // input order
  std::size_t skipped = 0;            // missing height or weight
  std::size_t num_bins = 0;
};

// Buckets subjects on the (height, weight) grid and keeps a uniform random
// subset of at most `cap` per bucket. Each bucket draws from its own stream
// keyed by its grid cell, so the picks in one bucket do not depend on the
// rest of the population.
BalanceResult balance_sample(const std::vector<SubjectRecord>& subjects, const BalanceOptions& opts = {});

// Weighted sampling without replacement, weight proportional to BMI
// (Efraimidis-Spirakis keys u^(1/w)). Returned in pick order.
std::vector<std::string> bmi_weighted_pick(const std::vector<SubjectRecord>& subjects, std::size_t count,
                                           std::uint64_t seed);

}  // namespace shapekit
