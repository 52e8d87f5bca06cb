// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/curation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "shapekit/error.hpp"
#include "shapekit/random.hpp"

namespace shapekit {

Eigen::MatrixXd pairwise_similarity(const SubjectEmbeddings& q, const SubjectEmbeddings& t) {
  if (q.vectors.rows() == 0 || t.vectors.rows() == 0) {
    throw Error(ErrorCode::invalid_argument, "subject has no embeddings",
                q.vectors.rows() == 0 ? q.id : t.id);
  }
  if (q.vectors.cols() != t.vectors.cols()) {
    throw Error(ErrorCode::dimension_mismatch, "embedding widths differ", q.id + " vs " + t.id);
  }
  return q.vectors * t.vectors.transpose();
}

std::size_t MatchReport::rejected_at(RejectStage stage) const {
  return static_cast<std::size_t>(
      std::count_if(rejected.begin(), rejected.end(), [&](const RejectedPair& r) { return r.stage == stage; }));
}

MatchReport match_identities(const EmbeddingSet& source_a, const EmbeddingSet& source_b, const MatchOptions& opts) {
  if (!(opts.tau > 0.0 && opts.tau < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "tau must lie in (0, 1)", "tau");
  }
  MatchReport report;
  report.tau = opts.tau;
  report.strict = opts.strict;
  for (const auto& qa : source_a.subjects) {
    for (const auto& tb : source_b.subjects) {
      if (qa.gender != tb.gender) {
        ++report.skipped_gender;
        continue;
      }
      ++report.compared;
      const Eigen::MatrixXd s = pairwise_similarity(qa, tb);
      const Eigen::RowVectorXd s_t = s.colwise().mean();
      const double s_tq = s.mean();
      const bool s_has = s.maxCoeff() > opts.tau;
      const bool st_has = s_t.maxCoeff() > opts.tau;
      const bool dissimilar = opts.strict ? !st_has : (!s_has && !st_has);
      if (dissimilar) {
        report.rejected.push_back({qa.id, tb.id, RejectStage::dissimilar, s_tq});
      } else if (s_tq > opts.tau) {
        report.matched.push_back({qa.id, tb.id, s_tq});
      } else {
        report.rejected.push_back({qa.id, tb.id, RejectStage::below_threshold, s_tq});
      }
    }
  }
  return report;
}

BalanceResult balance_sample(const std::vector<SubjectRecord>& subjects, const BalanceOptions& opts) {
  if (!(opts.bin_h > 0.0) || !(opts.bin_w > 0.0) || opts.cap < 0) {
    throw Error(ErrorCode::invalid_argument, "bin widths must be positive and cap non-negative");
  }
  BalanceResult out;
  std::map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>> bins;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const auto& s = subjects[i];
    if (!s.height || !s.weight) {
      ++out.skipped;
      continue;
    }
    const auto hb = static_cast<std::int64_t>(std::floor(*s.height / opts.bin_h));
    const auto wb = static_cast<std::int64_t>(std::floor(*s.weight / opts.bin_w));
    bins[{hb, wb}].push_back(i);
  }
  out.num_bins = bins.size();
  std::vector<std::size_t> picked;
  const CounterRng root(opts.seed);
  for (auto& [key, members] : bins) {
    const std::uint64_t tag =
        (static_cast<std::uint64_t>(key.first) << 32) ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.second));
    CounterRng rng = root.fork(tag);
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(opts.cap), members.size());
    // Partial Fisher-Yates.
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.next_below(members.size() - k));
      std::swap(members[k], members[j]);
      picked.push_back(members[k]);
    }
  }
  std::sort(picked.begin(), picked.end());
  for (std::size_t i : picked) out.selected.push_back(subjects[i].id);
  return out;
}

std::vector<std::string> bmi_weighted_pick(const std::vector<SubjectRecord>& subjects, std::size_t count,
                                           std::uint64_t seed) {
  if (count > subjects.size()) {
    throw Error(ErrorCode::invalid_argument,
                "cannot pick " + std::to_string(count) + " of " + std::to_string(subjects.size()) + " subjects",
                "count");
  }
  std::vector<std::pair<double, std::size_t>> keys;
  const CounterRng rng(seed);
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    const auto bmi = subjects[i].effective_bmi();
    if (!bmi || !(*bmi > 0.0)) {
      throw Error(ErrorCode::invalid_argument, "subject has no positive BMI", subjects[i].id);
    }
    // log(u^(1/w)); u is drawn from (0, 1] so the log stays finite.
    const double u = 1.0 - rng.uniform(i);
    keys.emplace_back(std::log(u) / *bmi, i);
  }
  std::sort(keys.begin(), keys.end(), [](const auto& x, const auto& y) {
    return x.first != y.first ? x.first > y.first : x.second < y.second;
  });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(subjects[keys[k].second].id);
  return out;
}

}  // namespace shapekit
