// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>

#include <json.hpp>

#include "shapekit/embeddings.hpp"
#include "shapekit/error.hpp"
#include "synthetic.hpp"
#include "test_paths.hpp"

namespace shapekit {
namespace {

TEST(Embeddings, RoundTripWithinFloat32) {
  const auto dir = testing::scratch_dir("emb");
  const auto bench = testing::make_duplicate_benchmark(3, 2, 4, 0.5, 1);
  save_embeddings(bench.site_a, dir / "a.json");
  const EmbeddingSet r = load_embeddings(dir / "a.json");
  ASSERT_EQ(r.subjects.size(), bench.site_a.subjects.size());
  EXPECT_EQ(r.source, "site-a");
  for (std::size_t i = 0; i < r.subjects.size(); ++i) {
    EXPECT_EQ(r.subjects[i].id, bench.site_a.subjects[i].id);
    EXPECT_EQ(r.subjects[i].gender, bench.site_a.subjects[i].gender);
    EXPECT_LT((r.subjects[i].vectors - bench.site_a.subjects[i].vectors).cwiseAbs().maxCoeff(), 1e-7);
  }
  EXPECT_NO_THROW(r.validate());
  EXPECT_TRUE(std::filesystem::exists(dir / "a.f32"));
}

TEST(Embeddings, ValidateRejectsNonUnit) {
  auto bench = testing::make_duplicate_benchmark(1, 0, 2, 0.5, 2);
  bench.site_a.subjects[0].vectors(1, 0) += 0.1;
  EXPECT_THROW(bench.site_a.validate(), Error);
  bench.site_a.subjects[0].vectors.resize(0, 512);
  EXPECT_THROW(bench.site_a.validate(), Error);
}

TEST(Embeddings, ManifestErrors) {
  const auto dir = testing::scratch_dir("emb-bad");
  const auto bench = testing::make_duplicate_benchmark(2, 0, 2, 0.5, 3);
  save_embeddings(bench.site_a, dir / "a.json");
  auto man = nlohmann::json::parse(std::ifstream(dir / "a.json"));
  man["subjects"][1]["rows"] = {2, 9};
  std::ofstream(dir / "b.json") << man.dump();
  std::filesystem::copy_file(dir / "a.f32", dir / "b.f32");
  try {
    (void)load_embeddings(dir / "b.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::malformed_manifest || e.code() == ErrorCode::dimension_mismatch);
  }
  std::ofstream(dir / "c.json") << "[]";
  EXPECT_THROW((void)load_embeddings(dir / "c.json"), Error);
}

TEST(SubjectsCsv, RoundTripAndBmi) {
  const auto dir = testing::scratch_dir("subjects");
  std::vector<SubjectRecord> s(2);
  s[0].id = "a";
  s[0].gender = Gender::female;
  s[0].height = 1.6;
  s[0].weight = 64.0;
  s[0].image_count = 3;
  s[1].id = "b";
  s[1].bmi = 22.5;
  write_subjects_csv(s, dir / "s.csv");
  const auto r = read_subjects_csv(dir / "s.csv");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(*r[0].effective_bmi(), 25.0, 1e-12);
  EXPECT_EQ(*r[1].effective_bmi(), 22.5);
  EXPECT_FALSE(r[1].height.has_value());
  EXPECT_EQ(r[0].image_count, 3);
  std::ofstream(dir / "only_id.csv") << "subject_id\nx\n";
  EXPECT_EQ(read_subjects_csv(dir / "only_id.csv")[0].id, "x");
}

}  // namespace
}  // namespace shapekit
