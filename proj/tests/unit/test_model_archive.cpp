// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <fstream>

#include <json.hpp>

#include "shapekit/error.hpp"
#include "shapekit/fixture.hpp"
#include "shapekit/model_archive.hpp"
#include "shapekit/primitives.hpp"
#include "shapekit/zip.hpp"
#include "test_paths.hpp"

namespace shapekit {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::uint8_t> bytes_of(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const fs::path& p) { return json::parse(std::ifstream(p)); }
void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

ErrorCode load_code(const fs::path& p, std::string* context = nullptr) {
  try {
    (void)load_model(p);
  } catch (const Error& e) {
    if (context) *context = e.context();
    return e.code();
  }
  ADD_FAILURE() << "load succeeded";
  return ErrorCode::invalid_argument;
}

TEST(ModelArchive, MinimalCubeArchive) {
  const auto dir = testing::scratch_dir("archive-cube");
  const BodyModel cube(make_banded_cube(4), Eigen::MatrixXd::Zero(60, 1), Gender::female, {16, 0, 12, 8, 4});
  save_model(cube, dir / "cube");
  const BodyModel m = load_model(dir / "cube");
  EXPECT_EQ(m.num_betas(), 1);
  EXPECT_EQ(m.num_vertices(), 20u);
  EXPECT_EQ(m.gender(), Gender::female);
  EXPECT_TRUE(m.template_mesh().closed());
  EXPECT_TRUE(m.shape_basis().isZero(0.0));
}

TEST(ModelArchive, EightVertexCubeFailsLandmarkOrder) {
  // Only two y levels exist, so chest > waist > hip cannot hold.
  EXPECT_THROW(BodyModel(make_unit_cube(), Eigen::MatrixXd::Zero(24, 1), Gender::neutral, {4, 0, 4, 4, 0}), Error);
}

TEST(ModelArchive, FixtureRoundTripIsBitExact) {
  const auto dir = testing::scratch_dir("archive-rt");
  const BodyModel fx = make_fixture_model();
  save_model(fx, dir / "a");
  const BodyModel loaded = load_model(dir / "a");
  EXPECT_TRUE((loaded.template_mesh().vertices().array() == fx.template_mesh().vertices().array()).all());
  EXPECT_TRUE((loaded.shape_basis().array() == fx.shape_basis().array()).all());
  EXPECT_EQ(loaded.template_mesh().topology_hash(), fx.template_mesh().topology_hash());
  save_model(loaded, dir / "b");
  for (const char* f : {"template_vertices.bin", "triangles.bin", "shape_basis.bin", "manifest.json"}) {
    EXPECT_EQ(bytes_of(dir / "a" / f), bytes_of(dir / "b" / f)) << f;
  }
  EXPECT_EQ(read_json(dir / "a/manifest.json")["metadata"]["generator"], "capsule-person");
}

TEST(ModelArchive, ZipMatchesDirectory) {
  const auto dir = testing::scratch_dir("archive-zip");
  const BodyModel fx = make_fixture_model();
  save_model_zip(fx, dir / "m.zip");
  const BodyModel z = load_model(dir / "m.zip");
  EXPECT_TRUE((z.shape_basis().array() == fx.shape_basis().array()).all());
  EXPECT_EQ(z.landmarks().chest, fx.landmarks().chest);
}

TEST(ModelArchive, ZipWithTopFolder) {
  const auto dir = testing::scratch_dir("archive-zipdir");
  const BodyModel fx = make_fixture_model();
  save_model(fx, dir / "m");
  std::map<std::string, std::vector<std::uint8_t>> members;
  for (const auto& e : fs::directory_iterator(dir / "m")) {
    members["capsule/" + e.path().filename().string()] = bytes_of(e.path());
  }
  write_zip(dir / "nested.zip", members);
  EXPECT_EQ(load_model(dir / "nested.zip").num_vertices(), fx.num_vertices());
}

TEST(ModelArchive, PassthroughBuffersSurvive) {
  const auto dir = testing::scratch_dir("archive-pass");
  save_model(make_fixture_model(), dir / "m");
  json man = read_json(dir / "m/manifest.json");
  man["buffers"]["pose_basis"] = {{"file", "pose.bin"}, {"dtype", "float32"}, {"shape", {2}}};
  write_json(dir / "m/manifest.json", man);
  std::ofstream(dir / "m/pose.bin", std::ios::binary) << "abcdefgh";
  const BodyModel m = load_model(dir / "m");
  ASSERT_EQ(m.passthrough_buffers().size(), 1u);
  save_model(m, dir / "n");
  EXPECT_EQ(bytes_of(dir / "n/pose.bin"), bytes_of(dir / "m/pose.bin"));
}

class BrokenArchive : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = testing::scratch_dir("archive-broken");
    save_model(make_fixture_model(), dir_ / "m");
    manifest_ = read_json(dir_ / "m/manifest.json");
  }
  ErrorCode reload(std::string* context = nullptr) {
    write_json(dir_ / "m/manifest.json", manifest_);
    return load_code(dir_ / "m", context);
  }
  fs::path dir_;
  json manifest_;
};

TEST_F(BrokenArchive, WrongBasisVertexCount) {
  manifest_["buffers"]["shape_basis"]["shape"] = {2049, 3, 4};
  std::string ctx;
  EXPECT_EQ(reload(&ctx), ErrorCode::dimension_mismatch);
  EXPECT_EQ(ctx, "manifest.buffers.shape_basis.shape");
}

TEST_F(BrokenArchive, MissingLandmark) {
  manifest_["landmarks"].erase("waist");
  std::string ctx;
  EXPECT_EQ(reload(&ctx), ErrorCode::missing_landmark);
  EXPECT_EQ(ctx, "manifest.landmarks.waist");
}

TEST_F(BrokenArchive, LandmarkOutOfRange) {
  manifest_["landmarks"]["chest"] = 99999;
  std::string ctx;
  EXPECT_EQ(reload(&ctx), ErrorCode::missing_landmark);
  EXPECT_EQ(ctx, "landmarks.chest");
}

TEST_F(BrokenArchive, MissingField) {
  manifest_.erase("num_betas");
  std::string ctx;
  EXPECT_EQ(reload(&ctx), ErrorCode::malformed_manifest);
  EXPECT_EQ(ctx, "manifest.num_betas");
}

TEST_F(BrokenArchive, WrongDtype) {
  manifest_["buffers"]["triangles"]["dtype"] = "int64";
  EXPECT_EQ(reload(), ErrorCode::malformed_manifest);
}

TEST_F(BrokenArchive, ZUpRejected) {
  manifest_["up_axis"] = "z";
  EXPECT_EQ(reload(), ErrorCode::unsupported);
}

TEST_F(BrokenArchive, TruncatedBuffer) {
  auto bytes = bytes_of(dir_ / "m/template_vertices.bin");
  bytes.resize(bytes.size() - 12);
  std::ofstream(dir_ / "m/template_vertices.bin", std::ios::binary)
      .write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  EXPECT_EQ(reload(), ErrorCode::dimension_mismatch);
}

TEST_F(BrokenArchive, NotJson) {
  std::ofstream(dir_ / "m/manifest.json") << "{ nope";
  EXPECT_EQ(load_code(dir_ / "m"), ErrorCode::malformed_manifest);
}

TEST(ModelArchive, MissingPath) { EXPECT_EQ(load_code("/nonexistent/model"), ErrorCode::io_error); }

TEST(ModelArchive, ShippedFixtureLoads) {
  const BodyModel m = load_model(testing::data_dir() / "capsule-person");
  const BodyModel fx = make_fixture_model();
  EXPECT_EQ(m.num_betas(), 4);
  EXPECT_EQ(m.landmarks().hip, fx.landmarks().hip);
  EXPECT_TRUE((m.template_mesh().vertices().array() == fx.template_mesh().vertices().array()).all());
}

}  // namespace
}  // namespace shapekit
