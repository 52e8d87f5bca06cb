// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "shapekit/body_model.hpp"

namespace shapekit {

// Loads a model archive: a directory or a .zip holding manifest.json plus
// little-endian binary buffers. See docs/format.md. Errors carry the
// offending manifest field path as context.
BodyModel load_model(const std::filesystem::path& archive_path);

// Writes `model` as an archive directory. Binary buffers round-trip
// bit-exactly through load_model for models loaded from an archive.
void save_model(const BodyModel& model, const std::filesystem::path& directory);

// Same archive packed into a single stored .zip.
void save_model_zip(const BodyModel& model, const std::filesystem::path& zip_path);

}  // namespace shapekit
