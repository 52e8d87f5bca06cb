// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

namespace shapekit::testing {

std::filesystem::path golden_dir();
std::filesystem::path data_dir();

// Fresh, empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace shapekit::testing
