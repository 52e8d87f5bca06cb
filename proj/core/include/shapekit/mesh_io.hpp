// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "shapekit/mesh.hpp"

namespace shapekit {

// Wavefront OBJ: `v` and `f` records only. Polygons are fan-triangulated,
// `f a/b/c` texture and normal indices are ignored, negative indices are
// relative to the vertices read so far.
TriangleMesh read_obj(const std::filesystem::path& path);
void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

// PLY, ascii or binary_little_endian. Reads float/double x,y,z vertex
// properties (others skipped) and a face list property.
TriangleMesh read_ply(const std::filesystem::path& path);
enum class PlyEncoding { ascii, binary_little_endian };
void write_ply(const TriangleMesh& mesh, const std::filesystem::path& path,
               PlyEncoding encoding = PlyEncoding::binary_little_endian);

// Dispatch on extension (.obj / .ply, case-insensitive).
TriangleMesh read_mesh(const std::filesystem::path& path);
void write_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace shapekit
