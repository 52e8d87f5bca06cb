// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/error.hpp"

#include <json.hpp>

namespace shapekit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::malformed_manifest: return "malformed_manifest";
    case ErrorCode::missing_landmark: return "missing_landmark";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::invalid_mesh: return "invalid_mesh";
    case ErrorCode::open_mesh: return "open_mesh";
    case ErrorCode::inconsistent_winding: return "inconsistent_winding";
    case ErrorCode::empty_intersection: return "empty_intersection";
    case ErrorCode::rank_deficient: return "rank_deficient";
    case ErrorCode::divergence: return "divergence";
    case ErrorCode::unsupported: return "unsupported";
  }
  return "unknown";
}

Error::Error(ErrorCode code, std::string message, std::string context)
    : std::runtime_error(std::move(message)), code_(code), context_(std::move(context)) {}

std::string Error::to_json() const {
  nlohmann::json j;
  j["code"] = std::string(to_string(code_));
  j["message"] = what();
  j["context"] = context_;
  return j.dump();
}

}  // namespace shapekit
