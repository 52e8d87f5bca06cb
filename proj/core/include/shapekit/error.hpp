// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shapekit {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  malformed_manifest,
  missing_landmark,
  io_error,
  parse_error,
  invalid_mesh,
  open_mesh,
  inconsistent_winding,
  empty_intersection,
  rank_deficient,
  divergence,
  unsupported,
};

std::string_view to_string(ErrorCode code);

// Domain error. `context` carries a field path or an offending element
// (e.g. "manifest.landmarks.chest" or "edge 12-40") and is surfaced verbatim
// in the CLI's JSON error object.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string context = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& context() const noexcept { return context_; }

  // {"code": ..., "message": ..., "context": ...}
  std::string to_json() const;

 private:
  ErrorCode code_;
  std::string context_;
};

}  // namespace shapekit
