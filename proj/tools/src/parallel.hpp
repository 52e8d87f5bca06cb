// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace shapekit::cli {

// Calls fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out
// by index, results are written by the callee into slot i, so output order
// never depends on `jobs`. The first exception (lowest index) is rethrown
// after all workers stop.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace shapekit::cli
