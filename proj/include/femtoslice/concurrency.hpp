// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace femtoslice {

/// Worker cap: FEMTOSLICE_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs fn(0..n-1) across the worker pool in static contiguous blocks.
/// Callers keep determinism by writing to index-addressed slots and
/// reducing sequentially afterwards; the partition never affects values.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace femtoslice
