// Copyright 2026 The Glyphscape Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace glyphscape {

/// Worker count used when a caller passes 0: GLYPHSCAPE_THREADS if set and
/// positive, otherwise the hardware concurrency (at least 1).
int default_worker_count();

/// Resolves a requested worker count (0 means default).
int resolve_workers(int requested);

/// Runs fn(i) exactly once for every i in [0, count) using up to `workers`
/// threads. Work items are claimed dynamically; callers must make each item
/// independent of which thread runs it.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace glyphscape
