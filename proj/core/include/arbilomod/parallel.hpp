// Copyright (c) The arbilomod contributors.
// SPDX-License-Identifier: Apache-2.0

#ifndef ARBILOMOD_PARALLEL_HPP
#define ARBILOMOD_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace arbilomod
{

// ARBILOMOD_WORKERS if set and positive, otherwise the hardware concurrency.
int worker_count();

// Runs fn(0..n-1) on a bounded pool. The first exception thrown by any task is
// rethrown after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &fn,
                  int workers = worker_count());

}  // namespace arbilomod

#endif  // ARBILOMOD_PARALLEL_HPP
