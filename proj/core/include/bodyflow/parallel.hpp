// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace bodyflow {

// Process-wide worker count for the parallel maps below. Results never
// depend on it: each index is computed independently and reductions are
// done afterwards in index order.
void set_worker_threads(int n);
int worker_threads();

/// Applies fn(i) for i in [0, n), split across the worker threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace bodyflow
