#pragma once

#include <functional>

namespace foresee {

// Number of workers used by parallel_for: hardware concurrency, capped by the
// FORESEE_THREADS environment variable when set (minimum 1).
int worker_count();

// Runs fn(i) for i in [0, n). Work items must write to disjoint state; the
// block partition is deterministic so any per-item seeding stays stable, and
// results must not depend on worker count.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace foresee
