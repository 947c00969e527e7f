#pragma once

#include <cstddef>
#include <functional>

namespace visnet {

// Worker count: min(hardware concurrency, VISNET_THREADS if set).
int worker_count();

// Static block partition of [0, n) across workers. Deterministic output as
// long as iterations write disjoint state.
void parallel_for(size_t n, const std::function<void(size_t begin, size_t end)>& body);

} // namespace visnet
