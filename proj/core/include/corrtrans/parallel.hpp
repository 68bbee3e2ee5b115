#pragma once

#include <cstddef>
#include <functional>

namespace corrtrans {

/// Worker count for `requested` (0 means CORRTRANS_WORKERS, then the hardware
/// concurrency).
unsigned resolve_workers(unsigned requested);

/// Runs body(i) for i in [0, n) on up to `workers` threads. Items are claimed
/// dynamically, so body must not depend on which thread runs it. The first
/// exception thrown by any item is rethrown after all threads join.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace corrtrans
