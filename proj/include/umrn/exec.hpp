#pragma once

#include <cstdint>
#include <functional>

namespace umrn {

/// Number of workers used by Monte Carlo drivers; 0 means hardware default.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Run f(i) for i in [0, n). Work items must be independent; results are
/// written into caller-owned per-index slots so aggregation order (and hence
/// the final report) does not depend on the worker count.
void parallel_for(std::uint64_t n, const std::function<void(std::uint64_t)>& f);

}  // namespace umrn
