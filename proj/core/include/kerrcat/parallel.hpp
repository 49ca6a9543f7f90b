#pragma once

#include <cstddef>
#include <functional>

namespace kerrcat {

/// Worker count: KERRCAT_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_count();

/// Runs body(i) for i in [0, count) on up to `workers` threads (0 selects
/// worker_count()). Each index runs exactly once; results must be written by
/// index so output order does not depend on scheduling. The first exception
/// thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, int workers = 0);

}  // namespace kerrcat
