#pragma once

#include <functional>

namespace agf {

// Worker count: AGF_THREADS if set, otherwise hardware concurrency.
int recommended_threads();

// Run tasks 0..count-1 on a small work-stealing pool. Tasks must be
// independent; callers that need determinism key every task's randomness
// and output slot on the task index.
void parallel_for(long count, const std::function<void(long)>& task);

}  // namespace agf
