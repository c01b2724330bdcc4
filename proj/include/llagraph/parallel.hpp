#pragma once

#include <functional>

namespace llagraph {

/// Number of workers to use when the caller asks for 0 ("auto").
int resolve_threads(int requested);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Work items
/// are claimed by index, so callers that write results into slot i get a
/// result independent of the thread count. The first exception thrown by any
/// body is rethrown after all workers finish.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

}  // namespace llagraph
