#pragma once

#include <cstddef>
#include <functional>

namespace empgram {

/// Number of workers for a request of `threads` (0 = hardware concurrency).
std::size_t resolve_threads(std::size_t threads) noexcept;

/// Calls body(i) for i in [0, count) on up to `threads` workers. Every index
/// runs exactly once; if any call throws, the exception of the lowest failing
/// index is rethrown after all workers have stopped.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace empgram
