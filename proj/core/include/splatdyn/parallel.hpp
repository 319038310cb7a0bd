#pragma once

#include <cstddef>
#include <functional>

namespace splatdyn {

int hardware_threads() noexcept;

// Splits [0, n) into `threads` contiguous chunks and runs `body(begin, end)`
// on each, the first chunk on the calling thread. Chunk boundaries depend
// only on (n, threads). If several chunks throw, the exception from the
// lowest chunk is rethrown.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

// Runs body(c) for c in [0, chunks), each on its own thread (chunk 0 on
// the caller). Same exception policy as parallel_for.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body);

}  // namespace splatdyn
