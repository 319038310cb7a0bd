#include "splatdyn/parallel.hpp"

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace splatdyn {

int hardware_threads() noexcept {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const std::size_t chunks = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, n);
  if (chunks == 1) {
    body(0, n);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  auto run = [&](std::size_t c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    try {
      body(begin, end);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks - 1);
    for (std::size_t c = 1; c < chunks; ++c) workers.emplace_back(run, c);
    run(0);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace splatdyn

namespace splatdyn {

void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& body) {
  parallel_for(chunks, static_cast<int>(chunks), [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) body(c);
  });
}

}  // namespace splatdyn
