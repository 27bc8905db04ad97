#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace lexpalo {

/// Worker count: `requested` when non-zero, else LEXPALO_THREADS when set to a
/// positive integer, else the hardware concurrency (at least 1).
inline unsigned resolve_thread_count(unsigned requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LEXPALO_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Computes produce(i) for i in [0, n) on up to `threads` workers and hands the
/// results to consume(i, result) strictly in index order, so any reduction done
/// in `consume` is independent of scheduling. The first exception (by index)
/// is rethrown.
template <class Produce, class Consume>
void ordered_parallel(std::size_t n, unsigned threads, Produce&& produce, Consume&& consume) {
  using Result = decltype(produce(std::size_t{}));
  threads = std::max(1u, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) consume(i, produce(i));
    return;
  }
  const std::size_t batch = static_cast<std::size_t>(threads) * 2;
  for (std::size_t begin = 0; begin < n; begin += batch) {
    const std::size_t end = std::min(n, begin + batch);
    std::vector<std::optional<Result>> results(end - begin);
    std::vector<std::exception_ptr> errors(end - begin);
    std::atomic<std::size_t> next{begin};
    {
      std::vector<std::jthread> pool;
      const std::size_t workers = std::min<std::size_t>(threads, end - begin);
      for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < end; i = next++) {
            try {
              results[i - begin].emplace(produce(i));
            } catch (...) {
              errors[i - begin] = std::current_exception();
            }
          }
        });
      }
    }
    for (std::size_t i = begin; i < end; ++i) {
      if (errors[i - begin]) std::rethrow_exception(errors[i - begin]);
      consume(i, std::move(*results[i - begin]));
    }
  }
}

}  // namespace lexpalo
