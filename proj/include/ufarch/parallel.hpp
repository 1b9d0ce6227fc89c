#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ufarch {

/// Default worker count: the hardware concurrency, at least one.
inline unsigned default_workers() {
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(scratch, partial, trial) for trials [0, n) in fixed-size chunks
/// spread over `workers` threads, then folds the per-chunk partials in chunk
/// order. Each thread owns one scratch object (decoders, buffers). Chunk
/// boundaries do not depend on the worker count, so the result is the same
/// for any number of workers provided `merge` is associative.
template <typename Partial, typename MakeScratch, typename MakePartial, typename Body,
          typename Merge>
Partial parallel_trials(std::uint64_t n, unsigned workers, MakeScratch make_scratch,
                        MakePartial make_partial, Body body, Merge merge,
                        std::uint64_t chunk = 4096) {
  if (workers == 0) workers = default_workers();
  const std::uint64_t num_chunks = (n + chunk - 1) / chunk;
  std::vector<Partial> partials;
  partials.reserve(num_chunks);
  for (std::uint64_t c = 0; c < num_chunks; ++c) partials.push_back(make_partial());

  std::mutex mu;
  std::exception_ptr failure;
  std::uint64_t next = 0;
  auto worker = [&] {
    auto scratch = make_scratch();
    while (true) {
      std::uint64_t c;
      {
        std::lock_guard lock(mu);
        if (next >= num_chunks || failure) return;
        c = next++;
      }
      try {
        const std::uint64_t end = std::min(n, (c + 1) * chunk);
        for (std::uint64_t t = c * chunk; t < end; ++t) body(scratch, partials[c], t);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const unsigned threads = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, std::max<std::uint64_t>(1, num_chunks)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  Partial total = make_partial();
  for (auto& part : partials) merge(total, part);
  return total;
}

}  // namespace ufarch
