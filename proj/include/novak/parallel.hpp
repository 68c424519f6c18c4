#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace novak {

// Splits [lo, hi) into `workers` contiguous chunks and runs
// fn(chunk_lo, chunk_hi, worker_index) on each.  Degree 1 runs inline, so
// callers are trivially correct single-threaded; chunk order is fixed, so
// per-chunk results concatenate deterministically.
template <typename Fn>
void parallel_chunks(std::uint64_t lo, std::uint64_t hi, unsigned workers,
                     Fn&& fn) {
  if (hi <= lo) return;
  if (workers <= 1) {
    fn(lo, hi, 0u);
    return;
  }
  std::uint64_t span = hi - lo;
  if (span < workers) workers = static_cast<unsigned>(span);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::uint64_t chunk = span / workers;
  std::uint64_t extra = span % workers;
  std::uint64_t begin = lo;
  for (unsigned w = 0; w < workers; ++w) {
    std::uint64_t end = begin + chunk + (w < extra ? 1 : 0);
    pool.emplace_back([&fn, begin, end, w] { fn(begin, end, w); });
    begin = end;
  }
  for (auto& t : pool) t.join();
}

}  // namespace novak
