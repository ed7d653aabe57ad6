#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace primelab {

struct Chunk {
  std::uint64_t index;
  std::uint64_t begin;
  std::uint64_t end;
};

// Splits [begin, end) into `parts` contiguous chunks whose interior
// boundaries are multiples of `align`. Empty chunks are dropped.
inline std::vector<Chunk> split_range(std::uint64_t begin, std::uint64_t end, unsigned parts,
                                      std::uint64_t align = 1) {
  std::vector<Chunk> chunks;
  if (end <= begin) return chunks;
  parts = std::max(parts, 1u);
  align = std::max<std::uint64_t>(align, 1);
  const std::uint64_t step = std::max<std::uint64_t>(1, (end - begin + parts - 1) / parts);
  std::uint64_t lo = begin;
  for (unsigned i = 1; i <= parts && lo < end; ++i) {
    std::uint64_t hi = i == parts ? end : begin + step * i;
    hi = std::min(end, (hi + align - 1) / align * align);
    if (hi <= lo) continue;
    chunks.push_back({chunks.size(), lo, hi});
    lo = hi;
  }
  return chunks;
}

// Runs fn(chunk) for every chunk, one thread per chunk when threads > 1.
// The first exception thrown by any worker is rethrown on the caller.
template <class Fn>
void for_each_chunk(const std::vector<Chunk>& chunks, unsigned threads, Fn&& fn) {
  if (threads <= 1 || chunks.size() <= 1) {
    for (const auto& c : chunks) fn(c);
    return;
  }
  std::vector<std::exception_ptr> errors(chunks.size());
  {
    std::vector<std::jthread> workers;
    workers.reserve(chunks.size());
    for (const auto& c : chunks) {
      workers.emplace_back([&fn, &errors, c] {
        try {
          fn(c);
        } catch (...) {
          errors[c.index] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace primelab
