#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "primelab/report.hpp"

namespace primelab {

struct GapRecord {
  std::uint64_t p = 0;
  std::uint64_t next_p = 0;
  std::uint64_t gap = 0;
  double bound = 0.0;  // 2*sqrt(p) + 1, informational
  bool within_bound = false;

  bool operator==(const GapRecord&) const = default;
};

/// gap < 2*sqrt(p) + 1, decided exactly as (gap - 1)^2 < 4p.
bool gap_within_bound(std::uint64_t p, std::uint64_t gap);

GapRecord make_gap_record(std::uint64_t p, std::uint64_t next_p);

struct GapScanOptions {
  std::uint64_t segment_size = std::uint64_t{1} << 18;
  unsigned threads = 1;
  std::function<void(const GapRecord&)> on_record;                     // each new maximal gap
  std::function<void(std::uint64_t done, std::uint64_t limit)> on_progress;
};

struct GapScanResult {
  std::uint64_t limit = 0;
  std::uint64_t prime_count = 0;
  std::vector<GapRecord> records;     // record-breaking gaps, ascending p
  std::vector<GapRecord> violations;  // every consecutive pair with within_bound == false

  const GapRecord& max_gap() const { return records.back(); }
};

/// Segmented sieve over [2, limit], consecutive primes both <= limit.
/// Throws DomainError for limit < 3 or segment_size < 64.
GapScanResult scan_gaps(std::uint64_t limit, const GapScanOptions& options = {});

/// "gaps.bound" wrapped around scan_gaps.
FindingsReport gap_bound_report(const GapScanResult& scan, std::uint64_t segment_size);

/// Smallest prime in (n^2, (n+1)^2), if any.
std::optional<std::uint64_t> legendre_witness(std::uint64_t n);

/// "gaps.legendre": a prime in (n^2, (n+1)^2) for every 1 <= n <= n_max.
FindingsReport legendre_check(std::uint64_t n_max, unsigned threads = 1);

}  // namespace primelab
