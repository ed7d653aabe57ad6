#include "primelab/gap_scan.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "primelab/bitmap.hpp"
#include "primelab/errors.hpp"
#include "primelab/parallel.hpp"
#include "primelab/wheel.hpp"

namespace primelab {

namespace {

// Primes in [lo, hi) using the odd base primes up to sqrt(hi).
std::vector<std::uint64_t> sieve_segment(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint64_t>& base) {
  std::vector<std::uint64_t> out;
  if (lo <= 2 && hi > 2) out.push_back(2);
  std::uint64_t first_odd = std::max<std::uint64_t>(lo, 3) | 1u;
  if (first_odd >= hi) return out;
  // bit i stands for first_odd + 2i; set means composite
  const std::uint64_t slots = (hi - first_odd + 1) / 2;
  Bitmap composite(slots);
  for (auto p : base) {
    if (p * p >= hi) break;
    std::uint64_t start = std::max(p * p, (first_odd + p - 1) / p * p);
    if (start % 2 == 0) start += p;
    for (std::uint64_t v = start; v < hi; v += 2 * p) composite.set((v - first_odd) / 2);
  }
  for (std::uint64_t i = composite.find_next_clear(0); i < slots; i = composite.find_next_clear(i + 1)) {
    out.push_back(first_odd + 2 * i);
  }
  return out;
}

}  // namespace

bool gap_within_bound(std::uint64_t p, std::uint64_t gap) {
  if (gap == 0) return true;
  const std::uint64_t g = gap - 1;
  return g * g < 4 * p;
}

GapRecord make_gap_record(std::uint64_t p, std::uint64_t next_p) {
  const std::uint64_t gap = next_p - p;
  return {p, next_p, gap, 2.0 * std::sqrt(static_cast<double>(p)) + 1.0, gap_within_bound(p, gap)};
}

GapScanResult scan_gaps(std::uint64_t limit, const GapScanOptions& options) {
  if (limit < 3) throw DomainError("scan_gaps: limit must be >= 3, got " + std::to_string(limit));
  if (options.segment_size < 64) {
    throw DomainError("scan_gaps: segment size must be >= 64, got " + std::to_string(options.segment_size));
  }
  GapScanResult result;
  result.limit = limit;
  std::vector<std::uint64_t> base;
  const std::uint64_t root = isqrt(limit);
  if (root >= 3) {
    for (auto p : sieve_primes(root).primes) {
      if (p != 2) base.push_back(p);
    }
  }

  const unsigned workers = std::max(options.threads, 1u);
  const std::uint64_t seg = options.segment_size;
  const std::uint64_t end = limit + 1;
  std::uint64_t prev = 0;
  std::uint64_t best_gap = 0;
  for (std::uint64_t batch_lo = 0; batch_lo < end;) {
    std::vector<Chunk> chunks;
    for (unsigned k = 0; k < workers && batch_lo < end; ++k) {
      const std::uint64_t hi = batch_lo + std::min(seg, end - batch_lo);
      chunks.push_back({k, batch_lo, hi});
      batch_lo = hi;
    }
    std::vector<std::vector<std::uint64_t>> found(chunks.size());
    for_each_chunk(chunks, workers, [&](const Chunk& c) { found[c.index] = sieve_segment(c.begin, c.end, base); });

    for (const auto& primes : found) {
      for (auto q : primes) {
        ++result.prime_count;
        if (prev != 0) {
          const GapRecord rec = make_gap_record(prev, q);
          if (!rec.within_bound) result.violations.push_back(rec);
          if (rec.gap > best_gap) {
            best_gap = rec.gap;
            result.records.push_back(rec);
            if (options.on_record) options.on_record(rec);
          }
        }
        prev = q;
      }
    }
    if (options.on_progress) options.on_progress(std::min(batch_lo, limit), limit);
  }
  return result;
}

FindingsReport gap_bound_report(const GapScanResult& scan, std::uint64_t segment_size) {
  FindingsReport report;
  report.claim = "gaps.bound";
  report.params = {{"limit", scan.limit}, {"segment", segment_size}};
  const auto& top = scan.max_gap();
  report.details.push_back({{"kind", "summary"},
                            {"prime_count", scan.prime_count},
                            {"records", scan.records.size()},
                            {"max_gap", top.gap},
                            {"max_gap_p", top.p},
                            {"max_gap_next_p", top.next_p},
                            {"violations", scan.violations.size()}});
  for (const auto& v : scan.violations) {
    report.details.push_back({{"kind", "bound-violation"}, {"p", v.p}, {"next_p", v.next_p}, {"gap", v.gap}});
  }
  report.status = scan.violations.empty() ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return report;
}

std::optional<std::uint64_t> legendre_witness(std::uint64_t n) {
  const std::uint64_t q = next_prime(n * n);
  if (q < (n + 1) * (n + 1)) return q;
  return std::nullopt;
}

FindingsReport legendre_check(std::uint64_t n_max, unsigned threads) {
  Stopwatch clock;
  if (n_max < 1) throw DomainError("legendre_check: n_max must be >= 1");
  FindingsReport report;
  report.claim = "gaps.legendre";
  report.params = {{"n_max", n_max}};
  const std::uint64_t top = (n_max + 1) * (n_max + 1);
  const auto table = sieve_primes(top);
  const auto chunks = split_range(1, n_max + 1, std::max(threads, 1u));
  std::vector<std::vector<std::uint64_t>> failures(chunks.size());
  for_each_chunk(chunks, threads, [&](const Chunk& c) {
    for (std::uint64_t n = c.begin; n < c.end; ++n) {
      const auto it = std::upper_bound(table.primes.begin(), table.primes.end(), n * n);
      if (it == table.primes.end() || *it >= (n + 1) * (n + 1)) failures[c.index].push_back(n);
    }
  });
  std::uint64_t total = 0;
  for (const auto& f : failures) total += f.size();
  report.details.push_back({{"kind", "summary"}, {"n_checked", n_max}, {"failures", total}});
  for (const auto& f : failures) {
    for (auto n : f) report.details.push_back({{"kind", "no-prime"}, {"n", n}});
  }
  report.status = total == 0 ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

}  // namespace primelab
