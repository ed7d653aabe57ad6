#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "primelab/bitmap.hpp"
#include "primelab/report.hpp"
#include "primelab/wheel.hpp"

namespace primelab {

// Twin-index sieve. An index n stands for the candidate pair (6n-1, 6n+1).
// A generator P = 6*n1 +/- 1 marks every n = P*np + n1 and n = P*np - n1
// with np >= n1; in residue form, n == n1 (mod P) from P*n1 + n1 onward and
// n == -n1 (mod P) from P*n1 - n1 onward. Unmarked indices are twin pairs.

struct TwinSieveOptions {
  std::optional<std::uint64_t> generator_cap;  // only generators <= cap
  bool composite_generators = false;            // experiment: also use composite 6k+/-1
  unsigned threads = 1;
};

struct TwinMarkSet {
  std::uint64_t n_max = 0;
  Bitmap marked;  // bit n for n in [1, n_max]; bit 0 unused
  std::vector<WheelClass> generators;

  bool is_marked(std::uint64_t n) const { return n >= 1 && n <= n_max && marked.test(n); }
  std::vector<std::uint64_t> marked_indices() const;
  std::vector<std::uint64_t> unmarked_indices() const;
};

struct TwinPair {
  std::uint64_t index = 0;
  std::uint64_t low = 0;
  std::uint64_t high = 0;

  bool operator==(const TwinPair&) const = default;
};

/// Smallest index a generator marks: n1 * (P - 1).
std::uint64_t first_mark(const WheelClass& generator);

/// Index m with P^2 = 6m + 1: P*n1 - n1 for Minus, P*n1 + n1 for Plus.
std::uint64_t square_index(const WheelClass& generator);

/// Literal enumeration of P*np +/- n1 (np >= n1) up to n_max, ascending.
/// Throws DomainError when the generator is composite unless allow_composite.
std::vector<std::uint64_t> composite_indices(const WheelClass& generator, std::uint64_t n_max,
                                             bool allow_composite = false);

/// Throws DomainError for n_max == 0.
TwinMarkSet build_twin_marks(std::uint64_t n_max, const TwinSieveOptions& options = {});

/// Empty for n_max == 0.
std::vector<TwinPair> twin_pairs(std::uint64_t n_max, const TwinSieveOptions& options = {});

/// Compares unmarked indices against the primality oracle on 6n-1 and 6n+1.
FindingsReport verify_twin_equivalence(std::uint64_t n_max, unsigned threads = 1);

struct IntervalBound {
  WheelClass low;                      // P = 6*n1 + 1
  std::uint64_t next_minus = 0;        // 6*(n1 + 1) - 1 = P + 4
  std::uint64_t bound = 0;             // P + 2*n1 + 3
  std::uint64_t low_square_index = 0;  // P*n1 + n1
  std::uint64_t high_square_index = 0; // (P + 4)*(n1 + 1) - (n1 + 1)
  std::uint64_t mark_distance = 0;
  std::uint64_t arrangement_length = 0;  // P + 2*n1 + 1, the translated-window size

  bool matches() const { return mark_distance == bound; }
};

/// Throws DomainError for a Minus generator.
IntervalBound interval_bound(const WheelClass& generator);

struct MarkedRun {
  std::uint64_t length = 0;
  std::uint64_t start = 0;  // 0 when length == 0

  bool operator==(const MarkedRun&) const = default;
};

/// Longest run of consecutive marked indices in [1, n_max]; ties go to the
/// smallest start.
MarkedRun max_marked_run(std::uint64_t n_max, std::optional<std::uint64_t> generator_cap = std::nullopt,
                         unsigned threads = 1);

/// Same, over an already built mark set.
MarkedRun max_marked_run(const TwinMarkSet& marks);

}  // namespace primelab
