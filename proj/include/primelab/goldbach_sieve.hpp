#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "primelab/bitmap.hpp"
#include "primelab/report.hpp"

namespace primelab {

// Goldbach range sieve over N in [2, p_a - 2].
//   direct:     N = P*n, n > 1, P prime, P*P < p_a
//   translated: N = p_a - P*n, n > 1, P odd prime, P*P < p_a
// An unmarked N other than 2 is a witness p_a = N + (p_a - N).

struct GoldbachMarkSet {
  std::uint64_t p_a = 0;
  Bitmap direct;      // bit N, size p_a - 1
  Bitmap translated;
  Bitmap united;
  std::vector<std::uint64_t> generators;  // primes P with P*P < p_a

  bool is_marked(std::uint64_t n) const { return n >= 2 && n + 2 <= p_a && united.test(n); }
  std::uint64_t marked_count() const { return united.count(); }
  std::vector<std::uint64_t> unmarked() const;
};

struct GoldbachWitness {
  std::uint64_t n_low = 0;
  std::uint64_t n_high = 0;
  bool valid = false;

  bool operator==(const GoldbachWitness&) const = default;
};

/// Throws DomainError unless p_a is even and >= 4.
GoldbachMarkSet build_goldbach_marks(std::uint64_t p_a);

/// p_a - P*n for n > 1, clipped to [2, p_a - 2], ascending.
std::vector<std::uint64_t> translated_marks(std::uint64_t p_a, std::uint64_t p);

/// P*n - (P*(floor(p_a/P) + 1) - p_a) for 0 < n < floor(p_a/P), clipped to
/// [2, p_a - 2], ascending. Throws DomainError for even P or P*P >= p_a.
std::vector<std::uint64_t> marks_translated_rewritten(std::uint64_t p_a, std::uint64_t p);

/// One witness per unmarked N; valid when both parts pass is_prime.
std::vector<GoldbachWitness> goldbach_witnesses(std::uint64_t p_a);

/// Per-p_a outcome of comparing the mark set against the primality oracle.
struct GoldbachCheck {
  std::uint64_t p_a = 0;
  std::uint64_t marked = 0;
  std::uint64_t unmarked = 0;
  std::uint64_t valid_witnesses = 0;
  std::uint64_t oracle_pairs = 0;        // N in [2, p_a-2] with N and p_a-N prime
  bool n2_invalid = false;               // N = 2 unmarked but p_a - 2 composite
  std::vector<std::uint64_t> unsound;    // unmarked N != 2 that is not a witness
  std::vector<std::uint64_t> missed;     // oracle pair whose N is marked

  bool count_bound_holds() const { return marked + 4 <= p_a; }
};

/// Checks every even p_a in [4, p_a_max]; results ascend by p_a regardless
/// of thread count.
std::vector<GoldbachCheck> sweep_goldbach(std::uint64_t p_a_max, unsigned threads = 1);

/// "goldbach.equivalence": soundness for N != 2, completeness, count bound.
/// N = 2 failures make the status documented-anomaly, never counterexample.
FindingsReport verify_goldbach_equivalence(std::uint64_t p_a_max, unsigned threads = 1);
FindingsReport goldbach_equivalence_report(const std::vector<GoldbachCheck>& sweep, std::uint64_t p_a_max);

/// "goldbach.n2-anomaly": every p_a whose N = 2 witness is invalid, with the
/// factorization of p_a - 2.
FindingsReport goldbach_n2_report(const std::vector<GoldbachCheck>& sweep, std::uint64_t p_a_max);

/// Prime factorization rendered as "2^3*11".
std::string factorization_string(std::uint64_t m);

/// Variant with the prime 3 eliminated up front: multiples of 3 and the
/// 3-translations (including n = floor(p_a/3)) are removed, and the rest is
/// marked with primes 3 < P, P*P < p_a.
struct ReducedSieve {
  std::uint64_t p_a = 0;
  std::vector<std::uint64_t> generators;
  std::vector<std::uint64_t> domain;    // values left after removing the 3-classes
  std::vector<std::uint64_t> marked;    // subset of domain
  std::vector<std::uint64_t> unmarked;  // domain minus marked
  bool divisible_by_three = false;
  bool spacing_ok = false;              // consecutive domain values differ by 3
};

/// Throws DomainError unless p_a is even and >= 8.
ReducedSieve reduced_sieve(std::uint64_t p_a);

/// "goldbach.reduced-spacing" over even p_a in [8, p_a_max].
FindingsReport verify_reduced_spacing(std::uint64_t p_a_max);

}  // namespace primelab
