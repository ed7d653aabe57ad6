#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "primelab/bitmap.hpp"
#include "primelab/report.hpp"

namespace primelab {

// Periodic occupancy patterns of small divisors.
//
// Integers mode: slot r is the residue r mod F, F = 2*3*...*P; occupied when
// gcd(r, F) > 1.
//
// Odd-integers mode: slot i stands for the odd residue class 2i + L (mod 2L),
// L = lcm of the divisors (odd). Consecutive slots are consecutive odd
// numbers, slot 0 is the odd value L, and negation of the odd value is
// i -> L - i. Slot i is occupied when some divisor divides i (d | 2i + L iff
// d | i, as d is odd and divides L). The odd values -1 and 1 sit at the slots
// (L - 1)/2 and (L + 1)/2.
//
// Twin-indices mode: slot r is the twin index r mod F, F = 5*7*...*P;
// occupied when r == +/-n1 (mod P') for some generator P' = 6*n1 +/- 1.

enum class IndexSpace { Integers, OddIntegers, TwinIndices };
enum class DivisorFamily { AllPrimes, OddPrimes, AllOdds, TwinWheelPrimes };

std::string_view to_string(IndexSpace mode);
std::string_view to_string(DivisorFamily family);

inline constexpr std::uint64_t kDefaultMemoryCapBits = std::uint64_t{1} << 32;

struct PatternOptions {
  std::uint64_t memory_cap_bits = kDefaultMemoryCapBits;
  unsigned threads = 1;
};

struct ResiduePattern {
  std::uint64_t prime = 0;  // P, the largest divisor considered
  IndexSpace mode = IndexSpace::Integers;
  DivisorFamily family = DivisorFamily::AllPrimes;
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> divisors;
  Bitmap occupied;

  bool is_occupied(std::uint64_t slot) const { return occupied.test(slot % modulus); }
  std::uint64_t occupied_count() const { return occupied.count(); }

  /// Representative value of a slot, centred on zero: the signed residue in
  /// integers and twin modes, the odd number in (-2L, 2L) nearest zero in
  /// odd mode.
  std::int64_t slot_value(std::uint64_t slot) const;
};

/// Default family for a mode: AllPrimes / AllOdds / TwinWheelPrimes.
DivisorFamily default_family(IndexSpace mode);

/// Throws DomainError for a non-prime P (or P < 5 in odd/twin modes) or a
/// family that does not fit the mode, and ResourceError when the modulus
/// exceeds options.memory_cap_bits.
ResiduePattern build_pattern(std::uint64_t p, IndexSpace mode, DivisorFamily family,
                             const PatternOptions& options = {});

struct OccupiedRun {
  std::uint64_t length = 0;
  std::uint64_t start = 0;

  bool operator==(const OccupiedRun&) const = default;
};

/// Longest cyclic run of occupied slots; ties go to the smallest start in
/// [0, modulus). An all-free pattern gives length 0.
OccupiedRun max_occupied_run(const ResiduePattern& pattern);

struct Window {
  std::int64_t start = 0;
  std::uint64_t length = 0;
};

inline constexpr std::size_t kMaxArgmaxListed = 1000;

struct WindowScanReport {
  std::uint64_t window_length = 0;
  std::uint64_t max_occupied = 0;
  std::vector<std::uint64_t> argmax_starts;  // ascending, at most kMaxArgmaxListed
  std::uint64_t argmax_count = 0;
  std::uint64_t symmetric_start = 0;
  std::uint64_t symmetric_count = 0;
  bool symmetric_attains_max = false;
  bool unique = false;
};

/// Window size of the mode's reference arrangement: 2P+1 (integers),
/// P+1 (odd), P+2*n1+1 (twin).
std::uint64_t arrangement_length(const ResiduePattern& pattern);

/// Start of the window of `length` slots centred on the pattern's centre:
/// 0 in integers mode, between (M-1)/2 and (M+1)/2 otherwise. For the
/// reference lengths this is -P, (L-P)/2 and (F-P)/2 - n1.
std::uint64_t symmetric_start(const ResiduePattern& pattern, std::uint64_t length);

/// Occupied slots in the cyclic window [start, start + length).
std::uint64_t window_count(const ResiduePattern& pattern, std::uint64_t start, std::uint64_t length);

/// Exhaustive cyclic sliding-window scan. Throws DomainError when
/// window_length is 0 or exceeds the modulus.
WindowScanReport scan_windows(const ResiduePattern& pattern, std::uint64_t window_length, unsigned threads = 1);

/// Scan at the reference length, reported as a finding under `claim`:
/// confirmed when the symmetric window attains the maximum, counterexample
/// otherwise.
FindingsReport symmetric_window_report(const ResiduePattern& pattern, std::string claim, unsigned threads = 1);

struct DmaDmPartition {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> d_ma;  // odd d, P/2 < d <= P
  std::vector<std::uint64_t> d_m;   // odd d, 1 < d < P/2
};

/// Throws DomainError for P < 5 or even P.
DmaDmPartition partition_dma_dm(std::uint64_t p);

/// "pattern.dma-double-occupancy".
FindingsReport check_dma_double_occupancy(std::uint64_t p);

/// "pattern.dm-translation". Throws DomainError for P < 7.
FindingsReport check_dm_translation(std::uint64_t p, const PatternOptions& options = {});

/// Minimum |x - y| over distinct x, y in [start, start + length) that are
/// both of the form +/-d^k, k >= 1; nullopt when fewer than two lie inside.
/// Throws DomainError for d < 2 or length < 2.
std::optional<std::uint64_t> min_power_distance(const Window& window, std::uint64_t d);

/// "pattern.power-minimality": for every odd d in [3, P], the best window of
/// 2P+1 integers reaches distance 2d, the symmetric one included. The d = 3
/// tie (3 and 9) and the d = 2 edge (2 and 4) are documented anomalies.
FindingsReport verify_power_minimality(std::uint64_t p);

}  // namespace primelab
