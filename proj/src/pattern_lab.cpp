#include "primelab/pattern_lab.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "primelab/errors.hpp"
#include "primelab/parallel.hpp"
#include "primelab/wheel.hpp"

namespace primelab {

namespace {

struct ResidueClass {
  std::uint64_t modulus;
  std::uint64_t residue;
};

std::uint64_t checked_lcm(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t g = std::gcd(a, b);
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a / g, b, &out)) {
    throw ResourceError("pattern modulus exceeds 64 bits");
  }
  return out;
}

void validate_family(IndexSpace mode, DivisorFamily family) {
  const bool ok = (mode == IndexSpace::Integers && family == DivisorFamily::AllPrimes) ||
                  (mode == IndexSpace::OddIntegers &&
                   (family == DivisorFamily::OddPrimes || family == DivisorFamily::AllOdds)) ||
                  (mode == IndexSpace::TwinIndices && family == DivisorFamily::TwinWheelPrimes);
  if (!ok) {
    throw DomainError("divisor family '" + std::string(to_string(family)) + "' does not apply to " +
                      std::string(to_string(mode)) + " mode");
  }
}

std::uint64_t multiples_in(std::uint64_t a, std::uint64_t b, std::uint64_t d) {
  // multiples of d in [a, b]
  return b / d + 1 - (a + d - 1) / d;
}

}  // namespace

std::string_view to_string(IndexSpace mode) {
  switch (mode) {
    case IndexSpace::Integers:
      return "integers";
    case IndexSpace::OddIntegers:
      return "odd-integers";
    case IndexSpace::TwinIndices:
      return "twin-indices";
  }
  return "integers";
}

std::string_view to_string(DivisorFamily family) {
  switch (family) {
    case DivisorFamily::AllPrimes:
      return "primes";
    case DivisorFamily::OddPrimes:
      return "odd-primes";
    case DivisorFamily::AllOdds:
      return "all-odds";
    case DivisorFamily::TwinWheelPrimes:
      return "twin-wheel-primes";
  }
  return "primes";
}

DivisorFamily default_family(IndexSpace mode) {
  switch (mode) {
    case IndexSpace::Integers:
      return DivisorFamily::AllPrimes;
    case IndexSpace::OddIntegers:
      return DivisorFamily::AllOdds;
    case IndexSpace::TwinIndices:
      return DivisorFamily::TwinWheelPrimes;
  }
  return DivisorFamily::AllPrimes;
}

std::int64_t ResiduePattern::slot_value(std::uint64_t slot) const {
  slot %= modulus;
  if (mode == IndexSpace::OddIntegers) {
    const std::uint64_t v = (2 * slot + modulus) % (2 * modulus);
    return v > modulus ? static_cast<std::int64_t>(v) - static_cast<std::int64_t>(2 * modulus)
                       : static_cast<std::int64_t>(v);
  }
  return slot > modulus / 2 ? static_cast<std::int64_t>(slot) - static_cast<std::int64_t>(modulus)
                            : static_cast<std::int64_t>(slot);
}

ResiduePattern build_pattern(std::uint64_t p, IndexSpace mode, DivisorFamily family, const PatternOptions& options) {
  validate_family(mode, family);
  if (!is_prime(p)) throw DomainError("build_pattern: P must be prime, got " + std::to_string(p));
  if (mode != IndexSpace::Integers && p < 5) {
    throw DomainError("build_pattern: P must be >= 5 in " + std::string(to_string(mode)) + " mode");
  }

  ResiduePattern pat;
  pat.prime = p;
  pat.mode = mode;
  pat.family = family;
  std::vector<ResidueClass> classes;
  std::uint64_t modulus = 1;
  switch (family) {
    case DivisorFamily::AllPrimes:
    case DivisorFamily::OddPrimes:
      for (std::uint64_t q = family == DivisorFamily::AllPrimes ? 2 : 3; q <= p; q = next_prime(q)) {
        pat.divisors.push_back(q);
      }
      break;
    case DivisorFamily::AllOdds:
      for (std::uint64_t q = 3; q <= p; q += 2) pat.divisors.push_back(q);
      break;
    case DivisorFamily::TwinWheelPrimes:
      for (std::uint64_t q = 5; q <= p; q = next_prime(q)) pat.divisors.push_back(q);
      break;
  }
  for (auto d : pat.divisors) {
    modulus = checked_lcm(modulus, d);
    if (mode == IndexSpace::TwinIndices) {
      const auto n1 = classify_6k(d)->index;
      classes.push_back({d, n1});
      classes.push_back({d, d - n1});
    } else {
      classes.push_back({d, 0});
    }
  }
  if (modulus > options.memory_cap_bits) {
    throw ResourceError("pattern for P=" + std::to_string(p) + " (" + std::string(to_string(mode)) + ") requires " +
                        std::to_string(modulus) + " bits; memory cap is " + std::to_string(options.memory_cap_bits) +
                        " bits");
  }
  pat.modulus = modulus;
  pat.occupied = Bitmap(modulus);

  const auto chunks = split_range(0, modulus, options.threads, Bitmap::kWordBits);
  for_each_chunk(chunks, options.threads, [&](const Chunk& c) {
    for (const auto& rc : classes) {
      std::uint64_t r = c.begin + (rc.residue + rc.modulus - c.begin % rc.modulus) % rc.modulus;
      for (; r < c.end; r += rc.modulus) pat.occupied.set(r);
    }
  });
  return pat;
}

OccupiedRun max_occupied_run(const ResiduePattern& pattern) {
  const Bitmap& occ = pattern.occupied;
  const std::uint64_t m = pattern.modulus;
  const std::uint64_t total = occ.count();
  if (total == 0) return {0, 0};
  if (total == m) return {m, 0};

  std::vector<OccupiedRun> runs;
  for (std::uint64_t s = occ.find_next_set(0); s < m;) {
    const std::uint64_t e = occ.find_next_clear(s);
    runs.push_back({e - s, s});
    s = occ.find_next_set(e);
  }
  if (runs.size() > 1 && runs.front().start == 0 && runs.back().start + runs.back().length == m) {
    runs.back().length += runs.front().length;
    runs.erase(runs.begin());
  }
  OccupiedRun best;
  for (const auto& r : runs) {
    if (r.length > best.length || (r.length == best.length && r.start < best.start)) best = r;
  }
  return best;
}

std::uint64_t arrangement_length(const ResiduePattern& pattern) {
  switch (pattern.mode) {
    case IndexSpace::Integers:
      return 2 * pattern.prime + 1;
    case IndexSpace::OddIntegers:
      return pattern.prime + 1;
    case IndexSpace::TwinIndices:
      return pattern.prime + 2 * classify_6k(pattern.prime)->index + 1;
  }
  return 0;
}

std::uint64_t symmetric_start(const ResiduePattern& pattern, std::uint64_t length) {
  const std::uint64_t m = pattern.modulus;
  const std::uint64_t half = (length / 2) % m;
  if (pattern.mode == IndexSpace::Integers) return (m - half) % m;
  return ((m + 1) / 2 + m - half) % m;
}

std::uint64_t window_count(const ResiduePattern& pattern, std::uint64_t start, std::uint64_t length) {
  const std::uint64_t m = pattern.modulus;
  start %= m;
  if (length > m) throw DomainError("window length exceeds the pattern modulus");
  if (start + length <= m) return pattern.occupied.count(start, start + length);
  return pattern.occupied.count(start, m) + pattern.occupied.count(0, start + length - m);
}

WindowScanReport scan_windows(const ResiduePattern& pattern, std::uint64_t window_length, unsigned threads) {
  const std::uint64_t m = pattern.modulus;
  if (window_length == 0 || window_length > m) {
    throw DomainError("scan_windows: window length " + std::to_string(window_length) + " outside [1, " +
                      std::to_string(m) + "]");
  }
  struct Partial {
    std::uint64_t best = 0;
    std::uint64_t count = 0;
    std::vector<std::uint64_t> starts;
  };
  const auto chunks = split_range(0, m, std::max(threads, 1u));
  std::vector<Partial> partials(chunks.size());
  const Bitmap& occ = pattern.occupied;
  for_each_chunk(chunks, threads, [&](const Chunk& c) {
    Partial& part = partials[c.index];
    std::uint64_t cnt = window_count(pattern, c.begin, window_length);
    std::uint64_t tail = (c.begin + window_length) % m;
    for (std::uint64_t s = c.begin;;) {
      if (cnt > part.best || part.count == 0) {
        part.best = cnt;
        part.count = 0;
        part.starts.clear();
      }
      if (cnt == part.best) {
        ++part.count;
        if (part.starts.size() < kMaxArgmaxListed) part.starts.push_back(s);
      }
      if (++s == c.end) break;
      cnt = cnt - occ.test(s - 1) + occ.test(tail);
      if (++tail == m) tail = 0;
    }
  });

  WindowScanReport rep;
  rep.window_length = window_length;
  for (const auto& part : partials) rep.max_occupied = std::max(rep.max_occupied, part.best);
  for (const auto& part : partials) {
    if (part.count == 0 || part.best != rep.max_occupied) continue;
    rep.argmax_count += part.count;
    for (auto s : part.starts) {
      if (rep.argmax_starts.size() < kMaxArgmaxListed) rep.argmax_starts.push_back(s);
    }
  }
  rep.symmetric_start = symmetric_start(pattern, window_length);
  rep.symmetric_count = window_count(pattern, rep.symmetric_start, window_length);
  rep.symmetric_attains_max = rep.symmetric_count == rep.max_occupied;
  rep.unique = rep.argmax_count == 1;
  return rep;
}

FindingsReport symmetric_window_report(const ResiduePattern& pattern, std::string claim, unsigned threads) {
  Stopwatch clock;
  const std::uint64_t len = arrangement_length(pattern);
  const auto scan = scan_windows(pattern, len, threads);
  FindingsReport report;
  report.claim = std::move(claim);
  report.params = {{"prime", pattern.prime},
                   {"mode", std::string(to_string(pattern.mode))},
                   {"divisors", std::string(to_string(pattern.family))},
                   {"modulus", pattern.modulus},
                   {"window_length", len}};
  std::vector<std::uint64_t> listed(scan.argmax_starts.begin(),
                                    scan.argmax_starts.begin() + std::min<std::size_t>(scan.argmax_starts.size(), 20));
  Json record = {{"kind", "window-scan"},
                 {"max_occupied", scan.max_occupied},
                 {"argmax_count", scan.argmax_count},
                 {"argmax_starts", listed},
                 {"symmetric_start", scan.symmetric_start},
                 {"symmetric_count", scan.symmetric_count},
                 {"symmetric_attains_max", scan.symmetric_attains_max},
                 {"unique", scan.unique}};
  if (pattern.mode == IndexSpace::TwinIndices) {
    record["exceeds_length_minus_two"] = scan.max_occupied + 2 > len;
  }
  report.details.push_back(std::move(record));
  report.status = scan.symmetric_attains_max ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

DmaDmPartition partition_dma_dm(std::uint64_t p) {
  if (p < 5 || p % 2 == 0) throw DomainError("partition_dma_dm: P must be odd and >= 5, got " + std::to_string(p));
  DmaDmPartition part;
  part.p = p;
  for (std::uint64_t d = 3; d <= p; d += 2) (2 * d > p ? part.d_ma : part.d_m).push_back(d);
  return part;
}

FindingsReport check_dma_double_occupancy(std::uint64_t p) {
  Stopwatch clock;
  const auto part = partition_dma_dm(p);
  FindingsReport report;
  report.claim = "pattern.dma-double-occupancy";
  report.params = {{"prime", p}};
  const auto ip = static_cast<std::int64_t>(p);
  std::set<std::int64_t> all_slots;
  bool ok = true;
  std::vector<Json> records;
  for (auto d : part.d_ma) {
    const auto id = static_cast<std::int64_t>(d);
    std::vector<std::int64_t> slots;
    for (std::int64_t v = -ip; v <= ip; v += 2) {
      if (v % id == 0) slots.push_back(v);
    }
    const bool two = slots == std::vector<std::int64_t>{-id, id};
    ok = ok && two;
    for (auto s : slots) {
      if (!all_slots.insert(s).second) ok = false;
    }
    records.push_back({{"kind", "dma-slots"}, {"d", d}, {"slots", slots}, {"exactly_plus_minus_d", two}});
  }
  const bool disjoint = all_slots.size() == 2 * part.d_ma.size();
  ok = ok && disjoint;
  report.details.push_back({{"kind", "summary"},
                            {"d_ma", part.d_ma},
                            {"d_m", part.d_m},
                            {"occupied_slots", all_slots.size()},
                            {"disjoint", disjoint}});
  for (auto& r : records) report.details.push_back(std::move(r));
  report.status = ok ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

FindingsReport check_dm_translation(std::uint64_t p, const PatternOptions& options) {
  Stopwatch clock;
  if (p < 7) throw DomainError("check_dm_translation: P must be >= 7, got " + std::to_string(p));
  const auto part = partition_dma_dm(p);
  const auto pat = build_pattern(p, IndexSpace::OddIntegers, DivisorFamily::AllOdds, options);
  const std::uint64_t m = pat.modulus;
  const std::uint64_t len = p + 1;
  const std::uint64_t sym = symmetric_start(pat, len);
  const std::uint64_t sym_total = window_count(pat, sym, len);

  FindingsReport report;
  report.claim = "pattern.dm-translation";
  report.params = {{"prime", p}, {"modulus", m}, {"window_length", len}};

  constexpr std::size_t kListedPerDivisor = 50;
  struct PerDivisor {
    std::uint64_t sym_count = 0;
    std::uint64_t gain_windows = 0;
    std::uint64_t best_total_when_gaining = 0;
    std::uint64_t counterexamples = 0;
    std::vector<Json> listed;
  };
  std::vector<PerDivisor> per(part.d_m.size());
  for (std::size_t k = 0; k < part.d_m.size(); ++k) {
    per[k].sym_count = multiples_in(sym, sym + len - 1, part.d_m[k]);
  }

  std::uint64_t total = window_count(pat, 0, len);
  std::uint64_t tail = len % m;
  for (std::uint64_t s = 0; s < m; ++s) {
    for (std::size_t k = 0; k < part.d_m.size(); ++k) {
      const std::uint64_t cnt = multiples_in(s, s + len - 1, part.d_m[k]);
      if (cnt <= per[k].sym_count) continue;
      auto& pd = per[k];
      ++pd.gain_windows;
      pd.best_total_when_gaining = std::max(pd.best_total_when_gaining, total);
      if (total > sym_total) {
        ++pd.counterexamples;
        if (pd.listed.size() < kListedPerDivisor) {
          pd.listed.push_back(
              {{"kind", "dm-counterexample"}, {"d", part.d_m[k]}, {"start", s}, {"d_count", cnt}, {"total", total}});
        }
      }
    }
    total = total - pat.occupied.test(s) + pat.occupied.test(tail);
    if (++tail == m) tail = 0;
  }

  bool any_counter = false;
  std::vector<Json> counter_records;
  for (std::size_t k = 0; k < part.d_m.size(); ++k) {
    const std::uint64_t d = part.d_m[k];
    const std::uint64_t reach = d * (p / d);
    const bool above_half = 2 * reach > p;
    auto& pd = per[k];
    report.details.push_back({{"kind", "dm-divisor"},
                              {"d", d},
                              {"d_times_floor", reach},
                              {"above_half", above_half},
                              {"symmetric_d_count", pd.sym_count},
                              {"gain_windows", pd.gain_windows},
                              {"best_total_when_gaining", pd.best_total_when_gaining},
                              {"symmetric_total", sym_total},
                              {"counterexamples", pd.counterexamples}});
    if (!above_half) {
      counter_records.push_back({{"kind", "dm-below-half"}, {"d", d}, {"d_times_floor", reach}});
    }
    any_counter = any_counter || !above_half || pd.counterexamples > 0;
    for (auto& r : pd.listed) counter_records.push_back(std::move(r));
  }
  for (auto& r : counter_records) report.details.push_back(std::move(r));
  report.status = any_counter ? FindingStatus::Counterexample : FindingStatus::Confirmed;
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

namespace {

// +/-d^k, k >= 1, with d^k <= bound, ascending.
std::vector<std::int64_t> signed_powers(std::uint64_t d, std::uint64_t bound) {
  std::vector<std::int64_t> out;
  for (std::uint64_t v = d; v <= bound;) {
    out.push_back(static_cast<std::int64_t>(v));
    out.push_back(-static_cast<std::int64_t>(v));
    if (__builtin_mul_overflow(v, d, &v)) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<std::uint64_t> min_power_distance(const Window& window, std::uint64_t d) {
  if (d < 2) throw DomainError("min_power_distance: base must be >= 2, got " + std::to_string(d));
  if (window.length < 2) throw DomainError("min_power_distance: window length must be >= 2");
  const std::int64_t lo = window.start;
  const std::int64_t hi = window.start + static_cast<std::int64_t>(window.length) - 1;
  const std::uint64_t reach = std::max(static_cast<std::uint64_t>(lo < 0 ? -lo : lo),
                                       static_cast<std::uint64_t>(hi < 0 ? -hi : hi));
  std::vector<std::int64_t> inside;
  for (auto v : signed_powers(d, reach)) {
    if (v >= lo && v <= hi) inside.push_back(v);
  }
  if (inside.size() < 2) return std::nullopt;
  std::uint64_t best = UINT64_MAX;
  for (std::size_t i = 1; i < inside.size(); ++i) {
    best = std::min(best, static_cast<std::uint64_t>(inside[i] - inside[i - 1]));
  }
  return best;
}

FindingsReport verify_power_minimality(std::uint64_t p) {
  Stopwatch clock;
  if (p < 5) throw DomainError("verify_power_minimality: P must be >= 5, got " + std::to_string(p));
  FindingsReport report;
  report.claim = "pattern.power-minimality";
  const std::uint64_t width = 2 * p + 1;
  report.params = {{"prime", p}, {"window_length", width}};

  bool counter = false;
  bool anomaly = false;
  std::vector<std::uint64_t> bases{2};
  for (std::uint64_t d = 3; d <= p; d += 2) bases.push_back(d);
  for (auto d : bases) {
    // beyond d^(K-1), consecutive powers are more than 2P apart
    std::uint64_t reach = d;
    while (reach * (d - 1) <= 2 * p) reach *= d;
    const auto ireach = static_cast<std::int64_t>(reach);
    const auto iwidth = static_cast<std::int64_t>(width);

    std::optional<std::uint64_t> best;
    std::map<std::pair<std::int64_t, std::int64_t>, std::uint64_t> pairs;  // closest pair -> windows
    std::uint64_t windows = 0;
    const auto powers = signed_powers(d, reach);
    for (std::int64_t s = -ireach - iwidth; s <= ireach; ++s) {
      const auto dist = min_power_distance({s, width}, d);
      if (!dist) continue;
      if (!best || *dist < *best) {
        best = dist;
        pairs.clear();
        windows = 0;
      }
      if (*dist != *best) continue;
      ++windows;
      for (std::size_t i = 1; i < powers.size(); ++i) {
        const auto a = powers[i - 1];
        const auto b = powers[i];
        if (a >= s && b < s + iwidth && static_cast<std::uint64_t>(b - a) == *best) ++pairs[{a, b}];
      }
    }
    const auto symmetric = min_power_distance({-static_cast<std::int64_t>(p), width}, d);
    std::vector<std::vector<std::int64_t>> pair_list;
    for (const auto& [pr, cnt] : pairs) pair_list.push_back({pr.first, pr.second});

    std::string verdict;
    if (d == 2) {
      verdict = "d2-edge";
      anomaly = true;
    } else if (!best || *best < 2 * d || !symmetric || *symmetric != *best) {
      verdict = "below-2d";
      counter = true;
    } else if (pairs.size() > 1) {
      verdict = "tie";
      anomaly = true;
    } else {
      verdict = "confirmed";
    }
    report.details.push_back({{"kind", "power-distance"},
                              {"d", d},
                              {"two_d", 2 * d},
                              {"best", best ? Json(*best) : Json(nullptr)},
                              {"symmetric", symmetric ? Json(*symmetric) : Json(nullptr)},
                              {"achieving_windows", windows},
                              {"achieving_pairs", pair_list},
                              {"verdict", verdict}});
  }
  report.status = counter ? FindingStatus::Counterexample
                          : (anomaly ? FindingStatus::DocumentedAnomaly : FindingStatus::Confirmed);
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

}  // namespace primelab
