#include "primelab/suite.hpp"

#include <algorithm>
#include <numeric>

#include "primelab/errors.hpp"
#include "primelab/gap_scan.hpp"
#include "primelab/goldbach_sieve.hpp"
#include "primelab/twin_sieve.hpp"
#include "primelab/wheel.hpp"

namespace primelab {

namespace {

int severity(FindingStatus s) {
  switch (s) {
    case FindingStatus::Confirmed:
      return 0;
    case FindingStatus::DocumentedAnomaly:
      return 1;
    case FindingStatus::Counterexample:
      return 2;
  }
  return 0;
}

FindingsReport timed(FindingsReport report, const Stopwatch& clock) {
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

PatternOptions pattern_options(const SuiteConfig& cfg) { return {cfg.memory_cap_bits, cfg.threads}; }

const std::vector<std::uint64_t> kSmallPrimeSet{5, 7, 11, 13, 17, 19};
// twin window P + 2n + 1 exceeds the modulus 5 when P = 5
const std::vector<std::uint64_t> kTwinPrimeSet{7, 11, 13, 17, 19};

FindingsReport twin_table(const SuiteConfig&) {
  Stopwatch clock;
  FindingsReport r;
  r.claim = "twin.table";
  r.params = {{"n_max", 2}};
  const auto pairs = twin_pairs(2);
  const std::vector<TwinPair> expected{{1, 5, 7}, {2, 11, 13}};
  for (const auto& tp : pairs) r.details.push_back({{"kind", "pair"}, {"n", tp.index}, {"low", tp.low}, {"high", tp.high}});
  if (pairs != expected) {
    r.status = FindingStatus::Counterexample;
    r.details.push_back({{"kind", "table-mismatch"}, {"expected", "[(1: 5,7), (2: 11,13)]"}});
  }
  return timed(std::move(r), clock);
}

FindingsReport twin_interval_bound(const SuiteConfig&) {
  Stopwatch clock;
  constexpr std::uint64_t kLimit = 10000;
  FindingsReport r;
  r.claim = "twin.interval-bound";
  r.params = {{"p_max", kLimit}};
  std::uint64_t checked = 0;
  std::vector<Json> bad;
  for (auto p : sieve_primes(kLimit).primes) {
    if (p % 6 != 1) continue;
    const auto b = interval_bound(*classify_6k(p));
    ++checked;
    if (!b.matches()) {
      bad.push_back({{"kind", "bound-mismatch"}, {"p", p}, {"bound", b.bound}, {"mark_distance", b.mark_distance}});
    }
  }
  const auto seven = interval_bound(*classify_6k(7));
  r.details.push_back({{"kind", "summary"}, {"primes_checked", checked}, {"mismatches", bad.size()}});
  // the strict bound and the translated-window size differ by two; both are reported
  r.details.push_back({{"kind", "window-size"},
                       {"p", 7},
                       {"bound", seven.bound},
                       {"arrangement_length", seven.arrangement_length}});
  for (auto& b : bad) r.details.push_back(std::move(b));
  r.status = bad.empty() ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return timed(std::move(r), clock);
}

FindingsReport twin_composite_redundancy(const SuiteConfig& cfg) {
  Stopwatch clock;
  constexpr std::uint64_t kMax = 10000;
  FindingsReport r;
  r.claim = "twin.composite-redundancy";
  r.params = {{"n_max", kMax}};
  const auto primes_only = build_twin_marks(kMax, {.generator_cap = std::nullopt, .composite_generators = false, .threads = cfg.threads});
  const auto with_composites = build_twin_marks(kMax, {.generator_cap = std::nullopt, .composite_generators = true, .threads = cfg.threads});
  const bool same = primes_only.marked == with_composites.marked;
  r.details.push_back({{"kind", "summary"},
                       {"prime_generators", primes_only.generators.size()},
                       {"all_generators", with_composites.generators.size()},
                       {"identical", same}});
  if (!same) {
    Bitmap diff = with_composites.marked;
    for (auto n : primes_only.marked.set_positions()) diff.reset(n);
    r.details.push_back({{"kind", "extra-marks"}, {"n", diff.set_positions()}});
  }
  r.status = same ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return timed(std::move(r), clock);
}

FindingsReport twin_mark_symmetry(const SuiteConfig& cfg) {
  Stopwatch clock;
  FindingsReport r;
  r.claim = "twin.mark-symmetry";
  r.params = {{"caps", {7, 11, 13}}};
  bool ok = true;
  for (std::uint64_t cap : {7, 11, 13}) {
    const std::uint64_t f = primorial(cap, 5).value;
    const auto marks =
        build_twin_marks(2 * f, {.generator_cap = cap, .composite_generators = false, .threads = cfg.threads});
    std::uint64_t broken = 0;
    for (std::uint64_t res = 1; res < f; ++res) {
      if (marks.marked.test(f + res) != marks.marked.test(2 * f - res)) ++broken;
    }
    ok = ok && broken == 0;
    r.details.push_back({{"kind", "period"}, {"cap", cap}, {"period", f}, {"asymmetric_residues", broken}});
  }
  r.status = ok ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return timed(std::move(r), clock);
}

// With only generators <= cap, a marked index must still be a composite pair.
FindingsReport twin_capped_marks(const SuiteConfig& cfg) {
  Stopwatch clock;
  constexpr std::uint64_t kMax = 100000;
  FindingsReport r;
  r.claim = "twin.capped-marks";
  r.params = {{"n_max", kMax}, {"caps", {5, 7, 11, 13, 17, 19}}};
  for (std::uint64_t cap : {5, 7, 11, 13, 17, 19}) {
    const auto marks =
        build_twin_marks(kMax, {.generator_cap = cap, .composite_generators = false, .threads = cfg.threads});
    std::vector<std::uint64_t> bad;
    for (auto n : marks.marked_indices()) {
      if (is_prime(6 * n - 1) && is_prime(6 * n + 1)) bad.push_back(n);
    }
    r.details.push_back({{"kind", "cap"}, {"cap", cap}, {"marked", marks.marked.count()}, {"twin_marked", bad}});
    if (!bad.empty()) r.status = FindingStatus::Counterexample;
  }
  return timed(std::move(r), clock);
}

FindingsReport goldbach_rewrite(const SuiteConfig&) {
  Stopwatch clock;
  constexpr std::uint64_t kMax = 10000;
  FindingsReport r;
  r.claim = "goldbach.rewrite-equivalence";
  r.params = {{"p_a_max", kMax}};
  const auto primes = sieve_primes(100).primes;
  std::uint64_t pairs = 0;
  std::vector<Json> bad;
  for (std::uint64_t p_a = 4; p_a <= kMax; p_a += 2) {
    for (auto p : primes) {
      if (p == 2) continue;
      if (p * p >= p_a) break;
      ++pairs;
      if (marks_translated_rewritten(p_a, p) != translated_marks(p_a, p)) {
        bad.push_back({{"kind", "rewrite-mismatch"}, {"p_a", p_a}, {"p", p}});
      }
    }
  }
  r.details.push_back({{"kind", "summary"}, {"pairs_checked", pairs}, {"mismatches", bad.size()}});
  for (auto& b : bad) r.details.push_back(std::move(b));
  r.status = bad.empty() ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return timed(std::move(r), clock);
}

FindingsReport wheel_window(const SuiteConfig& cfg) {
  Stopwatch clock;
  const auto pat = build_pattern(7, IndexSpace::TwinIndices, DivisorFamily::TwinWheelPrimes, pattern_options(cfg));
  auto r = symmetric_window_report(pat, "pattern.wheel-window", cfg.threads);
  const auto len = arrangement_length(pat);
  const auto scan = scan_windows(pat, len, cfg.threads);
  const bool centres_free = !pat.is_occupied((pat.modulus - 1) / 2) && !pat.is_occupied((pat.modulus + 1) / 2);
  const bool exact = pat.modulus == 35 && scan.unique && scan.argmax_starts == std::vector<std::uint64_t>{13} &&
                     scan.max_occupied == 8 && len == 10 && centres_free;
  r.details.push_back({{"kind", "worked-example"}, {"window", {13, 22}}, {"matches", exact}});
  if (!exact) r.status = FindingStatus::Counterexample;
  return timed(std::move(r), clock);
}

FindingsReport symmetric_family(const SuiteConfig& cfg, const std::string& claim, IndexSpace mode,
                                std::vector<DivisorFamily> families, const std::vector<std::uint64_t>& primes) {
  Stopwatch clock;
  std::vector<FindingsReport> parts;
  for (auto fam : families) {
    for (auto p : primes) {
      const auto pat = build_pattern(p, mode, fam, pattern_options(cfg));
      parts.push_back(symmetric_window_report(pat, claim, cfg.threads));
    }
  }
  return timed(merge_reports(claim, {{"primes", primes}, {"mode", std::string(to_string(mode))}}, parts), clock);
}

FindingsReport twin_centres(const SuiteConfig& cfg) {
  Stopwatch clock;
  FindingsReport r;
  r.claim = "pattern.twin-centres";
  const std::vector<std::uint64_t> caps{7, 11, 13, 17, 19};
  r.params = {{"primes", caps}};
  bool ok = true;
  for (auto p : caps) {
    const auto pat = build_pattern(p, IndexSpace::TwinIndices, DivisorFamily::TwinWheelPrimes, pattern_options(cfg));
    const std::uint64_t lo = (pat.modulus - 1) / 2;
    const bool free = !pat.is_occupied(lo) && !pat.is_occupied(lo + 1);
    ok = ok && free;
    r.details.push_back({{"kind", "centres"}, {"prime", p}, {"modulus", pat.modulus}, {"centres", {lo, lo + 1}}, {"free", free}});
  }
  r.status = ok ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return timed(std::move(r), clock);
}

FindingsReport jacobsthal_runs(const SuiteConfig& cfg) {
  Stopwatch clock;
  FindingsReport r;
  r.claim = "pattern.jacobsthal-runs";
  r.params = {{"primes", {5, 7, 11, 13}}};
  bool ok = true;
  for (std::uint64_t p : {5, 7, 11, 13}) {
    const auto pat = build_pattern(p, IndexSpace::Integers, DivisorFamily::AllPrimes, pattern_options(cfg));
    const auto run = max_occupied_run(pat);
    const auto gap = max_totative_gap(pat.modulus);
    const bool match = run.length + 1 == gap;
    ok = ok && match;
    r.details.push_back({{"kind", "run"},
                         {"modulus", pat.modulus},
                         {"run_length", run.length},
                         {"run_start", run.start},
                         {"max_totative_gap", gap},
                         {"matches", match}});
  }
  r.status = ok ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return timed(std::move(r), clock);
}

FindingsReport dma_occupancy(const SuiteConfig&) {
  Stopwatch clock;
  std::vector<FindingsReport> parts;
  for (auto p : kSmallPrimeSet) parts.push_back(check_dma_double_occupancy(p));
  return timed(merge_reports("pattern.dma-double-occupancy", {{"primes", kSmallPrimeSet}}, parts), clock);
}

FindingsReport dm_translation(const SuiteConfig& cfg) {
  Stopwatch clock;
  const std::vector<std::uint64_t> primes{7, 11, 13, 17, 19};
  std::vector<FindingsReport> parts;
  for (auto p : primes) parts.push_back(check_dm_translation(p, pattern_options(cfg)));
  return timed(merge_reports("pattern.dm-translation", {{"primes", primes}}, parts), clock);
}

FindingsReport power_minimality(const SuiteConfig&) {
  Stopwatch clock;
  const std::vector<std::uint64_t> primes{5, 7, 11, 13};
  std::vector<FindingsReport> parts;
  for (auto p : primes) parts.push_back(verify_power_minimality(p));
  return timed(merge_reports("pattern.power-minimality", {{"primes", primes}}, parts), clock);
}

FindingsReport gaps_bound(const SuiteConfig& cfg) {
  Stopwatch clock;
  constexpr std::uint64_t kLimit = 100000000;
  GapScanOptions opts;
  opts.threads = cfg.threads;
  return timed(gap_bound_report(scan_gaps(kLimit, opts), opts.segment_size), clock);
}

std::vector<ClaimEntry> build_registry() {
  using C = const SuiteConfig&;
  std::vector<ClaimEntry> reg;
  reg.push_back({"twin.table", "twin pairs at n = 1, 2 are (5,7) and (11,13)", twin_table});
  reg.push_back({"twin.equivalence", "unmarked twin indices equal oracle twin pairs for n <= 10^6",
                 [](C c) { return verify_twin_equivalence(1000000, c.threads); }});
  reg.push_back({"twin.interval-bound", "square-index distance equals P + 2n + 3 for primes 6n+1 <= 10^4",
                 twin_interval_bound});
  reg.push_back({"twin.composite-redundancy", "composite 6k+/-1 generators add no marks for n <= 10^4",
                 twin_composite_redundancy});
  reg.push_back({"twin.capped-marks", "with generators <= cap, every marked index is a composite pair",
                 twin_capped_marks});
  reg.push_back({"twin.mark-symmetry", "capped twin marks are closed under r -> F - r", twin_mark_symmetry});
  reg.push_back({"goldbach.equivalence", "unmarked N != 2 are Goldbach witnesses for even p_a <= 10^5",
                 [](C c) { return verify_goldbach_equivalence(100000, c.threads); }});
  reg.push_back({"goldbach.n2-anomaly", "even p_a <= 10^5 where N = 2 is unmarked but p_a - 2 is composite",
                 [](C c) {
                   Stopwatch clock;
                   return timed(goldbach_n2_report(sweep_goldbach(100000, c.threads), 100000), clock);
                 }});
  reg.push_back({"goldbach.rewrite-equivalence", "rewritten translation marks equal the direct form for p_a <= 10^4",
                 goldbach_rewrite});
  reg.push_back({"goldbach.reduced-spacing", "3-reduced domain is one residue class mod 3 for p_a <= 10^4",
                 [](C) { return verify_reduced_spacing(10000); }});
  reg.push_back({"pattern.wheel-window", "P = 7 twin wheel: unique maximal window 13..22 with 8/10 occupied",
                 wheel_window});
  reg.push_back({"pattern.integers-symmetric-max", "window [-P, P] attains the maximum occupancy (integers)",
                 [](C c) {
                   return symmetric_family(c, "pattern.integers-symmetric-max", IndexSpace::Integers,
                                           {DivisorFamily::AllPrimes}, kSmallPrimeSet);
                 }});
  reg.push_back({"pattern.odd-symmetric-max", "odd window -P..P attains the maximum occupancy (both families)",
                 [](C c) {
                   return symmetric_family(c, "pattern.odd-symmetric-max", IndexSpace::OddIntegers,
                                           {DivisorFamily::AllOdds, DivisorFamily::OddPrimes}, kSmallPrimeSet);
                 }});
  reg.push_back({"pattern.twin-symmetric-max", "translated twin window attains the maximum occupancy",
                 [](C c) {
                   return symmetric_family(c, "pattern.twin-symmetric-max", IndexSpace::TwinIndices,
                                           {DivisorFamily::TwinWheelPrimes}, kTwinPrimeSet);
                 }});
  reg.push_back({"pattern.twin-centres", "twin-wheel centres (F-1)/2 and (F+1)/2 are never occupied", twin_centres});
  reg.push_back({"pattern.jacobsthal-runs", "longest occupied run + 1 equals the largest totative gap",
                 jacobsthal_runs});
  reg.push_back({"pattern.dma-double-occupancy", "each D_ma occupies exactly +/-d in the symmetric odd window",
                 dma_occupancy});
  reg.push_back({"pattern.dm-translation", "moving a D_m never beats the symmetric odd window", dm_translation});
  reg.push_back({"pattern.power-minimality", "closest pair of powers in 2P+1 integers is 2d, at -d and d",
                 power_minimality});
  reg.push_back({"gaps.bound", "gap < 2 sqrt(p) + 1 for consecutive primes <= 10^8", gaps_bound});
  reg.push_back({"gaps.legendre", "a prime lies in (n^2, (n+1)^2) for n <= 1000",
                 [](C c) { return legendre_check(1000, c.threads); }});
  return reg;
}

}  // namespace

const std::vector<ClaimEntry>& claim_registry() {
  static const std::vector<ClaimEntry> registry = build_registry();
  return registry;
}

std::vector<FindingsReport> run_claims(std::span<const std::string> ids, const SuiteConfig& config) {
  const auto& reg = claim_registry();
  std::vector<const ClaimEntry*> selected;
  if (ids.empty()) {
    for (const auto& c : reg) selected.push_back(&c);
  } else {
    for (const auto& id : ids) {
      const auto it = std::find_if(reg.begin(), reg.end(), [&](const ClaimEntry& c) { return c.id == id; });
      if (it == reg.end()) throw DomainError("unknown claim '" + id + "' (see verify --list)");
      selected.push_back(&*it);
    }
  }
  std::vector<FindingsReport> out;
  for (const auto* c : selected) {
    auto report = c->run(config);
    check_report(report);
    out.push_back(std::move(report));
  }
  return out;
}

FindingsReport merge_reports(std::string claim, Json params, const std::vector<FindingsReport>& parts) {
  FindingsReport out;
  out.claim = std::move(claim);
  out.params = std::move(params);
  for (const auto& part : parts) {
    if (severity(part.status) > severity(out.status)) out.status = part.status;
    for (const auto& d : part.details) {
      Json rec = d;
      rec["at"] = part.params;
      out.details.push_back(std::move(rec));
    }
  }
  return out;
}

std::uint64_t max_totative_gap(std::uint64_t m) {
  std::uint64_t first = 0;
  std::uint64_t prev = 0;
  std::uint64_t best = 0;
  for (std::uint64_t r = 1; r <= m; ++r) {
    if (std::gcd(r, m) != 1) continue;
    if (first == 0) first = r;
    if (prev != 0) best = std::max(best, r - prev);
    prev = r;
  }
  return std::max(best, first + m - prev);
}

}  // namespace primelab
