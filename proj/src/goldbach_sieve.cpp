#include "primelab/goldbach_sieve.hpp"

#include <algorithm>
#include <bit>

#include "primelab/errors.hpp"
#include "primelab/parallel.hpp"
#include "primelab/wheel.hpp"

namespace primelab {

namespace {

void require_even_at_least(std::uint64_t p_a, std::uint64_t lowest, const char* what) {
  if (p_a % 2 != 0 || p_a < lowest) {
    throw DomainError(std::string(what) + ": p_a must be even and >= " + std::to_string(lowest) + ", got " +
                      std::to_string(p_a));
  }
}

// primes P with P*P < p_a
std::vector<std::uint64_t> generator_primes(std::uint64_t p_a) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p < p_a; p = next_prime(p)) out.push_back(p);
  return out;
}

// 64 bits of `bits` starting at bit `pos`; bits past the end read as zero.
std::uint64_t bits_at(const Bitmap& bits, std::uint64_t pos) {
  const auto words = bits.words();
  const std::uint64_t q = pos / Bitmap::kWordBits;
  const unsigned s = static_cast<unsigned>(pos % Bitmap::kWordBits);
  const std::uint64_t lo = q < words.size() ? words[q] : 0;
  if (s == 0) return lo;
  const std::uint64_t hi = q + 1 < words.size() ? words[q + 1] : 0;
  return (lo >> s) | (hi << (Bitmap::kWordBits - s));
}

std::uint64_t domain_mask(std::uint64_t word_base, std::uint64_t lo, std::uint64_t hi) {
  // bits for values in [lo, hi] within [word_base, word_base + 64)
  std::uint64_t mask = ~std::uint64_t{0};
  if (lo > word_base) mask &= ~std::uint64_t{0} << (lo - word_base);
  if (hi < word_base + 63) mask &= (std::uint64_t{1} << (hi - word_base + 1)) - 1;
  return mask;
}

// Incremental mark state for a sweep worker. `direct` holds every P*n (n > 1)
// for the active generators, indexed by value. `mirrored` holds the odd-prime
// multiples reflected through p_a_max, so p_a - N lands at p_a_max - p_a + N.
class SweepState {
 public:
  SweepState(std::uint64_t p_a_max, const std::vector<std::uint64_t>& primes)
      : p_a_max_(p_a_max), primes_(primes), direct_(p_a_max + 1), mirrored_(p_a_max + 1) {}

  void advance_to(std::uint64_t p_a) {
    while (next_ < primes_.size() && primes_[next_] * primes_[next_] < p_a) {
      const std::uint64_t p = primes_[next_++];
      for (std::uint64_t m = 2 * p; m <= p_a_max_; m += p) {
        direct_.set(m);
        if (p != 2) mirrored_.set(p_a_max_ - m);
      }
    }
  }

  const Bitmap& direct() const { return direct_; }
  const Bitmap& mirrored() const { return mirrored_; }

 private:
  std::uint64_t p_a_max_;
  const std::vector<std::uint64_t>& primes_;
  std::size_t next_ = 0;
  Bitmap direct_;
  Bitmap mirrored_;
};

GoldbachCheck check_one(std::uint64_t p_a, std::uint64_t p_a_max, const SweepState& state, const Bitmap& prime_bits,
                        const Bitmap& prime_mirror) {
  GoldbachCheck out;
  out.p_a = p_a;
  const std::uint64_t lo = 2;
  const std::uint64_t hi = p_a - 2;
  const std::uint64_t shift = p_a_max - p_a;
  for (std::uint64_t base = 0; base <= hi; base += Bitmap::kWordBits) {
    const std::uint64_t mask = domain_mask(base, lo, hi);
    const std::uint64_t direct = bits_at(state.direct(), base);
    const std::uint64_t translated = bits_at(state.mirrored(), shift + base);
    const std::uint64_t marked = (direct | translated) & mask;
    const std::uint64_t pair = bits_at(prime_bits, base) & bits_at(prime_mirror, shift + base) & mask;
    const std::uint64_t unmarked = ~marked & mask;
    out.marked += static_cast<std::uint64_t>(std::popcount(marked));
    out.unmarked += static_cast<std::uint64_t>(std::popcount(unmarked));
    out.oracle_pairs += static_cast<std::uint64_t>(std::popcount(pair));
    out.valid_witnesses += static_cast<std::uint64_t>(std::popcount(unmarked & pair));
    for (std::uint64_t bad = unmarked & ~pair; bad != 0; bad &= bad - 1) {
      const std::uint64_t n = base + static_cast<std::uint64_t>(std::countr_zero(bad));
      if (n == 2) {
        out.n2_invalid = true;
      } else {
        out.unsound.push_back(n);
      }
    }
    for (std::uint64_t miss = marked & pair; miss != 0; miss &= miss - 1) {
      out.missed.push_back(base + static_cast<std::uint64_t>(std::countr_zero(miss)));
    }
  }
  return out;
}

bool is_power_of_two_plus_two(std::uint64_t p_a) {
  return p_a >= 4 && std::has_single_bit(p_a - 2) && p_a - 2 >= 4;
}

}  // namespace

std::vector<std::uint64_t> GoldbachMarkSet::unmarked() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = united.find_next_clear(2); n + 2 <= p_a; n = united.find_next_clear(n + 1)) {
    out.push_back(n);
  }
  return out;
}

GoldbachMarkSet build_goldbach_marks(std::uint64_t p_a) {
  require_even_at_least(p_a, 4, "build_goldbach_marks");
  GoldbachMarkSet set;
  set.p_a = p_a;
  set.direct = Bitmap(p_a - 1);
  set.translated = Bitmap(p_a - 1);
  set.generators = generator_primes(p_a);
  const std::uint64_t hi = p_a - 2;
  for (auto p : set.generators) {
    for (std::uint64_t n = 2 * p; n <= hi; n += p) set.direct.set(n);
    if (p == 2) continue;
    for (std::uint64_t m = 2 * p; m + 2 <= p_a; m += p) set.translated.set(p_a - m);
  }
  set.united = set.direct;
  set.united |= set.translated;
  return set;
}

std::vector<std::uint64_t> translated_marks(std::uint64_t p_a, std::uint64_t p) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t m = 2 * p; m + 2 <= p_a; m += p) out.push_back(p_a - m);
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<std::uint64_t> marks_translated_rewritten(std::uint64_t p_a, std::uint64_t p) {
  if (p % 2 == 0 || p < 3) throw DomainError("marks_translated_rewritten: P must be an odd prime, got " + std::to_string(p));
  if (p * p >= p_a) {
    throw DomainError("marks_translated_rewritten: need P*P < p_a (P=" + std::to_string(p) +
                      ", p_a=" + std::to_string(p_a) + ")");
  }
  const std::uint64_t q = p_a / p;
  const std::uint64_t offset = p * (q + 1) - p_a;
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 1; n < q; ++n) {
    if (p * n < offset) continue;
    const std::uint64_t v = p * n - offset;
    if (v >= 2 && v + 2 <= p_a) out.push_back(v);
  }
  return out;
}

std::vector<GoldbachWitness> goldbach_witnesses(std::uint64_t p_a) {
  const auto marks = build_goldbach_marks(p_a);
  std::vector<GoldbachWitness> out;
  for (auto n : marks.unmarked()) out.push_back({n, p_a - n, is_prime(n) && is_prime(p_a - n)});
  return out;
}

std::vector<GoldbachCheck> sweep_goldbach(std::uint64_t p_a_max, unsigned threads) {
  require_even_at_least(p_a_max, 4, "sweep_goldbach");
  const auto table = sieve_primes(p_a_max);
  Bitmap prime_bits(p_a_max + 1);
  Bitmap prime_mirror(p_a_max + 1);
  for (auto p : table.primes) {
    prime_bits.set(p);
    prime_mirror.set(p_a_max - p);
  }
  std::vector<std::uint64_t> small;
  for (auto p : table.primes) {
    if (p * p >= p_a_max) break;
    small.push_back(p);
  }

  const std::uint64_t count = (p_a_max - 4) / 2 + 1;
  std::vector<GoldbachCheck> results(count);
  const auto chunks = split_range(0, count, threads);
  for_each_chunk(chunks, threads, [&](const Chunk& c) {
    SweepState state(p_a_max, small);
    for (std::uint64_t i = c.begin; i < c.end; ++i) {
      const std::uint64_t p_a = 4 + 2 * i;
      state.advance_to(p_a);
      results[i] = check_one(p_a, p_a_max, state, prime_bits, prime_mirror);
    }
  });
  return results;
}

std::string factorization_string(std::uint64_t m) {
  if (m < 2) return std::to_string(m);
  std::string out;
  auto emit = [&out](std::uint64_t p, unsigned e) {
    if (!out.empty()) out += '*';
    out += std::to_string(p);
    if (e > 1) out += '^' + std::to_string(e);
  };
  for (std::uint64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    unsigned e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e) emit(p, e);
  }
  if (m > 1) emit(m, 1);
  return out;
}

FindingsReport goldbach_equivalence_report(const std::vector<GoldbachCheck>& sweep, std::uint64_t p_a_max) {
  FindingsReport report;
  report.claim = "goldbach.equivalence";
  report.params = {{"p_a_max", p_a_max}};
  std::uint64_t unsound = 0;
  std::uint64_t missed = 0;
  std::uint64_t bound_violations = 0;
  std::uint64_t n2 = 0;
  std::uint64_t n2_outside_powers = 0;
  std::vector<Json> records;
  for (const auto& c : sweep) {
    for (auto n : c.unsound) {
      records.push_back({{"kind", "unsound-witness"}, {"p_a", c.p_a}, {"n", n}});
    }
    for (auto n : c.missed) {
      records.push_back({{"kind", "missed-pair"}, {"p_a", c.p_a}, {"n", n}});
    }
    if (!c.count_bound_holds()) {
      records.push_back({{"kind", "count-bound-violation"}, {"p_a", c.p_a}, {"marked", c.marked}});
    }
    unsound += c.unsound.size();
    missed += c.missed.size();
    bound_violations += !c.count_bound_holds();
    if (c.n2_invalid) {
      ++n2;
      n2_outside_powers += !is_power_of_two_plus_two(c.p_a);
    }
  }
  report.details.push_back({{"kind", "summary"},
                            {"p_a_checked", sweep.size()},
                            {"unsound_witnesses", unsound},
                            {"missed_pairs", missed},
                            {"count_bound_violations", bound_violations},
                            {"n2_anomalies", n2},
                            {"n2_anomalies_not_power_of_two_plus_two", n2_outside_powers}});
  for (auto& r : records) report.details.push_back(std::move(r));
  if (unsound + missed + bound_violations > 0) {
    report.status = FindingStatus::Counterexample;
  } else if (n2 > 0) {
    report.status = FindingStatus::DocumentedAnomaly;
  }
  return report;
}

FindingsReport goldbach_n2_report(const std::vector<GoldbachCheck>& sweep, std::uint64_t p_a_max) {
  FindingsReport report;
  report.claim = "goldbach.n2-anomaly";
  report.params = {{"p_a_max", p_a_max}};
  for (const auto& c : sweep) {
    if (!c.n2_invalid) continue;
    report.details.push_back({{"kind", "n2-anomaly"},
                              {"p_a", c.p_a},
                              {"n_high", c.p_a - 2},
                              {"factorization", factorization_string(c.p_a - 2)},
                              {"power_of_two_plus_two", is_power_of_two_plus_two(c.p_a)}});
  }
  report.status = report.details.empty() ? FindingStatus::Confirmed : FindingStatus::DocumentedAnomaly;
  return report;
}

FindingsReport verify_goldbach_equivalence(std::uint64_t p_a_max, unsigned threads) {
  Stopwatch clock;
  auto report = goldbach_equivalence_report(sweep_goldbach(p_a_max, threads), p_a_max);
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

ReducedSieve reduced_sieve(std::uint64_t p_a) {
  require_even_at_least(p_a, 8, "reduced_sieve");
  ReducedSieve out;
  out.p_a = p_a;
  out.divisible_by_three = p_a % 3 == 0;
  const std::uint64_t hi = p_a - 2;

  // multiples of 3, and the 3-translations 3n - offset for 0 < n <= floor(p_a/3)
  std::vector<bool> removed(p_a + 1, false);
  for (std::uint64_t v = 3; v <= hi; v += 3) removed[v] = true;
  const std::uint64_t q3 = p_a / 3;
  const std::uint64_t offset3 = 3 * (q3 + 1) - p_a;
  for (std::uint64_t n = 1; n <= q3; ++n) {
    if (3 * n < offset3) continue;
    const std::uint64_t v = 3 * n - offset3;
    if (v >= 2 && v <= hi) removed[v] = true;
  }
  for (std::uint64_t v = 2; v <= hi; ++v) {
    if (!removed[v]) out.domain.push_back(v);
  }
  out.spacing_ok = std::adjacent_find(out.domain.begin(), out.domain.end(),
                                      [](std::uint64_t a, std::uint64_t b) { return b - a != 3; }) == out.domain.end();

  for (std::uint64_t p = 5; p * p < p_a; p = next_prime(p)) out.generators.push_back(p);
  std::vector<bool> marks(p_a + 1, false);
  for (auto p : out.generators) {
    for (std::uint64_t v = 2 * p; v <= hi; v += p) marks[v] = true;
    for (auto v : marks_translated_rewritten(p_a, p)) marks[v] = true;
  }
  for (auto v : out.domain) {
    (marks[v] ? out.marked : out.unmarked).push_back(v);
  }
  return out;
}

FindingsReport verify_reduced_spacing(std::uint64_t p_a_max) {
  Stopwatch clock;
  FindingsReport report;
  report.claim = "goldbach.reduced-spacing";
  report.params = {{"p_a_max", p_a_max}};
  std::uint64_t checked = 0;
  std::uint64_t flagged = 0;
  std::uint64_t broken = 0;
  std::vector<Json> records;
  for (std::uint64_t p_a = 8; p_a <= p_a_max; p_a += 2) {
    const auto r = reduced_sieve(p_a);
    ++checked;
    if (r.spacing_ok) continue;
    if (r.divisible_by_three) {
      ++flagged;
    } else {
      ++broken;
    }
    records.push_back({{"kind", r.divisible_by_three ? "divisible-by-three" : "spacing-violation"},
                       {"p_a", p_a},
                       {"domain_size", r.domain.size()}});
  }
  report.details.push_back(
      {{"kind", "summary"}, {"p_a_checked", checked}, {"divisible_by_three", flagged}, {"spacing_violations", broken}});
  for (auto& r : records) report.details.push_back(std::move(r));
  if (broken > 0) {
    report.status = FindingStatus::Counterexample;
  } else if (flagged > 0) {
    report.status = FindingStatus::DocumentedAnomaly;
  }
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

}  // namespace primelab
