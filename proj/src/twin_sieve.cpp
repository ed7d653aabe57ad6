#include "primelab/twin_sieve.hpp"

#include <algorithm>
#include <string>

#include "primelab/errors.hpp"
#include "primelab/parallel.hpp"

namespace primelab {

namespace {

struct ResidueClass {
  std::uint64_t modulus;
  std::uint64_t residue;
  std::uint64_t threshold;
};

std::vector<WheelClass> collect_generators(std::uint64_t n_max, const TwinSieveOptions& options) {
  std::vector<WheelClass> gens;
  for (std::uint64_t v = 5;; v += (v % 6 == 5) ? 2 : 4) {
    const WheelClass w = *classify_6k(v);
    if (first_mark(w) > n_max) break;
    if (options.generator_cap && v > *options.generator_cap) break;
    if (options.composite_generators || is_prime(v)) gens.push_back(w);
  }
  return gens;
}

std::vector<ResidueClass> residue_classes(const std::vector<WheelClass>& gens) {
  std::vector<ResidueClass> classes;
  classes.reserve(2 * gens.size());
  for (const auto& g : gens) {
    const std::uint64_t p = g.value;
    const std::uint64_t n1 = g.index;
    classes.push_back({p, n1 % p, p * n1 + n1});
    classes.push_back({p, (p - n1 % p) % p, p * n1 - n1});
  }
  return classes;
}

}  // namespace

std::vector<std::uint64_t> TwinMarkSet::marked_indices() const { return marked.set_positions(); }

std::vector<std::uint64_t> TwinMarkSet::unmarked_indices() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = marked.find_next_clear(1); n <= n_max; n = marked.find_next_clear(n + 1)) {
    out.push_back(n);
  }
  return out;
}

std::uint64_t first_mark(const WheelClass& generator) { return generator.index * (generator.value - 1); }

std::uint64_t square_index(const WheelClass& generator) {
  const std::uint64_t base = generator.value * generator.index;
  return generator.sign == WheelSign::Minus ? base - generator.index : base + generator.index;
}

std::vector<std::uint64_t> composite_indices(const WheelClass& generator, std::uint64_t n_max,
                                             bool allow_composite) {
  if (!allow_composite && !is_prime(generator.value)) {
    throw DomainError("composite_indices: generator " + std::to_string(generator.value) + " is not prime");
  }
  const std::uint64_t p = generator.value;
  const std::uint64_t n1 = generator.index;
  std::vector<std::uint64_t> out;
  for (std::uint64_t np = n1;; ++np) {
    const std::uint64_t minus = p * np - n1;
    if (minus > n_max) break;
    out.push_back(minus);
    const std::uint64_t plus = p * np + n1;
    if (plus <= n_max) out.push_back(plus);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TwinMarkSet build_twin_marks(std::uint64_t n_max, const TwinSieveOptions& options) {
  if (n_max == 0) throw DomainError("build_twin_marks: n_max must be >= 1");
  TwinMarkSet set;
  set.n_max = n_max;
  set.marked = Bitmap(n_max + 1);
  set.generators = collect_generators(n_max, options);
  const auto classes = residue_classes(set.generators);

  // chunks are word aligned so workers never share a word
  const auto chunks = split_range(1, n_max + 1, options.threads, Bitmap::kWordBits);
  for_each_chunk(chunks, options.threads, [&](const Chunk& c) {
    for (const auto& rc : classes) {
      const std::uint64_t lo = std::max(c.begin, rc.threshold);
      if (lo >= c.end) continue;
      std::uint64_t n = lo + (rc.residue + rc.modulus - lo % rc.modulus) % rc.modulus;
      for (; n < c.end; n += rc.modulus) set.marked.set(n);
    }
  });
  return set;
}

std::vector<TwinPair> twin_pairs(std::uint64_t n_max, const TwinSieveOptions& options) {
  std::vector<TwinPair> out;
  if (n_max == 0) return out;
  const auto marks = build_twin_marks(n_max, options);
  for (auto n : marks.unmarked_indices()) out.push_back({n, 6 * n - 1, 6 * n + 1});
  return out;
}

FindingsReport verify_twin_equivalence(std::uint64_t n_max, unsigned threads) {
  Stopwatch clock;
  FindingsReport report;
  report.claim = "twin.equivalence";
  report.params = {{"n_max", n_max}};

  const auto marks = build_twin_marks(
      n_max, {.generator_cap = std::nullopt, .composite_generators = false, .threads = threads});
  const auto chunks = split_range(1, n_max + 1, std::max(threads, 1u) * 4);
  std::vector<std::vector<Json>> mismatches(chunks.size());
  std::vector<std::uint64_t> twins(chunks.size(), 0);
  for_each_chunk(chunks, threads, [&](const Chunk& c) {
    for (std::uint64_t n = c.begin; n < c.end; ++n) {
      const bool oracle = is_prime(6 * n - 1) && is_prime(6 * n + 1);
      const bool unmarked = !marks.marked.test(n);
      twins[c.index] += oracle;
      if (oracle != unmarked) {
        mismatches[c.index].push_back(
            {{"kind", "mismatch"}, {"n", n}, {"marked", !unmarked}, {"oracle_twin", oracle}});
      }
    }
  });

  std::uint64_t twin_total = 0;
  std::uint64_t mismatch_total = 0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    twin_total += twins[i];
    mismatch_total += mismatches[i].size();
  }
  report.details.push_back({{"kind", "summary"},
                            {"n_max", n_max},
                            {"generators", marks.generators.size()},
                            {"marked", marks.marked.count()},
                            {"oracle_twins", twin_total},
                            {"mismatches", mismatch_total}});
  for (auto& list : mismatches) {
    for (auto& m : list) report.details.push_back(std::move(m));
  }
  report.status = mismatch_total == 0 ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  report.elapsed_ms = clock.elapsed_ms();
  return report;
}

IntervalBound interval_bound(const WheelClass& generator) {
  if (generator.sign != WheelSign::Plus) {
    throw DomainError("interval_bound: " + std::to_string(generator.value) +
                      " is 6n-1; the bound is defined for P = 6n+1");
  }
  IntervalBound b;
  b.low = generator;
  const std::uint64_t n1 = generator.index;
  const WheelClass next{generator.value + 4, WheelSign::Minus, n1 + 1};
  b.next_minus = next.value;
  b.bound = generator.value + 2 * n1 + 3;
  b.low_square_index = square_index(generator);
  b.high_square_index = square_index(next);
  b.mark_distance = b.high_square_index - b.low_square_index;
  b.arrangement_length = generator.value + 2 * n1 + 1;
  return b;
}

MarkedRun max_marked_run(const TwinMarkSet& marks) {
  MarkedRun best;
  const std::uint64_t end = marks.n_max + 1;
  std::uint64_t start = marks.marked.find_next_set(1);
  while (start < end) {
    const std::uint64_t stop = std::min(end, marks.marked.find_next_clear(start));
    if (stop - start > best.length) best = {stop - start, start};
    start = marks.marked.find_next_set(stop);
  }
  return best;
}

MarkedRun max_marked_run(std::uint64_t n_max, std::optional<std::uint64_t> generator_cap, unsigned threads) {
  return max_marked_run(build_twin_marks(n_max, {.generator_cap = generator_cap, .threads = threads}));
}

}  // namespace primelab
