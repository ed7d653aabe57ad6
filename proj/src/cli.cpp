#include "primelab/cli.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "primelab/errors.hpp"
#include "primelab/gap_scan.hpp"
#include "primelab/goldbach_sieve.hpp"
#include "primelab/suite.hpp"
#include "primelab/twin_sieve.hpp"
#include "primelab/wheel.hpp"

namespace primelab {

namespace {

constexpr const char* kCsvHelp =
    "CSV columns:\n"
    "  twin              n,low,high\n"
    "  goldbach --even   p_a,n_low,n_high,valid\n"
    "  goldbach --sweep  p_a,marked,unmarked,valid_witnesses,oracle_pairs,n2_invalid,unsound\n"
    "  pattern scan|odd|wheel\n"
    "                    mode,divisors,prime,modulus,window_length,max_occupied,argmax_count,"
    "symmetric_start,symmetric_count,symmetric_attains_max,unique\n"
    "  pattern power     d,best,two_d,symmetric,verdict\n"
    "  gaps              p,next_p,gap,within_bound\n"
    "  verify            claim,status,details\n"
    "  verify --list     claim,description\n";

// What a subcommand produced, before formatting.
struct CommandOutput {
  std::vector<FindingsReport> reports;
  std::vector<std::string> csv_header;
  std::vector<std::vector<std::string>> csv_rows;
  std::string table;
  bool single_report = true;  // JSON: bare envelope instead of an array
};

template <class T>
std::string str(const T& v) {
  if constexpr (std::is_same_v<T, bool>) {
    return v ? "true" : "false";
  } else {
    std::ostringstream os;
    os << v;
    return os.str();
  }
}

std::string join(const std::vector<std::uint64_t>& values, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool has_counterexample(const std::vector<FindingsReport>& reports) {
  return std::any_of(reports.begin(), reports.end(),
                     [](const FindingsReport& r) { return r.status == FindingStatus::Counterexample; });
}

// --- twin -------------------------------------------------------------------

CommandOutput run_twin(const RunConfig& cfg) {
  if (cfg.max_n == 0) throw DomainError("twin: --max-n must be >= 1");
  Stopwatch clock;
  const auto marks = build_twin_marks(cfg.max_n, {.generator_cap = cfg.generator_cap, .composite_generators = false, .threads = cfg.threads});
  const auto unmarked = marks.unmarked_indices();
  const auto run = max_marked_run(marks);

  FindingsReport report;
  report.params = {{"max_n", cfg.max_n}};
  std::uint64_t mismatches = 0;
  std::uint64_t twins = 0;
  std::vector<Json> mismatch_records;
  // without a cap the unmarked set must equal the twin indices; with a cap
  // only soundness (marked => composite) is expected
  for (std::uint64_t n = 1; n <= cfg.max_n; ++n) {
    const bool twin = is_prime(6 * n - 1) && is_prime(6 * n + 1);
    twins += twin;
    const bool marked = marks.marked.test(n);
    const bool bad = cfg.generator_cap ? (marked && twin) : (marked == twin);
    if (bad) {
      ++mismatches;
      mismatch_records.push_back({{"kind", "mismatch"}, {"n", n}, {"marked", marked}, {"oracle_twin", twin}});
    }
  }
  if (cfg.generator_cap) {
    report.claim = "twin.capped-marks";
    report.params["generator_cap"] = *cfg.generator_cap;
  } else {
    report.claim = "twin.equivalence";
  }
  std::vector<std::uint64_t> gens;
  for (const auto& g : marks.generators) gens.push_back(g.value);
  report.details.push_back({{"kind", "summary"},
                            {"generators", gens.size()},
                            {"largest_generator", gens.empty() ? 0 : gens.back()},
                            {"marked", marks.marked.count()},
                            {"unmarked_count", unmarked.size()},
                            {"oracle_twins", twins},
                            {"mismatches", mismatches}});
  report.details.push_back({{"kind", "unmarked"}, {"unmarked", unmarked}});
  report.details.push_back({{"kind", "max-marked-run"}, {"length", run.length}, {"start", run.start}});
  for (auto& m : mismatch_records) report.details.push_back(std::move(m));
  report.status = mismatches == 0 ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  report.elapsed_ms = clock.elapsed_ms();

  CommandOutput out;
  out.csv_header = {"n", "low", "high"};
  for (auto n : unmarked) out.csv_rows.push_back({str(n), str(6 * n - 1), str(6 * n + 1)});
  std::ostringstream t;
  t << "twin sieve, n <= " << cfg.max_n;
  if (cfg.generator_cap) t << ", generators <= " << *cfg.generator_cap;
  t << "\n  generators      " << gens.size() << (gens.empty() ? "" : " (largest " + str(gens.back()) + ")")
    << "\n  marked          " << marks.marked.count() << "\n  unmarked        " << unmarked.size()
    << "\n  oracle twins    " << twins << "\n  mismatches      " << mismatches << "\n  longest run     "
    << run.length;
  if (run.length) t << " starting at n=" << run.start;
  t << "\n  unmarked n      ";
  const std::size_t shown = std::min<std::size_t>(unmarked.size(), 40);
  t << join({unmarked.begin(), unmarked.begin() + static_cast<std::ptrdiff_t>(shown)}, " ");
  if (shown < unmarked.size()) t << " ...";
  t << "\n  status          " << to_string(report.status) << "\n";
  out.table = t.str();
  out.reports.push_back(std::move(report));
  return out;
}

// --- goldbach ---------------------------------------------------------------

FindingsReport reduced_report(const ReducedSieve& r) {
  FindingsReport rep;
  rep.claim = "goldbach.reduced-spacing";
  rep.params = {{"p_a", r.p_a}};
  rep.details.push_back({{"kind", "reduced"},
                         {"generators", r.generators},
                         {"domain", r.domain},
                         {"marked", r.marked},
                         {"unmarked", r.unmarked},
                         {"spacing_ok", r.spacing_ok},
                         {"divisible_by_three", r.divisible_by_three}});
  if (!r.spacing_ok) {
    rep.status = r.divisible_by_three ? FindingStatus::DocumentedAnomaly : FindingStatus::Counterexample;
  }
  return rep;
}

CommandOutput run_goldbach_even(const RunConfig& cfg) {
  Stopwatch clock;
  const std::uint64_t p_a = *cfg.even;
  const auto marks = build_goldbach_marks(p_a);
  const auto witnesses = goldbach_witnesses(p_a);

  FindingsReport report;
  report.claim = "goldbach.equivalence";
  report.params = {{"p_a", p_a}};
  report.details.push_back({{"kind", "marks"},
                            {"generators", marks.generators},
                            {"direct", marks.direct.set_positions()},
                            {"translated", marks.translated.set_positions()},
                            {"marked_count", marks.marked_count()},
                            {"count_bound", p_a - 4},
                            {"unmarked", marks.unmarked()}});
  bool unsound = false;
  bool n2 = false;
  for (const auto& w : witnesses) {
    report.details.push_back({{"kind", "witness"}, {"n_low", w.n_low}, {"n_high", w.n_high}, {"valid", w.valid}});
    if (w.valid) continue;
    if (w.n_low == 2) {
      n2 = true;
      report.details.push_back(
          {{"kind", "n2-anomaly"}, {"n_high", w.n_high}, {"factorization", factorization_string(w.n_high)}});
    } else {
      unsound = true;
    }
  }
  if (unsound || marks.marked_count() + 4 > p_a) {
    report.status = FindingStatus::Counterexample;
  } else if (n2) {
    report.status = FindingStatus::DocumentedAnomaly;
  }
  report.elapsed_ms = clock.elapsed_ms();

  CommandOutput out;
  out.csv_header = {"p_a", "n_low", "n_high", "valid"};
  std::ostringstream t;
  t << "goldbach sieve, p_a = " << p_a << "\n  generators   " << join(marks.generators, " ") << "\n  marked       "
    << marks.marked_count() << " of " << (p_a - 3) << " (bound p_a-4 = " << (p_a - 4) << ")\n  witnesses\n";
  for (const auto& w : witnesses) {
    out.csv_rows.push_back({str(p_a), str(w.n_low), str(w.n_high), str(w.valid)});
    t << "    " << w.n_low << " + " << w.n_high << (w.valid ? "" : "   INVALID") << "\n";
  }
  if (n2) t << "  documented anomaly: N=2 unmarked, " << (p_a - 2) << " = " << factorization_string(p_a - 2) << "\n";
  t << "  status       " << to_string(report.status) << "\n";
  out.reports.push_back(std::move(report));

  if (cfg.reduced) {
    const auto r = reduced_sieve(p_a);
    out.reports.push_back(reduced_report(r));
    out.single_report = false;
    t << "reduced sieve\n  domain       " << join(r.domain, " ") << "\n  marked       " << join(r.marked, " ")
      << "\n  unmarked     " << join(r.unmarked, " ") << "\n  spacing 3    " << (r.spacing_ok ? "yes" : "no")
      << (r.divisible_by_three ? " (p_a divisible by 3)" : "") << "\n";
  }
  out.table = t.str();
  return out;
}

CommandOutput run_goldbach_sweep(const RunConfig& cfg) {
  Stopwatch clock;
  const std::uint64_t top = *cfg.sweep_max;
  const auto sweep = sweep_goldbach(top, cfg.threads);
  CommandOutput out;
  out.single_report = false;
  out.reports.push_back(goldbach_equivalence_report(sweep, top));
  out.reports.push_back(goldbach_n2_report(sweep, top));
  if (cfg.reduced) out.reports.push_back(verify_reduced_spacing(top));
  for (auto& r : out.reports) r.elapsed_ms = clock.elapsed_ms();

  out.csv_header = {"p_a", "marked", "unmarked", "valid_witnesses", "oracle_pairs", "n2_invalid", "unsound"};
  std::uint64_t n2 = 0;
  for (const auto& c : sweep) {
    n2 += c.n2_invalid;
    out.csv_rows.push_back({str(c.p_a), str(c.marked), str(c.unmarked), str(c.valid_witnesses), str(c.oracle_pairs),
                            str(c.n2_invalid), str(c.unsound.size())});
  }
  std::ostringstream t;
  t << "goldbach sweep, even p_a in [4, " << top << "]\n";
  for (const auto& r : out.reports) t << "  " << std::left << std::setw(28) << r.claim << to_string(r.status) << "\n";
  t << "  N=2 anomalies             " << n2 << "\n";
  out.table = t.str();
  return out;
}

// --- pattern ----------------------------------------------------------------

std::vector<std::string> scan_row(const ResiduePattern& pat, const WindowScanReport& scan) {
  return {std::string(to_string(pat.mode)), std::string(to_string(pat.family)), str(pat.prime), str(pat.modulus),
          str(scan.window_length), str(scan.max_occupied), str(scan.argmax_count), str(scan.symmetric_start),
          str(scan.symmetric_count), str(scan.symmetric_attains_max), str(scan.unique)};
}

const std::vector<std::string> kScanHeader{"mode",          "divisors",        "prime",
                                           "modulus",       "window_length",   "max_occupied",
                                           "argmax_count",  "symmetric_start", "symmetric_count",
                                           "symmetric_attains_max", "unique"};

FindingsReport scan_report(const ResiduePattern& pat, const WindowScanReport& scan, std::string claim) {
  FindingsReport r;
  r.claim = std::move(claim);
  r.params = {{"prime", pat.prime},
              {"mode", std::string(to_string(pat.mode))},
              {"divisors", std::string(to_string(pat.family))},
              {"modulus", pat.modulus},
              {"window_length", scan.window_length}};
  r.details.push_back({{"kind", "window-scan"},
                       {"max_occupied", scan.max_occupied},
                       {"argmax_count", scan.argmax_count},
                       {"argmax_starts", scan.argmax_starts},
                       {"symmetric_start", scan.symmetric_start},
                       {"symmetric_count", scan.symmetric_count},
                       {"symmetric_attains_max", scan.symmetric_attains_max},
                       {"unique", scan.unique}});
  r.status = scan.symmetric_attains_max ? FindingStatus::Confirmed : FindingStatus::Counterexample;
  return r;
}

std::string window_strip(const ResiduePattern& pat, std::uint64_t start, std::uint64_t len) {
  std::ostringstream values;
  std::ostringstream marks;
  for (std::uint64_t k = 0; k < len; ++k) {
    const std::uint64_t slot = (start + k) % pat.modulus;
    const std::string label = pat.mode == IndexSpace::TwinIndices ? str(slot) : str(pat.slot_value(slot));
    const int w = static_cast<int>(std::max<std::size_t>(label.size(), 1)) + 1;
    values << std::setw(w) << label;
    marks << std::setw(w) << (pat.is_occupied(slot) ? "#" : ".");
  }
  return "    " + values.str() + "\n    " + marks.str() + "\n";
}

std::string scan_table(const ResiduePattern& pat, const WindowScanReport& scan, std::string_view title) {
  std::ostringstream t;
  t << title << " P=" << pat.prime << "  divisors " << to_string(pat.family) << "  modulus " << pat.modulus
    << "  window length " << scan.window_length << "\n";
  t << "  maximum occupied   " << scan.max_occupied << "/" << scan.window_length << ", attained by "
    << scan.argmax_count << " window" << (scan.argmax_count == 1 ? "" : "s") << "\n";
  t << "  symmetric window   start " << scan.symmetric_start << ", occupied " << scan.symmetric_count << "/"
    << scan.window_length << (scan.symmetric_attains_max ? " (attains maximum)" : " (below maximum)")
    << (scan.unique ? ", unique" : "") << "\n";
  t << window_strip(pat, scan.symmetric_start, scan.window_length);
  return t.str();
}

PatternOptions pattern_opts(const RunConfig& cfg) { return {cfg.memory_cap_bits, cfg.threads}; }

CommandOutput run_pattern_scan(const RunConfig& cfg) {
  Stopwatch clock;
  const auto pat = build_pattern(cfg.prime, IndexSpace::Integers, DivisorFamily::AllPrimes, pattern_opts(cfg));
  const std::uint64_t len = cfg.window_len.value_or(arrangement_length(pat));
  const auto scan = scan_windows(pat, len, cfg.threads);
  const auto run = max_occupied_run(pat);
  CommandOutput out;
  auto report = scan_report(pat, scan, "pattern.integers-symmetric-max");
  report.details.push_back({{"kind", "max-occupied-run"}, {"length", run.length}, {"start", run.start}});
  report.elapsed_ms = clock.elapsed_ms();
  out.reports.push_back(std::move(report));
  out.csv_header = kScanHeader;
  out.csv_rows.push_back(scan_row(pat, scan));
  out.table = scan_table(pat, scan, "integers pattern") + "  longest occupied run " + str(run.length) +
              " at residue " + str(run.start) + "\n";
  return out;
}

CommandOutput run_pattern_odd(const RunConfig& cfg) {
  Stopwatch clock;
  DivisorFamily fam;
  if (cfg.divisors == "all") {
    fam = DivisorFamily::AllOdds;
  } else if (cfg.divisors == "primes") {
    fam = DivisorFamily::OddPrimes;
  } else {
    throw DomainError("pattern odd: --divisors must be 'all' or 'primes'");
  }
  const auto pat = build_pattern(cfg.prime, IndexSpace::OddIntegers, fam, pattern_opts(cfg));
  const auto scan = scan_windows(pat, arrangement_length(pat), cfg.threads);
  CommandOutput out;
  out.single_report = false;
  auto report = scan_report(pat, scan, "pattern.odd-symmetric-max");
  report.elapsed_ms = clock.elapsed_ms();
  out.reports.push_back(std::move(report));
  out.reports.push_back(check_dma_double_occupancy(cfg.prime));
  if (cfg.prime >= 7) out.reports.push_back(check_dm_translation(cfg.prime, pattern_opts(cfg)));
  out.csv_header = kScanHeader;
  out.csv_rows.push_back(scan_row(pat, scan));
  std::ostringstream t;
  t << scan_table(pat, scan, "odd pattern");
  const auto part = partition_dma_dm(cfg.prime);
  t << "  D_ma               " << join(part.d_ma, " ") << "\n  D_m                " << join(part.d_m, " ") << "\n";
  for (std::size_t i = 1; i < out.reports.size(); ++i) {
    t << "  " << std::left << std::setw(30) << out.reports[i].claim << to_string(out.reports[i].status) << "\n";
  }
  out.table = t.str();
  return out;
}

CommandOutput run_pattern_wheel(const RunConfig& cfg) {
  Stopwatch clock;
  const auto pat = build_pattern(cfg.prime, IndexSpace::TwinIndices, DivisorFamily::TwinWheelPrimes, pattern_opts(cfg));
  const std::uint64_t len = arrangement_length(pat);
  const auto scan = scan_windows(pat, len, cfg.threads);
  const std::uint64_t c_lo = (pat.modulus - 1) / 2;
  const std::uint64_t c_hi = c_lo + 1;
  const bool centres_free = !pat.is_occupied(c_lo) && !pat.is_occupied(c_hi);

  CommandOutput out;
  auto report = scan_report(pat, scan, "pattern.wheel-window");
  const std::uint64_t s = scan.symmetric_start;
  report.details.push_back({{"kind", "arrangement"},
                            {"modulus", pat.modulus},
                            {"window", {s, (s + len - 1) % pat.modulus}},
                            {"occupied", scan.symmetric_count},
                            {"window_length", len},
                            {"centres", {c_lo, c_hi}},
                            {"centres_free", centres_free},
                            {"exceeds_length_minus_two", scan.max_occupied + 2 > len}});
  if (!centres_free || scan.max_occupied + 2 > len) report.status = FindingStatus::Counterexample;
  report.elapsed_ms = clock.elapsed_ms();
  out.reports.push_back(std::move(report));
  out.csv_header = kScanHeader;
  out.csv_rows.push_back(scan_row(pat, scan));

  std::ostringstream t;
  t << scan_table(pat, scan, "twin wheel");
  t << "  window start " << s << ", occupied " << scan.symmetric_count << "/" << len << ", centers " << c_lo << ","
    << c_hi << (centres_free ? " free" : " OCCUPIED") << "\n";
  if (!scan.argmax_starts.empty()) {
    const std::size_t shown = std::min<std::size_t>(scan.argmax_starts.size(), 10);
    t << "  maximal starts     "
      << join({scan.argmax_starts.begin(), scan.argmax_starts.begin() + static_cast<std::ptrdiff_t>(shown)}, " ")
      << (shown < scan.argmax_count ? " ..." : "") << "\n";
  }
  out.table = t.str();
  return out;
}

CommandOutput run_pattern_power(const RunConfig& cfg) {
  CommandOutput out;
  auto report = verify_power_minimality(cfg.prime);
  out.csv_header = {"d", "best", "two_d", "symmetric", "verdict"};
  std::ostringstream t;
  t << "power distances, windows of " << (2 * cfg.prime + 1) << " integers\n";
  t << "  " << std::left << std::setw(6) << "d" << std::setw(8) << "best" << std::setw(8) << "2d" << std::setw(11)
    << "symmetric" << "verdict\n";
  for (const auto& d : report.details) {
    const auto cell = [](const Json& v) { return v.is_null() ? std::string("inf") : v.dump(); };
    out.csv_rows.push_back(
        {d["d"].dump(), cell(d["best"]), d["two_d"].dump(), cell(d["symmetric"]), d["verdict"].get<std::string>()});
    t << "  " << std::left << std::setw(6) << d["d"].dump() << std::setw(8) << cell(d["best"]) << std::setw(8)
      << d["two_d"].dump() << std::setw(11) << cell(d["symmetric"]) << d["verdict"].get<std::string>() << "\n";
  }
  t << "  status " << to_string(report.status) << "\n";
  out.table = t.str();
  out.reports.push_back(std::move(report));
  return out;
}

// --- gaps -------------------------------------------------------------------

CommandOutput run_gaps(const RunConfig& cfg, std::ostream& err) {
  Stopwatch clock;
  GapScanOptions opts;
  opts.segment_size = cfg.segment;
  opts.threads = cfg.threads;
  if (cfg.limit >= 1000000000ull) {
    auto next_mark = std::make_shared<std::uint64_t>(cfg.limit / 10);
    opts.on_progress = [&err, next_mark](std::uint64_t done, std::uint64_t limit) {
      if (done >= *next_mark || done == limit) {
        err << "gaps: " << (100 * done / limit) << "% (" << done << ")\n";
        while (*next_mark <= done) *next_mark += limit / 10;
      }
    };
  }
  const auto scan = scan_gaps(cfg.limit, opts);
  CommandOutput out;
  auto report = gap_bound_report(scan, cfg.segment);
  for (const auto& r : scan.records) {
    report.details.push_back(
        {{"kind", "record"}, {"p", r.p}, {"next_p", r.next_p}, {"gap", r.gap}, {"within_bound", r.within_bound}});
  }
  report.elapsed_ms = clock.elapsed_ms();
  out.csv_header = {"p", "next_p", "gap", "within_bound"};
  std::ostringstream t;
  t << "prime gaps up to " << cfg.limit << "\n  primes      " << scan.prime_count << "\n  violations  "
    << scan.violations.size() << "\n  records\n";
  for (const auto& r : scan.records) {
    out.csv_rows.push_back({str(r.p), str(r.next_p), str(r.gap), str(r.within_bound)});
    t << "    " << std::setw(14) << r.p << " -> " << std::setw(14) << r.next_p << "  gap " << std::setw(5) << r.gap
      << "  bound " << std::fixed << std::setprecision(2) << r.bound << "\n";
  }
  out.table = t.str();
  out.reports.push_back(std::move(report));
  return out;
}

// --- verify -----------------------------------------------------------------

CommandOutput run_verify(const RunConfig& cfg) {
  CommandOutput out;
  out.single_report = false;
  if (cfg.list) {
    out.csv_header = {"claim", "description"};
    std::ostringstream t;
    for (const auto& c : claim_registry()) {
      out.csv_rows.push_back({c.id, c.description});
      t << std::left << std::setw(34) << c.id << c.description << "\n";
    }
    out.table = t.str();
    return out;
  }
  out.reports = run_claims(cfg.claims, {cfg.threads, cfg.memory_cap_bits});
  out.csv_header = {"claim", "status", "details"};
  std::ostringstream t;
  for (const auto& r : out.reports) {
    out.csv_rows.push_back({r.claim, std::string(to_string(r.status)), str(r.details.size())});
    t << std::left << std::setw(34) << r.claim << std::setw(20) << to_string(r.status) << std::right << std::fixed
      << std::setprecision(1) << std::setw(10) << (cfg.timestamp ? r.elapsed_ms : 0.0) << " ms\n";
  }
  out.table = t.str();
  return out;
}

// --- output -----------------------------------------------------------------

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char c : v) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

void write_output(const RunConfig& cfg, const CommandOutput& result, std::ostream& os) {
  switch (cfg.format) {
    case OutputFormat::Json: {
      if (cfg.subcommand == "verify" && cfg.list) {
        Json arr = Json::array();
        for (const auto& c : claim_registry()) arr.push_back({{"claim", c.id}, {"description", c.description}});
        os << arr.dump(2) << "\n";
        return;
      }
      const std::string stamp = cfg.timestamp ? utc_timestamp() : std::string();
      Json arr = Json::array();
      for (const auto& r : result.reports) {
        Json env = r;
        if (cfg.timestamp) {
          env["timestamp"] = stamp;
        } else {
          env["elapsed_ms"] = 0;
        }
        arr.push_back(std::move(env));
      }
      if (result.single_report && arr.size() == 1) {
        os << arr[0].dump(2) << "\n";
      } else {
        os << arr.dump(2) << "\n";
      }
      return;
    }
    case OutputFormat::Csv: {
      for (std::size_t i = 0; i < result.csv_header.size(); ++i) os << (i ? "," : "") << result.csv_header[i];
      os << "\n";
      for (const auto& row : result.csv_rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
        os << "\n";
      }
      return;
    }
    case OutputFormat::Table:
      os << result.table;
      return;
  }
}

CommandOutput dispatch(const RunConfig& cfg, std::ostream& err) {
  if (cfg.subcommand == "twin") return run_twin(cfg);
  if (cfg.subcommand == "goldbach") return cfg.even ? run_goldbach_even(cfg) : run_goldbach_sweep(cfg);
  if (cfg.subcommand == "pattern scan") return run_pattern_scan(cfg);
  if (cfg.subcommand == "pattern odd") return run_pattern_odd(cfg);
  if (cfg.subcommand == "pattern wheel") return run_pattern_wheel(cfg);
  if (cfg.subcommand == "pattern power") return run_pattern_power(cfg);
  if (cfg.subcommand == "gaps") return run_gaps(cfg, err);
  return run_verify(cfg);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"primelab: sieve reformulations of twin-prime, Goldbach and prime-gap claims, checked against "
               "brute-force oracles"};
  app.footer(kCsvHelp);
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--output", cfg.output_path, "Write the report to PATH instead of standard output");
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  app.add_flag("--strict", cfg.strict, "Exit 4 when any report is a counterexample");
  bool no_timestamp = false;
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp and zero elapsed_ms for byte-stable output");
  app.add_option("--memory-cap-bits", cfg.memory_cap_bits, "Largest pattern modulus, in bits")
      ->check(CLI::PositiveNumber);

  auto* twin = app.add_subcommand("twin", "Twin-index sieve and oracle comparison");
  twin->add_option("--max-n", cfg.max_n, "Largest twin index n")->required();
  twin->add_option("--generator-cap", cfg.generator_cap, "Use only generators <= P");

  auto* goldbach = app.add_subcommand("goldbach", "Goldbach range sieve for one even number or a sweep");
  auto* even_opt = goldbach->add_option("--even", cfg.even, "Even number p_a >= 4");
  auto* sweep_opt = goldbach->add_option("--sweep-max", cfg.sweep_max, "Check every even p_a up to this value");
  even_opt->excludes(sweep_opt);
  sweep_opt->excludes(even_opt);
  goldbach->add_flag("--reduced", cfg.reduced, "Also run the 3-reduced sieve");

  auto* pattern = app.add_subcommand("pattern", "Primorial residue patterns and window scans");
  pattern->require_subcommand(1);
  auto* p_scan = pattern->add_subcommand("scan", "Integers-mode window scan");
  p_scan->add_option("--prime", cfg.prime, "Largest prime P")->required();
  p_scan->add_option("--window-len", cfg.window_len, "Window length (default 2P+1)");
  auto* p_odd = pattern->add_subcommand("odd", "Odd-integers window scan with the D_ma/D_m checks");
  p_odd->add_option("--prime", cfg.prime, "Largest prime P")->required();
  p_odd->add_option("--divisors", cfg.divisors, "Divisor family")->check(CLI::IsMember({"all", "primes"}));
  auto* p_wheel = pattern->add_subcommand("wheel", "Twin-wheel translated arrangement");
  p_wheel->add_option("--prime", cfg.prime, "Largest prime P")->required();
  auto* p_power = pattern->add_subcommand("power", "Minimum distance between powers");
  p_power->add_option("--prime", cfg.prime, "Largest prime P")->required();

  auto* gaps = app.add_subcommand("gaps", "Segmented prime-gap scan");
  gaps->add_option("--limit", cfg.limit, "Scan primes up to this value (default 10^9)");
  gaps->add_option("--segment", cfg.segment, "Segment size")->check(CLI::Range(std::uint64_t{64}, UINT64_MAX));

  auto* verify = app.add_subcommand("verify", "Claim-by-claim verification suite");
  auto* list_opt = verify->add_flag("--list", cfg.list, "List claim identifiers");
  auto* claim_opt = verify->add_option("--claim", cfg.claims, "Run only these claims");
  list_opt->excludes(claim_opt);

  std::vector<std::string> argv_store{"primelab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "primelab: " << e.what() << "\n";
    return kExitUsage;
  }
  cfg.format = format == "csv" ? OutputFormat::Csv : (format == "table" ? OutputFormat::Table : OutputFormat::Json);
  cfg.timestamp = !no_timestamp;

  if (twin->parsed()) {
    cfg.subcommand = "twin";
  } else if (goldbach->parsed()) {
    if (!cfg.even && !cfg.sweep_max) {
      err << "primelab: goldbach needs --even or --sweep-max\n";
      return kExitUsage;
    }
    cfg.subcommand = "goldbach";
  } else if (pattern->parsed()) {
    cfg.subcommand = std::string("pattern ") + pattern->get_subcommands().front()->get_name();
  } else if (gaps->parsed()) {
    cfg.subcommand = "gaps";
  } else {
    cfg.subcommand = "verify";
  }

  CommandOutput result;
  try {
    result = dispatch(cfg, err);
    for (const auto& r : result.reports) check_report(r);
  } catch (const ResourceError& e) {
    err << "primelab: resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const RangeError& e) {
    err << "primelab: resource error: " << e.what() << "\n";
    return kExitResource;
  } catch (const DomainError& e) {
    err << "primelab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::bad_alloc&) {
    err << "primelab: resource error: out of memory\n";
    return kExitResource;
  }

  if (cfg.output_path.empty()) {
    write_output(cfg, result, out);
  } else {
    std::ofstream file(cfg.output_path);
    if (!file) {
      err << "primelab: cannot open output file '" << cfg.output_path << "'\n";
      return kExitUsage;
    }
    write_output(cfg, result, file);
  }
  if (cfg.strict && has_counterexample(result.reports)) return kExitCounterexample;
  return kExitOk;
}

}  // namespace primelab
