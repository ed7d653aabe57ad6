#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "primelab/pattern_lab.hpp"
#include "primelab/report.hpp"

namespace primelab {

struct SuiteConfig {
  unsigned threads = 1;
  std::uint64_t memory_cap_bits = kDefaultMemoryCapBits;
};

struct ClaimEntry {
  std::string id;
  std::string description;
  std::function<FindingsReport(const SuiteConfig&)> run;
};

/// Every claim the verify suite knows, in execution order.
const std::vector<ClaimEntry>& claim_registry();

/// Runs the named claims (all of them when ids is empty). Throws
/// DomainError for an unknown identifier.
std::vector<FindingsReport> run_claims(std::span<const std::string> ids, const SuiteConfig& config);

/// Merges per-parameter reports under one claim: the worst status wins and
/// each detail record gains the params it came from.
FindingsReport merge_reports(std::string claim, Json params, const std::vector<FindingsReport>& parts);

/// Largest distance between cyclically consecutive totatives of m, by gcd scan.
std::uint64_t max_totative_gap(std::uint64_t m);

}  // namespace primelab
