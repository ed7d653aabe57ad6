#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "primelab/pattern_lab.hpp"

namespace primelab {

enum class OutputFormat { Json, Csv, Table };

// Parsed command line. Numeric fields not used by a subcommand keep their
// defaults.
struct RunConfig {
  std::string subcommand;  // "twin", "goldbach", "pattern scan", ...
  OutputFormat format = OutputFormat::Json;
  std::string output_path;  // empty: standard output
  unsigned threads = 1;
  bool strict = false;
  bool timestamp = true;
  std::uint64_t memory_cap_bits = kDefaultMemoryCapBits;

  std::uint64_t max_n = 0;
  std::optional<std::uint64_t> generator_cap;
  std::optional<std::uint64_t> even;
  std::optional<std::uint64_t> sweep_max;
  bool reduced = false;
  std::uint64_t prime = 0;
  std::optional<std::uint64_t> window_len;
  std::string divisors = "all";
  std::uint64_t limit = 1000000000;
  std::uint64_t segment = std::uint64_t{1} << 18;
  bool list = false;
  std::vector<std::string> claims;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitResource = 3;
inline constexpr int kExitCounterexample = 4;

/// Entry point behind the `primelab` binary. `args` excludes the program
/// name. Reports go to `out` (or --output), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace primelab
