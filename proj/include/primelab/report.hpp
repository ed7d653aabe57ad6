#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace primelab {

using Json = nlohmann::json;

enum class FindingStatus { Confirmed, Counterexample, DocumentedAnomaly };

std::string_view to_string(FindingStatus status);
/// Throws DomainError for unknown names.
FindingStatus status_from_string(std::string_view name);

/// Outcome of checking one claim at one parameter setting.
///
/// A counterexample must carry at least one detail record; check_report()
/// enforces that before a report leaves a verifier.
struct FindingsReport {
  std::string claim;
  Json params = Json::object();
  FindingStatus status = FindingStatus::Confirmed;
  std::vector<Json> details;
  double elapsed_ms = 0.0;

  bool operator==(const FindingsReport&) const = default;
};

void to_json(Json& j, const FindingsReport& report);
void from_json(const Json& j, FindingsReport& report);

/// Validates the report invariants; throws std::logic_error on violation.
void check_report(const FindingsReport& report);

/// Wall-clock stopwatch for elapsed_ms.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace primelab
