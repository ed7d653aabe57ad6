#include "primelab/report.hpp"

#include <stdexcept>

#include "primelab/errors.hpp"

namespace primelab {

std::string_view to_string(FindingStatus status) {
  switch (status) {
    case FindingStatus::Confirmed:
      return "confirmed";
    case FindingStatus::Counterexample:
      return "counterexample";
    case FindingStatus::DocumentedAnomaly:
      return "documented-anomaly";
  }
  return "confirmed";
}

FindingStatus status_from_string(std::string_view name) {
  if (name == "confirmed") return FindingStatus::Confirmed;
  if (name == "counterexample") return FindingStatus::Counterexample;
  if (name == "documented-anomaly") return FindingStatus::DocumentedAnomaly;
  throw DomainError("unknown finding status '" + std::string(name) + "'");
}

void to_json(Json& j, const FindingsReport& report) {
  j = Json{{"claim", report.claim},
           {"params", report.params},
           {"status", std::string(to_string(report.status))},
           {"details", report.details},
           {"elapsed_ms", report.elapsed_ms}};
}

void from_json(const Json& j, FindingsReport& report) {
  report.claim = j.at("claim").get<std::string>();
  report.params = j.at("params");
  report.status = status_from_string(j.at("status").get<std::string>());
  report.details = j.at("details").get<std::vector<Json>>();
  report.elapsed_ms = j.at("elapsed_ms").get<double>();
}

void check_report(const FindingsReport& report) {
  if (report.claim.empty()) throw std::logic_error("findings report without claim identifier");
  if (report.status == FindingStatus::Counterexample && report.details.empty()) {
    throw std::logic_error("counterexample report '" + report.claim + "' has no details");
  }
}

}  // namespace primelab
