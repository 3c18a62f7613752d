#pragma once

#include <optional>
#include <string>

#include "edgesim/metrics.hpp"

namespace edgesim {

// Key-value report text, stable field order, fixed-precision floats; two runs
// of the same seed serialize byte-identically.
std::string report_to_text(const ScenarioReport& rep);

// Parses a report written by report_to_text. Unknown keys are ignored so the
// format can grow.
std::optional<ScenarioReport> report_from_text(const std::string& text, std::string* error);

std::string comparison_to_text(const ComparisonReport& cmp);

// Flat table, one row per (architecture, request kind, metric).
std::string reports_to_csv(const std::vector<ScenarioReport>& reports);

}  // namespace edgesim
