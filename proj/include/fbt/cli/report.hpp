#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fbt/metrics.hpp"
#include "fbt/stats.hpp"
#include "json.hpp"

namespace fbt::cli {

struct ComparisonOptions {
  std::string group_by = "method";
  double normality_threshold = 0.90;
};

struct Summary {
  double mean = 0.0;
  std::optional<double> sd;  // sample SD, absent for n < 2
};

Summary summarize(const std::vector<double>& values);

// Per-group aggregates plus the normality-gated test battery on wpm,
// duration and error count. Groups are keyed by name and emitted in key
// order.
nlohmann::ordered_json comparison_report(
    const std::map<std::string, std::vector<MetricsReport>>& groups,
    const ComparisonOptions& options);

std::string comparison_table(const nlohmann::ordered_json& report);

}  // namespace fbt::cli
