#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fbt {

struct TrialRecord {
  std::string prescribed;
  std::string transcribed;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  int press_total = 0;
  int correction_total = 0;
  bool operator==(const TrialRecord&) const = default;
};

struct MetricsReport {
  double wpm = 0.0;
  double duration_s = 0.0;
  int msd = 0;
  double uncorrected_error_rate = 0.0;
  int corrections = 0;
  double kspc = 0.0;  // extension: keystrokes per transcribed character
  bool operator==(const MetricsReport&) const = default;
};

class MetricsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ((|T| - 1) / S) * 60 / 5. Requires t_len >= 1 and seconds > 0.
double words_per_minute(std::size_t t_len, double seconds);

// Unit-cost Levenshtein distance.
int min_string_distance(std::string_view p, std::string_view t);

MetricsReport trial_metrics(const TrialRecord& rec);

std::string metrics_to_json(const MetricsReport& report);

}  // namespace fbt
