#include "fbt/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "json.hpp"

namespace fbt {

double words_per_minute(std::size_t t_len, double seconds) {
  if (t_len == 0) throw MetricsError("words_per_minute: empty transcription");
  if (!(seconds > 0.0)) {
    throw MetricsError("words_per_minute: duration must be positive");
  }
  return (static_cast<double>(t_len - 1) / seconds) * 60.0 * (1.0 / 5.0);
}

int min_string_distance(std::string_view p, std::string_view t) {
  if (p.size() < t.size()) std::swap(p, t);
  // Single row over the shorter string.
  std::vector<int> row(t.size() + 1);
  std::iota(row.begin(), row.end(), 0);
  for (std::size_t i = 1; i <= p.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const int up = row[j];
      const int sub = diag + (p[i - 1] == t[j - 1] ? 0 : 1);
      row[j] = std::min({up + 1, row[j - 1] + 1, sub});
      diag = up;
    }
  }
  return row[t.size()];
}

MetricsReport trial_metrics(const TrialRecord& rec) {
  if (rec.transcribed.empty()) {
    throw MetricsError("trial_metrics: empty transcription");
  }
  if (rec.end_ms < rec.start_ms) {
    throw MetricsError("trial_metrics: end precedes start");
  }
  if (rec.press_total < rec.correction_total) {
    throw MetricsError("trial_metrics: more corrections than presses");
  }
  if (rec.end_ms == rec.start_ms) {
    throw MetricsError("trial_metrics: zero duration");
  }
  MetricsReport m;
  m.duration_s = static_cast<double>(rec.end_ms - rec.start_ms) / 1000.0;
  m.wpm = words_per_minute(rec.transcribed.size(), m.duration_s);
  m.msd = min_string_distance(rec.prescribed, rec.transcribed);
  const auto longest = std::max(rec.prescribed.size(), rec.transcribed.size());
  m.uncorrected_error_rate =
      static_cast<double>(m.msd) / static_cast<double>(longest);
  m.corrections = rec.correction_total;
  m.kspc = static_cast<double>(rec.press_total) /
           static_cast<double>(rec.transcribed.size());
  return m;
}

std::string metrics_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["wpm"] = r.wpm;
  j["duration_s"] = r.duration_s;
  j["msd"] = r.msd;
  j["uncorrected_error_rate"] = r.uncorrected_error_rate;
  j["corrections"] = r.corrections;
  j["kspc"] = r.kspc;
  return j.dump();
}

}  // namespace fbt
