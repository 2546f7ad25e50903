#include "fbt/batch.hpp"

#include <omp.h>

#include <algorithm>

namespace fbt::batch {

namespace {

Outcome replay_one(const SessionLog& log, const Layout& layout,
                   const CalibrationProfile& profile) {
  Outcome out;
  try {
    out.replay = replay_session(log, layout, profile);
    out.metrics = trial_metrics(out.replay->record);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

bool round_trips(const std::string& phrase, const Layout& layout,
                 const CalibrationProfile& profile, const LatencyModel& latency,
                 bool touch) {
  try {
    SynthesisOptions opts;
    opts.touch_payloads = touch;
    const auto log = synthesize_session(phrase, layout, profile, latency, opts);
    const auto parsed = parse_session_log(serialize_session_log(log));
    const auto result = replay_session(parsed, layout, profile);
    return result.transcript == phrase && result.terminated && result.skipped == 0;
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

std::vector<Outcome> replay_jobs_serial(std::span<const Job> jobs) {
  std::vector<Outcome> out(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    out[i] = replay_one(*jobs[i].log, *jobs[i].layout, *jobs[i].profile);
  }
  return out;
}

std::vector<Outcome> replay_jobs_parallel(std::span<const Job> jobs) {
  std::vector<Outcome> out(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = replay_one(*jobs[i].log, *jobs[i].layout, *jobs[i].profile);
  }
  return out;
}

std::vector<Outcome> replay_serial(std::span<const SessionLog> logs,
                                   const Layout& layout,
                                   const CalibrationProfile& profile) {
  std::vector<Outcome> out(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    out[i] = replay_one(logs[i], layout, profile);
  }
  return out;
}

std::vector<Outcome> replay_parallel(std::span<const SessionLog> logs,
                                     const Layout& layout,
                                     const CalibrationProfile& profile) {
  std::vector<Outcome> out(logs.size());
  const auto n = static_cast<std::ptrdiff_t>(logs.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = replay_one(logs[i], layout, profile);
  }
  return out;
}

std::vector<std::optional<Slot>> resolve_serial(
    std::span<const Point> points, const CalibrationProfile& profile) {
  std::vector<std::optional<Slot>> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i] = resolve_region(points[i], profile);
  }
  return out;
}

std::vector<std::optional<Slot>> resolve_parallel(
    std::span<const Point> points, const CalibrationProfile& profile) {
  std::vector<std::optional<Slot>> out(points.size());
  const auto n = static_cast<std::ptrdiff_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = resolve_region(points[i], profile);
  }
  return out;
}

std::vector<std::size_t> round_trip_failures_serial(
    std::span<const std::string> phrases, const Layout& layout,
    const CalibrationProfile& profile, const LatencyModel& latency,
    bool touch_payloads) {
  std::vector<std::size_t> failed;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    if (!round_trips(phrases[i], layout, profile, latency, touch_payloads)) {
      failed.push_back(i);
    }
  }
  return failed;
}

std::vector<std::size_t> round_trip_failures_parallel(
    std::span<const std::string> phrases, const Layout& layout,
    const CalibrationProfile& profile, const LatencyModel& latency,
    bool touch_payloads) {
  std::vector<char> ok(phrases.size(), 0);
  const auto n = static_cast<std::ptrdiff_t>(phrases.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    ok[i] = round_trips(phrases[i], layout, profile, latency, touch_payloads);
  }
  std::vector<std::size_t> failed;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (!ok[i]) failed.push_back(i);
  }
  return failed;
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace fbt::batch
