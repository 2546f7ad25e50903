#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fbt/geometry.hpp"
#include "fbt/layout.hpp"
#include "fbt/metrics.hpp"
#include "fbt/session.hpp"

// Data-parallel kernels over independent sessions and touches. Each kernel
// has a serial reference with identical output, kept for tests and the
// benchmark.
namespace fbt::batch {

struct Outcome {
  std::optional<ReplayResult> replay;
  std::optional<MetricsReport> metrics;
  std::string error;  // set when replay or metrics failed
};

// One replay with its own layout and profile.
struct Job {
  const SessionLog* log = nullptr;
  const Layout* layout = nullptr;
  const CalibrationProfile* profile = nullptr;
};

std::vector<Outcome> replay_jobs_serial(std::span<const Job> jobs);
std::vector<Outcome> replay_jobs_parallel(std::span<const Job> jobs);

std::vector<Outcome> replay_serial(std::span<const SessionLog> logs,
                                   const Layout& layout,
                                   const CalibrationProfile& profile);
std::vector<Outcome> replay_parallel(std::span<const SessionLog> logs,
                                     const Layout& layout,
                                     const CalibrationProfile& profile);

std::vector<std::optional<Slot>> resolve_serial(
    std::span<const Point> points, const CalibrationProfile& profile);
std::vector<std::optional<Slot>> resolve_parallel(
    std::span<const Point> points, const CalibrationProfile& profile);

// synthesize -> serialize -> parse -> replay for every phrase; returns the
// indices whose transcript differs from the phrase (or that threw).
std::vector<std::size_t> round_trip_failures_serial(
    std::span<const std::string> phrases, const Layout& layout,
    const CalibrationProfile& profile, const LatencyModel& latency,
    bool touch_payloads = false);
std::vector<std::size_t> round_trip_failures_parallel(
    std::span<const std::string> phrases, const Layout& layout,
    const CalibrationProfile& profile, const LatencyModel& latency,
    bool touch_payloads = false);

int max_threads();

}  // namespace fbt::batch
