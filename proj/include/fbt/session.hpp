#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fbt/engine.hpp"
#include "fbt/geometry.hpp"
#include "fbt/layout.hpp"
#include "fbt/metrics.hpp"

namespace fbt {

struct TouchPayload {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const TouchPayload&) const = default;
};

struct RegionPayload {
  std::string region;
  bool operator==(const RegionPayload&) const = default;
};

using EventPayload = std::variant<TouchPayload, RegionPayload>;

struct SessionEvent {
  std::int64_t t_ms = 0;
  EventPayload payload;
  bool operator==(const SessionEvent&) const = default;
};

struct CalibrationRef {
  std::string path;
  bool operator==(const CalibrationRef&) const = default;
};

using CalibrationSource =
    std::variant<std::monostate, CalibrationRef, CalibrationInput>;

struct SessionHeader {
  MethodKind method = MethodKind::SingleDigitFdi;
  std::string layout_id;
  CalibrationSource calibration;
  std::optional<std::string> participant_id;
  // Target phrase, when known; metrics fall back to the transcript.
  std::optional<std::string> prescribed;
  bool operator==(const SessionHeader&) const = default;
};

struct SessionLog {
  SessionHeader header;
  std::vector<SessionEvent> events;
  bool operator==(const SessionLog&) const = default;
};

class SessionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FixedLatency {
  std::int64_t ms = 0;
};
struct UniformLatency {
  std::int64_t lo_ms = 0;
  std::int64_t hi_ms = 0;
};

struct LatencyModel {
  std::variant<FixedLatency, UniformLatency> interval = FixedLatency{1000};
  std::uint64_t seed = 0;
};

// "fixed:MS" or "uniform:LO:HI".
LatencyModel parse_latency(std::string_view spec, std::uint64_t seed);

struct SynthesisOptions {
  bool touch_payloads = false;  // emit anchor-point touches instead of names
  std::optional<std::string> participant_id;
};

// Minimal press plan committing exactly `phrase`, followed by the terminal
// key. Throws SessionError naming the first symbol the layout cannot produce.
std::vector<Slot> plan_presses(std::string_view phrase, const Layout& layout);

// Scripted typist: the press plan timestamped by the latency model. The
// first press lands one interval after t = 0.
SessionLog synthesize_session(std::string_view phrase, const Layout& layout,
                              const CalibrationProfile& profile,
                              const LatencyModel& latency,
                              const SynthesisOptions& options = {});

struct TraceEntry {
  std::size_t event_index = 0;
  std::int64_t t_ms = 0;
  std::optional<std::string> slot;  // resolved key, if any
  std::vector<FeedbackEvent> feedback;
  std::string note;  // why the event was skipped, empty otherwise
};

struct ReplayResult {
  std::string transcript;
  TrialRecord record;
  std::vector<TraceEntry> trace;
  std::size_t skipped = 0;
  bool terminated = false;
};

// Feeds the log through a fresh engine. Unresolvable touches and unknown
// region names are skipped with a note. The trial clock runs from the first
// to the last event; the terminal key press is not counted as an entry
// keystroke.
ReplayResult replay_session(const SessionLog& log, const Layout& layout,
                            const CalibrationProfile& profile);

// JSON Lines: header object, then one event object per line, LF endings.
SessionLog parse_session_log(std::string_view text);
std::string serialize_session_log(const SessionLog& log);

}  // namespace fbt
