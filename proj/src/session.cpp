#include "fbt/session.hpp"

#include <charconv>
#include <random>

#include "json.hpp"

namespace fbt {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::int64_t parse_ms(std::string_view s, std::string_view spec) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw SessionError("latency: bad number in \"" + std::string(spec) + "\"");
  }
  return v;
}

class IntervalSource {
 public:
  explicit IntervalSource(const LatencyModel& m) : model_(m), rng_(m.seed) {
    if (const auto* f = std::get_if<FixedLatency>(&model_.interval)) {
      if (f->ms <= 0) throw SessionError("latency: interval must be positive");
    } else {
      const auto& u = std::get<UniformLatency>(model_.interval);
      if (u.lo_ms <= 0 || u.hi_ms < u.lo_ms) {
        throw SessionError("latency: need 0 < lo <= hi");
      }
    }
  }

  std::int64_t next() {
    if (const auto* f = std::get_if<FixedLatency>(&model_.interval)) return f->ms;
    const auto& u = std::get<UniformLatency>(model_.interval);
    return std::uniform_int_distribution<std::int64_t>(u.lo_ms, u.hi_ms)(rng_);
  }

 private:
  LatencyModel model_;
  std::mt19937_64 rng_;
};

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

// Slot and 1-based position of the cheapest key offering `c`.
std::optional<std::pair<Slot, int>> find_symbol(const Layout& layout, char c) {
  std::optional<std::pair<Slot, int>> best;
  for (std::uint16_t i = 0; i < layout.slot_count(); ++i) {
    const auto symbols = action_symbols(layout.action(Slot{i}));
    const auto pos = symbols.find(c);
    if (pos == std::string::npos) continue;
    const int taps = static_cast<int>(pos) + 1;
    if (!best || taps < best->second) best = std::make_pair(Slot{i}, taps);
  }
  return best;
}

template <class Action>
Slot require_slot(const Layout& layout, std::string_view what) {
  auto slot = layout.find_action(
      [](const KeyAction& a) { return std::holds_alternative<Action>(a); });
  if (!slot) {
    throw SessionError("layout " + layout.id() + " has no " + std::string(what) +
                       " key");
  }
  return *slot;
}

std::string describe(char c) {
  return "'" + std::string(1, c) + "'";
}

}  // namespace

LatencyModel parse_latency(std::string_view spec, std::uint64_t seed) {
  LatencyModel m;
  m.seed = seed;
  if (spec.starts_with("fixed:")) {
    m.interval = FixedLatency{parse_ms(spec.substr(6), spec)};
  } else if (spec.starts_with("uniform:")) {
    const auto rest = spec.substr(8);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      throw SessionError("latency: expected uniform:LO:HI");
    }
    m.interval = UniformLatency{parse_ms(rest.substr(0, colon), spec),
                                parse_ms(rest.substr(colon + 1), spec)};
  } else {
    throw SessionError("latency: expected fixed:MS or uniform:LO:HI, got \"" +
                       std::string(spec) + "\"");
  }
  IntervalSource check(m);
  (void)check;
  return m;
}

std::vector<Slot> plan_presses(std::string_view phrase, const Layout& layout) {
  std::vector<Slot> plan;
  switch (layout.method()) {
    case MethodKind::SingleDigitFdi: {
      for (char c : phrase) {
        auto hit = find_symbol(layout, c);
        if (!hit) throw SessionError("symbol " + describe(c) + " not producible");
        plan.push_back(hit->first);
      }
      plan.push_back(require_slot<Call>(layout, "Call"));
      break;
    }
    case MethodKind::DoubleDigitFdi: {
      const Slot enter = require_slot<Enter>(layout, "Enter");
      for (char c : phrase) {
        auto hit = find_symbol(layout, c);
        if (!hit) throw SessionError("symbol " + describe(c) + " not producible");
        plan.insert(plan.end(), static_cast<std::size_t>(hit->second), hit->first);
        plan.push_back(enter);
      }
      plan.push_back(require_slot<Call>(layout, "Call"));
      break;
    }
    case MethodKind::Fti: {
      const Slot enter = require_slot<Enter>(layout, "Enter");
      std::optional<Slot> toggle = layout.find_action([](const KeyAction& a) {
        return std::holds_alternative<CaseToggle>(a);
      });
      CaseMode mode = CaseMode::Upper;
      for (char c : phrase) {
        const bool letter = is_upper(c) || is_lower(c);
        const char key = is_lower(c) ? static_cast<char>(c - 'a' + 'A') : c;
        auto hit = find_symbol(layout, key);
        if (!hit || (letter && !std::holds_alternative<LetterGroup>(
                                   layout.action(hit->first)))) {
          throw SessionError("symbol " + describe(c) + " not producible");
        }
        if (letter) {
          const CaseMode want = is_upper(c) ? CaseMode::Upper : CaseMode::Lower;
          if (want != mode) {
            if (!toggle) {
              throw SessionError("symbol " + describe(c) +
                                 " needs a case toggle key");
            }
            plan.push_back(*toggle);
            mode = want;
          }
        }
        plan.insert(plan.end(), static_cast<std::size_t>(hit->second), hit->first);
        plan.push_back(enter);
      }
      plan.push_back(require_slot<Send>(layout, "Send"));
      break;
    }
  }
  return plan;
}

SessionLog synthesize_session(std::string_view phrase, const Layout& layout,
                              const CalibrationProfile& profile,
                              const LatencyModel& latency,
                              const SynthesisOptions& options) {
  const auto plan = plan_presses(phrase, layout);
  if (options.touch_payloads && profile.anchors().size() != layout.slot_count()) {
    throw SessionError("profile anchors do not match layout " + layout.id());
  }
  SessionLog log;
  log.header.method = layout.method();
  log.header.layout_id = layout.id();
  log.header.calibration = CalibrationInput{profile.fingertips(), profile.params()};
  log.header.participant_id = options.participant_id;
  log.header.prescribed = std::string(phrase);

  IntervalSource intervals(latency);
  std::int64_t t = 0;
  log.events.reserve(plan.size());
  for (Slot slot : plan) {
    t += intervals.next();
    if (options.touch_payloads) {
      const Point p = profile.anchor(slot);
      log.events.push_back({t, TouchPayload{p.x, p.y}});
    } else {
      log.events.push_back({t, RegionPayload{layout.slot_name(slot)}});
    }
  }
  return log;
}

ReplayResult replay_session(const SessionLog& log, const Layout& layout,
                            const CalibrationProfile& profile) {
  if (log.header.method != layout.method()) {
    throw SessionError("log method " + std::string(method_name(log.header.method)) +
                       " does not match layout method " +
                       std::string(method_name(layout.method())));
  }
  if (log.events.empty()) throw SessionError("empty session log");
  const auto& anchors = profile.anchors();
  if (anchors.size() != layout.slot_count()) {
    throw SessionError("profile anchors do not match layout " + layout.id());
  }
  for (std::uint16_t i = 0; i < layout.slot_count(); ++i) {
    if (anchors[i].name != layout.slot_name(Slot{i})) {
      throw SessionError("profile anchor " + anchors[i].name +
                         " does not match layout slot " +
                         layout.slot_name(Slot{i}));
    }
  }

  ReplayResult out;
  EngineState state = new_session(std::make_shared<const Layout>(layout));
  out.trace.reserve(log.events.size());
  for (std::size_t i = 0; i < log.events.size(); ++i) {
    const auto& ev = log.events[i];
    TraceEntry entry;
    entry.event_index = i;
    entry.t_ms = ev.t_ms;

    std::optional<Slot> slot;
    if (const auto* touch = std::get_if<TouchPayload>(&ev.payload)) {
      slot = resolve_region({touch->x, touch->y}, profile);
      if (!slot) entry.note = "touch resolved to no region";
    } else {
      const auto& name = std::get<RegionPayload>(ev.payload).region;
      slot = layout.find_slot(name);
      if (!slot) entry.note = "unknown region \"" + name + "\"";
    }
    if (slot && state.terminated) {
      entry.note = "press after termination ignored";
      slot.reset();
    }
    if (slot) {
      entry.slot = layout.slot_name(*slot);
      auto t = press(state, *slot);
      state = std::move(t.state);
      entry.feedback = std::move(t.events);
    } else {
      ++out.skipped;
    }
    out.trace.push_back(std::move(entry));
  }

  out.transcript = transcript(state);
  out.terminated = state.terminated;
  out.record.prescribed = log.header.prescribed.value_or(out.transcript);
  out.record.transcribed = out.transcript;
  out.record.start_ms = log.events.front().t_ms;
  out.record.end_ms = log.events.back().t_ms;
  out.record.press_total = state.press_total - (state.terminated ? 1 : 0);
  out.record.correction_total = state.correction_total;
  return out;
}

// ---------------------------------------------------------------------------
// JSON Lines

std::string serialize_session_log(const SessionLog& log) {
  ordered_json header;
  header["method"] = method_name(log.header.method);
  header["layout_id"] = log.header.layout_id;
  if (const auto* ref = std::get_if<CalibrationRef>(&log.header.calibration)) {
    header["calibration"] = {{"ref", ref->path}};
  } else if (const auto* in =
                 std::get_if<CalibrationInput>(&log.header.calibration)) {
    ordered_json tips = ordered_json::array();
    for (const auto& p : in->fingertips) tips.push_back({{"x", p.x}, {"y", p.y}});
    ordered_json cal;
    cal["fingertips"] = std::move(tips);
    cal["edge_offset"] = in->params.edge_offset;
    cal["radius"] = in->params.radius;
    header["calibration"] = std::move(cal);
  }
  if (log.header.participant_id) {
    header["participant_id"] = *log.header.participant_id;
  }
  if (log.header.prescribed) header["prescribed"] = *log.header.prescribed;

  std::string out = header.dump();
  out.push_back('\n');
  for (const auto& ev : log.events) {
    ordered_json j;
    j["t"] = ev.t_ms;
    if (const auto* touch = std::get_if<TouchPayload>(&ev.payload)) {
      j["x"] = touch->x;
      j["y"] = touch->y;
    } else {
      j["region"] = std::get<RegionPayload>(ev.payload).region;
    }
    out += j.dump();
    out.push_back('\n');
  }
  return out;
}

SessionLog parse_session_log(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (lines.empty()) throw SessionError("session log: missing header line");

  auto parse_line = [](std::string_view line, const std::string& where) {
    try {
      return json::parse(line);
    } catch (const json::parse_error& e) {
      throw SessionError("session log: " + where + ": malformed JSON: " + e.what());
    }
  };

  SessionLog log;
  const json header = parse_line(lines[0], "header");
  if (!header.is_object()) throw SessionError("session log: header must be an object");
  if (!header.contains("method") || !header["method"].is_string()) {
    throw SessionError("session log: header needs \"method\"");
  }
  const auto method = parse_method(header["method"].get<std::string>());
  if (!method) {
    throw SessionError("session log: unknown method \"" +
                       header["method"].get<std::string>() + "\"");
  }
  log.header.method = *method;
  if (!header.contains("layout_id") || !header["layout_id"].is_string()) {
    throw SessionError("session log: header needs \"layout_id\"");
  }
  log.header.layout_id = header["layout_id"].get<std::string>();
  if (header.contains("calibration") && !header["calibration"].is_null()) {
    const auto& cal = header["calibration"];
    if (cal.is_object() && cal.contains("ref")) {
      if (!cal["ref"].is_string()) {
        throw SessionError("session log: calibration ref must be a string");
      }
      log.header.calibration = CalibrationRef{cal["ref"].get<std::string>()};
    } else {
      try {
        log.header.calibration = parse_calibration(cal.dump());
      } catch (const GeometryError& e) {
        throw SessionError(std::string("session log: ") + e.what());
      }
    }
  }
  if (header.contains("participant_id")) {
    if (!header["participant_id"].is_string()) {
      throw SessionError("session log: participant_id must be a string");
    }
    log.header.participant_id = header["participant_id"].get<std::string>();
  }
  if (header.contains("prescribed")) {
    if (!header["prescribed"].is_string()) {
      throw SessionError("session log: prescribed must be a string");
    }
    log.header.prescribed = header["prescribed"].get<std::string>();
  }

  std::optional<std::size_t> kind;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::size_t index = log.events.size();
    const std::string where = "event " + std::to_string(index) + " (line " +
                              std::to_string(li + 1) + ")";
    if (lines[li].empty()) {
      throw SessionError("session log: " + where + ": empty line");
    }
    const json j = parse_line(lines[li], where);
    if (!j.is_object() || !j.contains("t") || !j["t"].is_number_integer()) {
      throw SessionError("session log: " + where + ": needs integer \"t\"");
    }
    const auto t = j["t"].get<std::int64_t>();
    if (t < 0) throw SessionError("session log: " + where + ": negative timestamp");
    if (!log.events.empty() && t < log.events.back().t_ms) {
      throw SessionError("session log: " + where + ": timestamp decreases");
    }
    SessionEvent ev;
    ev.t_ms = t;
    if (j.contains("region") && j["region"].is_string() && !j.contains("x") &&
        !j.contains("y") && j.size() == 2) {
      ev.payload = RegionPayload{j["region"].get<std::string>()};
    } else if (j.contains("x") && j["x"].is_number() && j.contains("y") &&
               j["y"].is_number() && !j.contains("region") && j.size() == 3) {
      ev.payload = TouchPayload{j["x"].get<double>(), j["y"].get<double>()};
    } else {
      throw SessionError("session log: " + where + ": unknown payload kind");
    }
    if (kind && *kind != ev.payload.index()) {
      throw SessionError("session log: " + where +
                         ": touch and region payloads mixed in one log");
    }
    kind = ev.payload.index();
    log.events.push_back(std::move(ev));
  }
  return log;
}

}  // namespace fbt
