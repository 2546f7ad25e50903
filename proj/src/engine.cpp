#include "fbt/engine.hpp"

#include <array>
#include <cctype>

namespace fbt {

namespace {

constexpr std::array<std::string_view, 10> kDigitNames = {
    "zero", "one", "two",   "three", "four",
    "five", "six", "seven", "eight", "nine"};

FeedbackEvent announce(std::string s) {
  return {FeedbackKind::Announce, std::move(s)};
}
FeedbackEvent beep(std::string s) {
  return {FeedbackKind::ErrorBeep, std::move(s)};
}

void check_pressable(const EngineState& state, MethodKind expected, Slot slot) {
  if (!state.layout) throw EngineError("session has no layout");
  if (state.layout->method() != expected) {
    throw EngineError("press routed to the wrong entry method");
  }
  if (state.terminated) throw EngineError("session already terminated");
  if (slot.index >= state.layout->slot_count()) {
    throw EngineError("slot " + std::to_string(slot.index) +
                      " is not part of layout " + state.layout->id());
  }
}

// Backspace shared by all methods: drop the candidate, else the last
// committed symbol.
void apply_backspace(EngineState& s, std::vector<FeedbackEvent>& ev) {
  if (!std::holds_alternative<std::monostate>(s.pending)) {
    s.pending = std::monostate{};
    ev.push_back(announce("cleared"));
  } else if (!s.buffer.empty()) {
    const char gone = s.buffer.back();
    s.buffer.pop_back();
    ++s.correction_total;
    ev.push_back(announce("deleted " + spoken_symbol(gone)));
  } else {
    ev.push_back(beep("nothing to delete"));
  }
}

void apply_terminal(EngineState& s, std::vector<FeedbackEvent>& ev,
                    std::string_view what) {
  if (!std::holds_alternative<std::monostate>(s.pending)) {
    ev.push_back(beep("press enter or backspace first"));
    return;
  }
  s.terminated = true;
  ev.push_back({FeedbackKind::Terminal, std::string(what)});
}

char fold_case(char c, CaseMode mode) {
  if (mode == CaseMode::Lower && c >= 'A' && c <= 'Z') {
    return static_cast<char>(c - 'A' + 'a');
  }
  return c;
}

// Symbol currently offered by a pending candidate.
char candidate_symbol(const EngineState& s) {
  if (const auto* d = std::get_if<DigitCandidate>(&s.pending)) {
    return action_symbols(s.layout->action(d->slot))[d->press_count - 1];
  }
  const auto& l = std::get<LetterCandidate>(s.pending);
  const auto& action = s.layout->action(l.slot);
  const char c = action_symbols(action)[l.tap_index - 1];
  return std::holds_alternative<LetterGroup>(action) ? fold_case(c, s.case_mode)
                                                      : c;
}

void commit_pending(EngineState& s, std::vector<FeedbackEvent>& ev) {
  if (std::holds_alternative<std::monostate>(s.pending)) {
    ev.push_back(beep("nothing to commit"));
    return;
  }
  const char c = candidate_symbol(s);
  s.buffer.push_back(c);
  s.pending = std::monostate{};
  ev.push_back({FeedbackKind::CommitEcho, "committed " + spoken_symbol(c)});
}

}  // namespace

std::string_view feedback_kind_name(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::Announce: return "announce";
    case FeedbackKind::CommitEcho: return "commit_echo";
    case FeedbackKind::ErrorBeep: return "error_beep";
    case FeedbackKind::ModeChange: return "mode_change";
    case FeedbackKind::Terminal: return "terminal";
  }
  return "unknown";
}

std::string spoken_symbol(char c) {
  if (c >= '0' && c <= '9') return std::string(kDigitNames[c - '0']);
  if (std::isalpha(static_cast<unsigned char>(c))) return std::string(1, c);
  switch (c) {
    case ' ': return "space";
    case '.': return "period";
    case ',': return "comma";
    case '?': return "question mark";
    case '!': return "exclamation mark";
    case '\'': return "apostrophe";
    case '-': return "hyphen";
    default: return std::string(1, c);
  }
}

EngineState new_session(std::shared_ptr<const Layout> layout) {
  if (!layout) throw EngineError("new_session: null layout");
  if (auto v = validate_layout(*layout); !v.empty()) {
    throw LayoutValidationError(std::move(v));
  }
  EngineState s;
  s.layout = std::move(layout);
  return s;
}

EngineState new_session(Layout layout) {
  return new_session(std::make_shared<const Layout>(std::move(layout)));
}

Transition press_single_digit(const EngineState& state, Slot slot) {
  check_pressable(state, MethodKind::SingleDigitFdi, slot);
  Transition t{state, {}};
  EngineState& s = t.state;
  ++s.press_total;
  const auto& action = s.layout->action(slot);
  if (const auto* d = std::get_if<EmitDigit>(&action)) {
    const char c = static_cast<char>('0' + d->digit);
    s.buffer.push_back(c);
    t.events.push_back(announce(spoken_symbol(c)));
  } else if (std::holds_alternative<Backspace>(action)) {
    apply_backspace(s, t.events);
  } else if (std::holds_alternative<Call>(action)) {
    apply_terminal(s, t.events, "calling");
  } else {
    t.events.push_back(beep("no key"));
  }
  return t;
}

Transition press_double_digit(const EngineState& state, Slot slot) {
  check_pressable(state, MethodKind::DoubleDigitFdi, slot);
  Transition t{state, {}};
  EngineState& s = t.state;
  ++s.press_total;
  const auto& action = s.layout->action(slot);
  if (std::holds_alternative<DigitPair>(action) ||
      std::holds_alternative<EmitDigit>(action)) {
    const auto size = static_cast<int>(action_symbols(action).size());
    const auto* cur = std::get_if<DigitCandidate>(&s.pending);
    const int count = (cur && cur->slot == slot) ? cur->press_count % size + 1 : 1;
    s.pending = DigitCandidate{slot, count};
    t.events.push_back(announce(spoken_symbol(candidate_symbol(s))));
  } else if (std::holds_alternative<Enter>(action)) {
    commit_pending(s, t.events);
  } else if (std::holds_alternative<Backspace>(action)) {
    apply_backspace(s, t.events);
  } else if (std::holds_alternative<Call>(action)) {
    apply_terminal(s, t.events, "calling");
  } else {
    t.events.push_back(beep("no key"));
  }
  return t;
}

Transition press_fti(const EngineState& state, Slot slot) {
  check_pressable(state, MethodKind::Fti, slot);
  Transition t{state, {}};
  EngineState& s = t.state;
  ++s.press_total;
  const auto& action = s.layout->action(slot);
  const std::string symbols = action_symbols(action);
  if (!symbols.empty()) {
    const auto size = static_cast<int>(symbols.size());
    const auto* cur = std::get_if<LetterCandidate>(&s.pending);
    const int tap = (cur && cur->slot == slot) ? cur->tap_index % size + 1 : 1;
    s.pending = LetterCandidate{slot, tap};
    t.events.push_back(announce(spoken_symbol(candidate_symbol(s))));
  } else if (std::holds_alternative<Enter>(action)) {
    commit_pending(s, t.events);
  } else if (std::holds_alternative<Backspace>(action)) {
    apply_backspace(s, t.events);
  } else if (std::holds_alternative<CaseToggle>(action)) {
    s.case_mode = s.case_mode == CaseMode::Upper ? CaseMode::Lower
                                                 : CaseMode::Upper;
    s.pending = std::monostate{};
    t.events.push_back({FeedbackKind::ModeChange,
                        s.case_mode == CaseMode::Upper ? "uppercase"
                                                       : "lowercase"});
  } else if (std::holds_alternative<Send>(action)) {
    apply_terminal(s, t.events, "sent");
  } else {
    t.events.push_back(beep("no key"));
  }
  return t;
}

Transition press(const EngineState& state, Slot slot) {
  if (!state.layout) throw EngineError("session has no layout");
  switch (state.layout->method()) {
    case MethodKind::SingleDigitFdi: return press_single_digit(state, slot);
    case MethodKind::DoubleDigitFdi: return press_double_digit(state, slot);
    case MethodKind::Fti: return press_fti(state, slot);
  }
  throw EngineError("unknown entry method");
}

}  // namespace fbt
