#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fbt/layout.hpp"

namespace fbt {

enum class CaseMode : std::uint8_t { Upper, Lower };

// Double-digit candidate: press_count-th symbol of the key (cycling).
struct DigitCandidate {
  Slot slot;
  int press_count = 1;
  bool operator==(const DigitCandidate&) const = default;
};

// Finger-text candidate: tap_index-th symbol of the group (1-based, cycling).
struct LetterCandidate {
  Slot slot;
  int tap_index = 1;
  bool operator==(const LetterCandidate&) const = default;
};

using Pending = std::variant<std::monostate, DigitCandidate, LetterCandidate>;

enum class FeedbackKind : std::uint8_t {
  Announce,
  CommitEcho,
  ErrorBeep,
  ModeChange,
  Terminal,
};

std::string_view feedback_kind_name(FeedbackKind kind);

struct FeedbackEvent {
  FeedbackKind kind = FeedbackKind::Announce;
  std::string utterance;
  bool operator==(const FeedbackEvent&) const = default;
};

struct EngineState {
  std::shared_ptr<const Layout> layout;
  std::string buffer;
  Pending pending;
  CaseMode case_mode = CaseMode::Upper;
  int press_total = 0;
  int correction_total = 0;
  bool terminated = false;

  bool operator==(const EngineState& o) const {
    return *layout == *o.layout && buffer == o.buffer &&
           pending == o.pending && case_mode == o.case_mode &&
           press_total == o.press_total &&
           correction_total == o.correction_total &&
           terminated == o.terminated;
  }
};

struct Transition {
  EngineState state;
  std::vector<FeedbackEvent> events;
};

class EngineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fresh session. Throws LayoutValidationError for an invalid layout.
EngineState new_session(std::shared_ptr<const Layout> layout);
EngineState new_session(Layout layout);

// Method-specific transitions. Each throws EngineError when the session has
// terminated, when the layout is of another method, or for an unknown slot.
Transition press_single_digit(const EngineState& state, Slot slot);
Transition press_double_digit(const EngineState& state, Slot slot);
Transition press_fti(const EngineState& state, Slot slot);

// Dispatches on the layout's method.
Transition press(const EngineState& state, Slot slot);

// Committed text; a pending candidate is not part of it.
inline const std::string& transcript(const EngineState& state) {
  return state.buffer;
}

// Spoken name of a symbol: "four", "S", "space", ...
std::string spoken_symbol(char c);

}  // namespace fbt
