#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fbt {

// The eleven grip-anchored screen regions, in canonical order. The order is
// used for tie-breaking everywhere a choice between regions has to be made.
enum class RegionId : std::uint8_t {
  AboveIndex,
  Index,
  Middle,
  Ring,
  Little,
  BelowLittle,
  Center,
  Thumb,
  AboveThumb,
  BelowThumb,
  BottomCenter,
};

inline constexpr std::size_t kRegionCount = 11;

inline constexpr std::array<RegionId, kRegionCount> kAllRegions = {
    RegionId::AboveIndex, RegionId::Index,      RegionId::Middle,
    RegionId::Ring,       RegionId::Little,     RegionId::BelowLittle,
    RegionId::Center,     RegionId::Thumb,      RegionId::AboveThumb,
    RegionId::BelowThumb, RegionId::BottomCenter,
};

std::string_view region_name(RegionId region);
std::optional<RegionId> parse_region(std::string_view name);

enum class MethodKind : std::uint8_t { SingleDigitFdi, DoubleDigitFdi, Fti };

inline constexpr std::array<MethodKind, 3> kAllMethods = {
    MethodKind::SingleDigitFdi, MethodKind::DoubleDigitFdi, MethodKind::Fti};

std::string_view method_name(MethodKind method);
std::optional<MethodKind> parse_method(std::string_view name);

// Key actions bound to a slot.
struct EmitDigit {
  int digit = 0;
  bool operator==(const EmitDigit&) const = default;
};
struct DigitPair {
  int first = 0;
  int second = 0;
  bool operator==(const DigitPair&) const = default;
};
struct LetterGroup {
  std::string letters;
  bool operator==(const LetterGroup&) const = default;
};
struct NumberGroup {
  std::string digits;
  bool operator==(const NumberGroup&) const = default;
};
struct SpecialGroup {
  std::string symbols;
  bool operator==(const SpecialGroup&) const = default;
};
struct Backspace {
  bool operator==(const Backspace&) const = default;
};
struct Enter {
  bool operator==(const Enter&) const = default;
};
struct Call {
  bool operator==(const Call&) const = default;
};
struct Send {
  bool operator==(const Send&) const = default;
};
struct CaseToggle {
  bool operator==(const CaseToggle&) const = default;
};
struct Unassigned {
  bool operator==(const Unassigned&) const = default;
};

using KeyAction = std::variant<EmitDigit, DigitPair, LetterGroup, NumberGroup,
                               SpecialGroup, Backspace, Enter, Call, Send,
                               CaseToggle, Unassigned>;

std::string_view action_kind(const KeyAction& action);

// Multi-tap symbol sequence carried by a key, empty for non-symbol keys.
// Digit keys yield '0'..'9'; letter groups yield uppercase letters.
std::string action_symbols(const KeyAction& action);

// Index into a layout's key slots. Slots 0..10 are the canonical regions in
// canonical order; synthetic anchors follow in declaration order.
struct Slot {
  std::uint16_t index = 0;

  constexpr Slot() = default;
  constexpr explicit Slot(std::uint16_t i) : index(i) {}
  constexpr Slot(RegionId r) : index(static_cast<std::uint16_t>(r)) {}

  constexpr bool is_canonical() const { return index < kRegionCount; }
  auto operator<=>(const Slot&) const = default;
};

// Extra anchor positioned relative to a canonical region. Used where a layout
// needs more keys than the eleven grip regions provide.
struct SyntheticAnchor {
  std::string name;
  double dx = 0.0;
  double dy = 0.0;
  RegionId relative_to = RegionId::Center;
  bool operator==(const SyntheticAnchor&) const = default;
};

class Layout {
 public:
  Layout(MethodKind method, std::string id,
         std::array<KeyAction, kRegionCount> bindings,
         std::vector<SyntheticAnchor> synthetic = {},
         std::vector<KeyAction> synthetic_bindings = {});

  MethodKind method() const { return method_; }
  const std::string& id() const { return id_; }

  std::size_t slot_count() const { return kRegionCount + synthetic_.size(); }
  const KeyAction& action(Slot slot) const;
  std::string slot_name(Slot slot) const;
  std::optional<Slot> find_slot(std::string_view name) const;

  // First slot (canonical order) whose action satisfies pred.
  template <typename Pred>
  std::optional<Slot> find_action(Pred pred) const {
    for (std::uint16_t i = 0; i < slot_count(); ++i) {
      if (pred(action(Slot{i}))) return Slot{i};
    }
    return std::nullopt;
  }

  const std::array<KeyAction, kRegionCount>& bindings() const {
    return bindings_;
  }
  const std::vector<SyntheticAnchor>& synthetic_anchors() const {
    return synthetic_;
  }
  const std::vector<KeyAction>& synthetic_bindings() const {
    return synthetic_bindings_;
  }

  bool operator==(const Layout&) const = default;

 private:
  MethodKind method_;
  std::string id_;
  std::array<KeyAction, kRegionCount> bindings_;
  std::vector<SyntheticAnchor> synthetic_;
  std::vector<KeyAction> synthetic_bindings_;
};

struct Violation {
  std::string slot;  // region or synthetic anchor name, or "-" for global
  std::string rule;
  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_layout(const Layout& layout);

Layout builtin_layout(MethodKind method);

class LayoutParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LayoutValidationError : public std::runtime_error {
 public:
  explicit LayoutValidationError(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

// JSON layout documents. load_layout validates; unbound regions are reported
// as violations.
std::string serialize_layout(const Layout& layout);
Layout load_layout(std::string_view document);

std::string format_violations(const std::vector<Violation>& violations);

}  // namespace fbt
