#include "fbt/layout.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fbt {

namespace {

constexpr std::array<std::string_view, kRegionCount> kRegionNames = {
    "AboveIndex", "Index",      "Middle",     "Ring",
    "Little",     "BelowLittle", "Center",    "Thumb",
    "AboveThumb", "BelowThumb", "BottomCenter",
};

constexpr std::array<std::string_view, 3> kMethodNames = {
    "single_digit_fdi", "double_digit_fdi", "fti"};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

std::string_view region_name(RegionId region) {
  return kRegionNames[static_cast<std::size_t>(region)];
}

std::optional<RegionId> parse_region(std::string_view name) {
  for (std::size_t i = 0; i < kRegionCount; ++i) {
    if (kRegionNames[i] == name) return static_cast<RegionId>(i);
  }
  return std::nullopt;
}

std::string_view method_name(MethodKind method) {
  return kMethodNames[static_cast<std::size_t>(method)];
}

std::optional<MethodKind> parse_method(std::string_view name) {
  for (std::size_t i = 0; i < kMethodNames.size(); ++i) {
    if (kMethodNames[i] == name) return static_cast<MethodKind>(i);
  }
  return std::nullopt;
}

std::string_view action_kind(const KeyAction& action) {
  return std::visit(
      Overloaded{
          [](const EmitDigit&) { return std::string_view("emit_digit"); },
          [](const DigitPair&) { return std::string_view("digit_pair"); },
          [](const LetterGroup&) { return std::string_view("letter_group"); },
          [](const NumberGroup&) { return std::string_view("number_group"); },
          [](const SpecialGroup&) {
            return std::string_view("special_group");
          },
          [](const Backspace&) { return std::string_view("backspace"); },
          [](const Enter&) { return std::string_view("enter"); },
          [](const Call&) { return std::string_view("call"); },
          [](const Send&) { return std::string_view("send"); },
          [](const CaseToggle&) { return std::string_view("case_toggle"); },
          [](const Unassigned&) { return std::string_view("unassigned"); },
      },
      action);
}

std::string action_symbols(const KeyAction& action) {
  return std::visit(
      Overloaded{
          [](const EmitDigit& a) {
            return std::string(1, static_cast<char>('0' + a.digit));
          },
          [](const DigitPair& a) {
            return std::string{static_cast<char>('0' + a.first),
                               static_cast<char>('0' + a.second)};
          },
          [](const LetterGroup& a) { return a.letters; },
          [](const NumberGroup& a) { return a.digits; },
          [](const SpecialGroup& a) { return a.symbols; },
          [](const auto&) { return std::string(); },
      },
      action);
}

Layout::Layout(MethodKind method, std::string id,
               std::array<KeyAction, kRegionCount> bindings,
               std::vector<SyntheticAnchor> synthetic,
               std::vector<KeyAction> synthetic_bindings)
    : method_(method),
      id_(std::move(id)),
      bindings_(std::move(bindings)),
      synthetic_(std::move(synthetic)),
      synthetic_bindings_(std::move(synthetic_bindings)) {
  if (synthetic_bindings_.size() != synthetic_.size()) {
    throw std::invalid_argument(
        "layout: every synthetic anchor needs exactly one binding");
  }
}

const KeyAction& Layout::action(Slot slot) const {
  if (slot.is_canonical()) return bindings_[slot.index];
  const std::size_t i = slot.index - kRegionCount;
  if (i >= synthetic_bindings_.size()) {
    throw std::out_of_range("layout: slot index out of range");
  }
  return synthetic_bindings_[i];
}

std::string Layout::slot_name(Slot slot) const {
  if (slot.is_canonical()) {
    return std::string(region_name(static_cast<RegionId>(slot.index)));
  }
  const std::size_t i = slot.index - kRegionCount;
  if (i >= synthetic_.size()) {
    throw std::out_of_range("layout: slot index out of range");
  }
  return synthetic_[i].name;
}

std::optional<Slot> Layout::find_slot(std::string_view name) const {
  if (auto r = parse_region(name)) return Slot{*r};
  for (std::size_t i = 0; i < synthetic_.size(); ++i) {
    if (synthetic_[i].name == name) {
      return Slot{static_cast<std::uint16_t>(kRegionCount + i)};
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool allowed_for(MethodKind method, const KeyAction& a) {
  if (std::holds_alternative<Unassigned>(a) ||
      std::holds_alternative<Backspace>(a)) {
    return true;
  }
  switch (method) {
    case MethodKind::SingleDigitFdi:
      return std::holds_alternative<EmitDigit>(a) ||
             std::holds_alternative<Call>(a);
    case MethodKind::DoubleDigitFdi:
      return std::holds_alternative<EmitDigit>(a) ||
             std::holds_alternative<DigitPair>(a) ||
             std::holds_alternative<Enter>(a) ||
             std::holds_alternative<Call>(a);
    case MethodKind::Fti:
      return std::holds_alternative<LetterGroup>(a) ||
             std::holds_alternative<NumberGroup>(a) ||
             std::holds_alternative<SpecialGroup>(a) ||
             std::holds_alternative<Enter>(a) ||
             std::holds_alternative<CaseToggle>(a) ||
             std::holds_alternative<Send>(a);
  }
  return false;
}

void check_action_shape(const std::string& slot, const KeyAction& a,
                        std::vector<Violation>& out) {
  auto valid_digit = [](int d) { return d >= 0 && d <= 9; };
  auto has_duplicates = [](std::string s) {
    std::sort(s.begin(), s.end());
    return std::adjacent_find(s.begin(), s.end()) != s.end();
  };
  std::visit(
      Overloaded{
          [&](const EmitDigit& e) {
            if (!valid_digit(e.digit)) {
              out.push_back({slot, "digit must be in 0..9"});
            }
          },
          [&](const DigitPair& p) {
            if (!valid_digit(p.first) || !valid_digit(p.second)) {
              out.push_back({slot, "digit pair digits must be in 0..9"});
            } else if (p.first == p.second) {
              out.push_back({slot, "digit pair digits must be distinct"});
            }
          },
          [&](const LetterGroup& g) {
            if (g.letters.empty() || g.letters.size() > 7) {
              out.push_back({slot, "letter group must hold 1 to 7 letters"});
            }
            if (!std::all_of(g.letters.begin(), g.letters.end(),
                             [](char c) { return c >= 'A' && c <= 'Z'; })) {
              out.push_back({slot, "letter group must be uppercase A-Z"});
            }
            if (has_duplicates(g.letters)) {
              out.push_back({slot, "letter group repeats a letter"});
            }
          },
          [&](const NumberGroup& g) {
            if (g.digits.empty() ||
                !std::all_of(g.digits.begin(), g.digits.end(), [](char c) {
                  return c >= '0' && c <= '9';
                })) {
              out.push_back({slot, "number group must be non-empty digits"});
            }
            if (has_duplicates(g.digits)) {
              out.push_back({slot, "number group repeats a digit"});
            }
          },
          [&](const SpecialGroup& g) {
            if (g.symbols.empty() ||
                !std::all_of(g.symbols.begin(), g.symbols.end(), [](char c) {
                  const auto u = static_cast<unsigned char>(c);
                  return u >= 0x20 && u < 0x7f && !std::isalnum(u);
                })) {
              out.push_back(
                  {slot, "special group must be printable non-alphanumeric"});
            }
            if (has_duplicates(g.symbols)) {
              out.push_back({slot, "special group repeats a symbol"});
            }
          },
          [](const auto&) {},
      },
      a);
}

template <class Action>
void require_exactly_one(const Layout& layout, std::string_view label,
                         std::vector<Violation>& out) {
  std::vector<std::string> where;
  for (std::uint16_t i = 0; i < layout.slot_count(); ++i) {
    if (std::holds_alternative<Action>(layout.action(Slot{i}))) {
      where.push_back(layout.slot_name(Slot{i}));
    }
  }
  if (where.empty()) {
    out.push_back({"-", "exactly one " + std::string(label) +
                            " binding required, found none"});
  }
  for (std::size_t k = 1; k < where.size(); ++k) {
    out.push_back(
        {where[k], std::string(label) + " bound more than once (also at " +
                       where.front() + ")"});
  }
}

}  // namespace

std::vector<Violation> validate_layout(const Layout& layout) {
  std::vector<Violation> out;

  std::set<std::string> names;
  for (const auto& anchor : layout.synthetic_anchors()) {
    if (anchor.name.empty()) {
      out.push_back({"-", "synthetic anchor name must be non-empty"});
    } else if (parse_region(anchor.name)) {
      out.push_back({anchor.name, "synthetic anchor shadows a region name"});
    } else if (!names.insert(anchor.name).second) {
      out.push_back({anchor.name, "synthetic anchor declared more than once"});
    }
    if (!std::isfinite(anchor.dx) || !std::isfinite(anchor.dy)) {
      out.push_back({anchor.name, "synthetic anchor offset must be finite"});
    }
  }

  const MethodKind method = layout.method();
  for (std::uint16_t i = 0; i < layout.slot_count(); ++i) {
    const Slot slot{i};
    const auto& a = layout.action(slot);
    const std::string name = layout.slot_name(slot);
    if (!allowed_for(method, a)) {
      out.push_back({name, std::string(action_kind(a)) + " not allowed in " +
                               std::string(method_name(method))});
      continue;
    }
    check_action_shape(name, a, out);
  }

  // Symbol coverage: each required symbol bound exactly once.
  std::map<char, std::string> seen;
  auto cover = [&](char c, const std::string& where, std::string_view what) {
    auto [it, fresh] = seen.emplace(c, where);
    if (!fresh) {
      std::string sym = what == "letter" ? std::string("'") + c + "'"
                                         : std::string(1, c);
      out.push_back({where, std::string(what) + " " + sym +
                                " bound more than once (also at " +
                                it->second + ")"});
    }
  };
  for (std::uint16_t i = 0; i < layout.slot_count(); ++i) {
    const Slot slot{i};
    const auto& a = layout.action(slot);
    if (!allowed_for(method, a)) continue;
    const std::string name = layout.slot_name(slot);
    if (method == MethodKind::Fti) {
      const bool letters = std::holds_alternative<LetterGroup>(a);
      for (char c : action_symbols(a)) {
        cover(c, name, letters ? "letter" : "symbol");
      }
    } else {
      for (char c : action_symbols(a)) cover(c, name, "digit");
    }
  }
  if (method == MethodKind::Fti) {
    for (char c = 'A'; c <= 'Z'; ++c) {
      if (!seen.count(c)) {
        out.push_back({"-", std::string("letter '") + c + "' not bound"});
      }
    }
  } else {
    for (char c = '0'; c <= '9'; ++c) {
      if (!seen.count(c)) {
        out.push_back({"-", std::string("digit ") + c + " not bound"});
      }
    }
  }

  require_exactly_one<Backspace>(layout, "Backspace", out);
  switch (method) {
    case MethodKind::SingleDigitFdi:
      require_exactly_one<Call>(layout, "Call", out);
      break;
    case MethodKind::DoubleDigitFdi:
      require_exactly_one<Enter>(layout, "Enter", out);
      require_exactly_one<Call>(layout, "Call", out);
      break;
    case MethodKind::Fti:
      require_exactly_one<Enter>(layout, "Enter", out);
      require_exactly_one<CaseToggle>(layout, "CaseToggle", out);
      require_exactly_one<Send>(layout, "Send", out);
      break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builtin layouts

Layout builtin_layout(MethodKind method) {
  // The bottom row in the reference table carries one more key than the grip
  // regions provide, so the terminal key lives on a synthetic anchor just
  // right of BottomCenter.
  const SyntheticAnchor bottom_right{"BottomCenter2", 0.10, 0.0,
                                     RegionId::BottomCenter};
  switch (method) {
    case MethodKind::SingleDigitFdi:
      return Layout(method, "single-digit-default",
                    {Backspace{}, EmitDigit{4}, EmitDigit{5}, EmitDigit{6},
                     EmitDigit{7}, EmitDigit{8}, EmitDigit{9}, EmitDigit{2},
                     EmitDigit{1}, EmitDigit{3}, EmitDigit{0}},
                    {bottom_right}, {Call{}});
    case MethodKind::DoubleDigitFdi:
      return Layout(method, "double-digit-default",
                    {Backspace{}, DigitPair{1, 2}, DigitPair{3, 4},
                     DigitPair{5, 6}, DigitPair{7, 8}, DigitPair{9, 0},
                     Unassigned{}, Enter{}, Unassigned{}, Unassigned{},
                     Call{}});
    case MethodKind::Fti:
      return Layout(method, "fti-default",
                    {Backspace{}, LetterGroup{"ABCD"}, LetterGroup{"EFGH"},
                     SpecialGroup{" .,?!"}, LetterGroup{"IJKL"},
                     NumberGroup{"1234567890"}, CaseToggle{}, Enter{},
                     LetterGroup{"QRST"}, LetterGroup{"MNOP"},
                     LetterGroup{"UVWXYZ"}},
                    {bottom_right}, {Send{}});
  }
  throw std::invalid_argument("unknown method kind");
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json action_to_json(const KeyAction& a) {
  json j;
  j["kind"] = action_kind(a);
  std::visit(Overloaded{
                 [&](const EmitDigit& e) { j["digit"] = e.digit; },
                 [&](const DigitPair& p) {
                   j["first"] = p.first;
                   j["second"] = p.second;
                 },
                 [&](const LetterGroup& g) { j["letters"] = g.letters; },
                 [&](const NumberGroup& g) { j["digits"] = g.digits; },
                 [&](const SpecialGroup& g) { j["symbols"] = g.symbols; },
                 [](const auto&) {},
             },
             a);
  return j;
}

KeyAction action_from_json(const json& j, const std::string& where) {
  auto fail = [&](const std::string& msg) -> LayoutParseError {
    return LayoutParseError(where + ": " + msg);
  };
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw fail("action must be an object with a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  auto get_int = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) {
      throw fail(std::string("action needs integer \"") + key + "\"");
    }
    return j[key].get<int>();
  };
  auto get_str = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_string()) {
      throw fail(std::string("action needs string \"") + key + "\"");
    }
    return j[key].get<std::string>();
  };
  if (kind == "emit_digit") return EmitDigit{get_int("digit")};
  if (kind == "digit_pair") return DigitPair{get_int("first"), get_int("second")};
  if (kind == "letter_group") return LetterGroup{get_str("letters")};
  if (kind == "number_group") return NumberGroup{get_str("digits")};
  if (kind == "special_group") return SpecialGroup{get_str("symbols")};
  if (kind == "backspace") return Backspace{};
  if (kind == "enter") return Enter{};
  if (kind == "call") return Call{};
  if (kind == "send") return Send{};
  if (kind == "case_toggle") return CaseToggle{};
  if (kind == "unassigned") return Unassigned{};
  throw fail("unknown action kind \"" + kind + "\"");
}

}  // namespace

LayoutValidationError::LayoutValidationError(std::vector<Violation> violations)
    : std::runtime_error("layout validation failed:\n" +
                         format_violations(violations)),
      violations_(std::move(violations)) {}

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const auto& v : violations) os << "  " << v.slot << ": " << v.rule << '\n';
  return os.str();
}

std::string serialize_layout(const Layout& layout) {
  json doc;
  doc["version"] = 1;
  doc["method"] = method_name(layout.method());
  doc["id"] = layout.id();
  json bindings = json::array();
  for (std::uint16_t i = 0; i < layout.slot_count(); ++i) {
    bindings.push_back({{"region", layout.slot_name(Slot{i})},
                        {"action", action_to_json(layout.action(Slot{i}))}});
  }
  doc["bindings"] = std::move(bindings);
  json synthetic = json::array();
  for (const auto& a : layout.synthetic_anchors()) {
    synthetic.push_back({{"name", a.name},
                         {"dx", a.dx},
                         {"dy", a.dy},
                         {"relative_to", region_name(a.relative_to)}});
  }
  doc["synthetic_anchors"] = std::move(synthetic);
  return doc.dump(2) + "\n";
}

Layout load_layout(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw LayoutParseError(std::string("layout: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw LayoutParseError("layout: document must be an object");
  if (!doc.contains("version") || doc["version"] != 1) {
    throw LayoutParseError("layout: unsupported or missing version (expected 1)");
  }
  if (!doc.contains("method") || !doc["method"].is_string()) {
    throw LayoutParseError("layout: missing \"method\"");
  }
  const auto method = parse_method(doc["method"].get<std::string>());
  if (!method) {
    throw LayoutParseError("layout: unknown method \"" +
                           doc["method"].get<std::string>() + "\"");
  }
  if (!doc.contains("id") || !doc["id"].is_string()) {
    throw LayoutParseError("layout: missing string \"id\"");
  }
  if (!doc.contains("bindings") || !doc["bindings"].is_array()) {
    throw LayoutParseError("layout: missing \"bindings\" array");
  }

  std::vector<SyntheticAnchor> synthetic;
  if (doc.contains("synthetic_anchors")) {
    const auto& arr = doc["synthetic_anchors"];
    if (!arr.is_array()) {
      throw LayoutParseError("layout: \"synthetic_anchors\" must be an array");
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& s = arr[i];
      const std::string where = "synthetic_anchors[" + std::to_string(i) + "]";
      if (!s.is_object() || !s.contains("name") || !s["name"].is_string() ||
          !s.contains("dx") || !s["dx"].is_number() || !s.contains("dy") ||
          !s["dy"].is_number() || !s.contains("relative_to") ||
          !s["relative_to"].is_string()) {
        throw LayoutParseError(
            where + ": needs name, dx, dy and relative_to fields");
      }
      auto rel = parse_region(s["relative_to"].get<std::string>());
      if (!rel) {
        throw LayoutParseError(where + ": unknown region \"" +
                               s["relative_to"].get<std::string>() + "\"");
      }
      synthetic.push_back({s["name"].get<std::string>(), s["dx"].get<double>(),
                           s["dy"].get<double>(), *rel});
    }
  }

  std::vector<Violation> violations;
  std::array<KeyAction, kRegionCount> bindings;
  bindings.fill(Unassigned{});
  std::vector<KeyAction> synthetic_bindings(synthetic.size(), Unassigned{});
  std::vector<bool> bound(kRegionCount + synthetic.size(), false);

  const auto& rows = doc["bindings"];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const std::string where = "bindings[" + std::to_string(i) + "]";
    if (!row.is_object() || !row.contains("region") ||
        !row["region"].is_string() || !row.contains("action")) {
      throw LayoutParseError(where + ": needs \"region\" and \"action\"");
    }
    const auto name = row["region"].get<std::string>();
    std::size_t slot = 0;
    if (auto r = parse_region(name)) {
      slot = static_cast<std::size_t>(*r);
    } else {
      auto it = std::find_if(synthetic.begin(), synthetic.end(),
                             [&](const auto& s) { return s.name == name; });
      if (it == synthetic.end()) {
        throw LayoutParseError(where + ": unknown region \"" + name + "\"");
      }
      slot = kRegionCount + static_cast<std::size_t>(it - synthetic.begin());
    }
    KeyAction action = action_from_json(row["action"], where + " (" + name + ")");
    if (bound[slot]) {
      violations.push_back({name, "bound more than once"});
      continue;
    }
    bound[slot] = true;
    if (slot < kRegionCount) {
      bindings[slot] = std::move(action);
    } else {
      synthetic_bindings[slot - kRegionCount] = std::move(action);
    }
  }
  for (std::size_t s = 0; s < bound.size(); ++s) {
    if (!bound[s]) {
      const std::string name =
          s < kRegionCount ? std::string(kRegionNames[s])
                           : synthetic[s - kRegionCount].name;
      violations.push_back({name, "region not bound (use \"unassigned\")"});
    }
  }

  Layout layout(*method, doc["id"].get<std::string>(), std::move(bindings),
                std::move(synthetic), std::move(synthetic_bindings));
  auto more = validate_layout(layout);
  violations.insert(violations.end(), more.begin(), more.end());
  if (!violations.empty()) throw LayoutValidationError(std::move(violations));
  return layout;
}

}  // namespace fbt
