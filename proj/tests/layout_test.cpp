#include "fbt/layout.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "json.hpp"

namespace fbt {
namespace {

bool mentions(const std::vector<Violation>& vs, std::string_view needle) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) {
    return v.rule.find(needle) != std::string::npos ||
           v.slot.find(needle) != std::string::npos;
  });
}

TEST(Layout, RegionNamesRoundTrip) {
  for (auto r : kAllRegions) {
    auto parsed = parse_region(region_name(r));
    ASSERT_TRUE(parsed);
    EXPECT_EQ(*parsed, r);
  }
  EXPECT_FALSE(parse_region("Pinky"));
  EXPECT_EQ(region_name(RegionId::AboveIndex), "AboveIndex");
  EXPECT_EQ(region_name(RegionId::BottomCenter), "BottomCenter");
}

TEST(Layout, BuiltinSingleDigitMatchesTable) {
  const Layout l = builtin_layout(MethodKind::SingleDigitFdi);
  EXPECT_EQ(l.action(RegionId::Index), KeyAction(EmitDigit{4}));
  EXPECT_EQ(l.action(RegionId::Middle), KeyAction(EmitDigit{5}));
  EXPECT_EQ(l.action(RegionId::Thumb), KeyAction(EmitDigit{2}));
  EXPECT_EQ(l.action(RegionId::AboveIndex), KeyAction(Backspace{}));
  EXPECT_EQ(l.action(RegionId::BottomCenter), KeyAction(EmitDigit{0}));
  auto call = l.find_slot("BottomCenter2");
  ASSERT_TRUE(call);
  EXPECT_EQ(l.action(*call), KeyAction(Call{}));
}

TEST(Layout, BuiltinDoubleDigitMatchesTable) {
  const Layout l = builtin_layout(MethodKind::DoubleDigitFdi);
  EXPECT_EQ(l.action(RegionId::Index), KeyAction(DigitPair{1, 2}));
  EXPECT_EQ(l.action(RegionId::Middle), KeyAction(DigitPair{3, 4}));
  EXPECT_EQ(l.action(RegionId::Thumb), KeyAction(Enter{}));
  EXPECT_EQ(l.action(RegionId::BottomCenter), KeyAction(Call{}));
  EXPECT_EQ(l.action(RegionId::BelowThumb), KeyAction(Unassigned{}));
}

TEST(Layout, BuiltinFtiMatchesTable) {
  const Layout l = builtin_layout(MethodKind::Fti);
  EXPECT_EQ(l.action(RegionId::Index), KeyAction(LetterGroup{"ABCD"}));
  EXPECT_EQ(l.action(RegionId::AboveIndex), KeyAction(Backspace{}));
  EXPECT_EQ(l.action(RegionId::Thumb), KeyAction(Enter{}));
  EXPECT_EQ(l.action(RegionId::AboveThumb), KeyAction(LetterGroup{"QRST"}));
  EXPECT_EQ(l.action(RegionId::Center), KeyAction(CaseToggle{}));
}

TEST(Layout, BuiltinsValidate) {
  for (auto m : kAllMethods) {
    EXPECT_TRUE(validate_layout(builtin_layout(m)).empty()) << method_name(m);
  }
}

TEST(Layout, FtiLetterGroupsPartitionAlphabet) {
  const Layout l = builtin_layout(MethodKind::Fti);
  std::string letters;
  for (std::uint16_t i = 0; i < l.slot_count(); ++i) {
    if (const auto* g = std::get_if<LetterGroup>(&l.action(Slot{i}))) {
      letters += g->letters;
    }
  }
  std::sort(letters.begin(), letters.end());
  EXPECT_EQ(letters, "ABCDEFGHIJKLMNOPQRSTUVWXYZ");
}

TEST(Layout, SerializeLoadIsIdentity) {
  for (auto m : kAllMethods) {
    const Layout l = builtin_layout(m);
    EXPECT_EQ(load_layout(serialize_layout(l)), l);
  }
}

TEST(Layout, RandomPermutedLayoutsRoundTrip) {
  // Shuffle which region holds which action; the invariants are
  // placement-free, so every shuffle stays valid and must survive the file.
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Layout base = builtin_layout(kAllMethods[trial % 3]);
    auto bindings = base.bindings();
    std::shuffle(bindings.begin(), bindings.end(), rng);
    std::vector<SyntheticAnchor> syn = base.synthetic_anchors();
    for (auto& s : syn) {
      s.dx = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
      s.dy = std::uniform_real_distribution<double>(-0.3, 0.3)(rng);
    }
    const Layout l(base.method(), "shuffled-" + std::to_string(trial), bindings,
                   syn, base.synthetic_bindings());
    ASSERT_TRUE(validate_layout(l).empty());
    EXPECT_EQ(load_layout(serialize_layout(l)), l);
  }
}

TEST(Layout, MissingCallIsNamed) {
  auto doc = nlohmann::json::parse(
      serialize_layout(builtin_layout(MethodKind::SingleDigitFdi)));
  for (auto& b : doc["bindings"]) {
    if (b["action"]["kind"] == "call") b["action"] = {{"kind", "unassigned"}};
  }
  try {
    load_layout(doc.dump());
    FAIL() << "expected validation error";
  } catch (const LayoutValidationError& e) {
    EXPECT_TRUE(mentions(e.violations(), "Call"));
  }
}

TEST(Layout, DuplicateLetterIsNamed) {
  auto doc = nlohmann::json::parse(serialize_layout(builtin_layout(MethodKind::Fti)));
  for (auto& b : doc["bindings"]) {
    if (b["region"] == "Index") b["action"]["letters"] = "ABCDQ";
  }
  try {
    load_layout(doc.dump());
    FAIL() << "expected validation error";
  } catch (const LayoutValidationError& e) {
    ASSERT_EQ(e.violations().size(), 1u) << e.what();
    EXPECT_TRUE(mentions(e.violations(), "'Q'"));
  }
}

TEST(Layout, DigitBoundTwiceIsOneViolation) {
  const Layout base = builtin_layout(MethodKind::SingleDigitFdi);
  auto syn = base.synthetic_anchors();
  auto syn_bind = base.synthetic_bindings();
  syn.push_back({"Extra", 0.0, -0.1, RegionId::Center});
  syn_bind.push_back(EmitDigit{7});
  const Layout l(base.method(), "dup7", base.bindings(), syn, syn_bind);
  const auto v = validate_layout(l);
  ASSERT_EQ(v.size(), 1u) << format_violations(v);
  EXPECT_EQ(v[0].slot, "Extra");
  EXPECT_NE(v[0].rule.find("digit 7"), std::string::npos);
}

TEST(Layout, DoubleDigitWithoutEnterIsOneViolation) {
  auto bindings = builtin_layout(MethodKind::DoubleDigitFdi).bindings();
  bindings[static_cast<std::size_t>(RegionId::Thumb)] = Unassigned{};
  const Layout l(MethodKind::DoubleDigitFdi, "no-enter", bindings);
  const auto v = validate_layout(l);
  ASSERT_EQ(v.size(), 1u) << format_violations(v);
  EXPECT_NE(v[0].rule.find("Enter"), std::string::npos);
}

TEST(Layout, ActionShapeRules) {
  auto bindings = builtin_layout(MethodKind::DoubleDigitFdi).bindings();
  bindings[static_cast<std::size_t>(RegionId::Center)] = LetterGroup{"AB"};
  bindings[static_cast<std::size_t>(RegionId::AboveThumb)] = DigitPair{3, 3};
  const auto v = validate_layout(Layout(MethodKind::DoubleDigitFdi, "bad", bindings));
  EXPECT_TRUE(mentions(v, "letter_group not allowed"));
  EXPECT_TRUE(mentions(v, "distinct"));
}

TEST(Layout, UnboundRegionInFileIsViolation) {
  auto doc = nlohmann::json::parse(
      serialize_layout(builtin_layout(MethodKind::DoubleDigitFdi)));
  auto& rows = doc["bindings"];
  rows.erase(std::remove_if(rows.begin(), rows.end(),
                            [](const auto& b) { return b["region"] == "Center"; }),
             rows.end());
  try {
    load_layout(doc.dump());
    FAIL();
  } catch (const LayoutValidationError& e) {
    EXPECT_TRUE(mentions(e.violations(), "Center"));
  }
}

TEST(Layout, ParseErrors) {
  EXPECT_THROW(load_layout("{not json"), LayoutParseError);
  EXPECT_THROW(load_layout(R"({"version":2,"method":"fti","id":"x","bindings":[]})"),
               LayoutParseError);
  EXPECT_THROW(load_layout(R"({"version":1,"method":"qwerty","id":"x","bindings":[]})"),
               LayoutParseError);
  try {
    load_layout(R"({"version":1,"method":"fti","id":"x","bindings":[)"
                R"({"region":"Index","action":{"kind":"letter_group","letters":"ABCD"}},)"
                R"({"region":"Wrist","action":{"kind":"enter"}}]})");
    FAIL();
  } catch (const LayoutParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bindings[1]"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("Wrist"), std::string::npos);
  }
  EXPECT_THROW(
      load_layout(R"({"version":1,"method":"fti","id":"x","bindings":[)"
                  R"({"region":"Index","action":{"kind":"teleport"}}]})"),
      LayoutParseError);
}

}  // namespace
}  // namespace fbt
