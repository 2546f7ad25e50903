#include "fbt/session.hpp"

#include <gtest/gtest.h>

#include "fbt/phrases.hpp"

namespace fbt {
namespace {

const CalibrationProfile& profile_for(MethodKind m) {
  static const std::array<CalibrationProfile, 3> profiles = {
      derive_anchors(default_fingertips(), {}, builtin_layout(MethodKind::SingleDigitFdi)),
      derive_anchors(default_fingertips(), {}, builtin_layout(MethodKind::DoubleDigitFdi)),
      derive_anchors(default_fingertips(), {}, builtin_layout(MethodKind::Fti))};
  return profiles[static_cast<std::size_t>(m)];
}

std::vector<std::string> region_names(const SessionLog& log) {
  std::vector<std::string> out;
  for (const auto& e : log.events) out.push_back(std::get<RegionPayload>(e.payload).region);
  return out;
}

std::vector<std::int64_t> times(const SessionLog& log) {
  std::vector<std::int64_t> out;
  for (const auto& e : log.events) out.push_back(e.t_ms);
  return out;
}

const LatencyModel kOneSecond{FixedLatency{1000}, 0};

TEST(Synthesis, DoubleDigitTwo) {
  const auto m = MethodKind::DoubleDigitFdi;
  const auto log = synthesize_session("2", builtin_layout(m), profile_for(m), kOneSecond);
  EXPECT_EQ(region_names(log),
            (std::vector<std::string>{"Index", "Index", "Thumb", "BottomCenter"}));
  EXPECT_EQ(times(log), (std::vector<std::int64_t>{1000, 2000, 3000, 4000}));
  EXPECT_EQ(log.header.prescribed, "2");
  EXPECT_EQ(log.header.layout_id, "double-digit-default");
}

TEST(Synthesis, SingleDigitAndFtiPlans) {
  EXPECT_EQ(plan_presses("4", builtin_layout(MethodKind::SingleDigitFdi)),
            (std::vector<Slot>{RegionId::Index,
                               *builtin_layout(MethodKind::SingleDigitFdi)
                                    .find_slot("BottomCenter2")}));
  const Layout fti = builtin_layout(MethodKind::Fti);
  const Slot send = *fti.find_slot("BottomCenter2");
  EXPECT_EQ(plan_presses("S", fti),
            (std::vector<Slot>{RegionId::AboveThumb, RegionId::AboveThumb,
                               RegionId::AboveThumb, RegionId::Thumb, send}));
  EXPECT_EQ(plan_presses("a", fti),
            (std::vector<Slot>{RegionId::Center, RegionId::Index, RegionId::Thumb, send}));
}

TEST(Synthesis, UnproducibleSymbol) {
  try {
    plan_presses("12a", builtin_layout(MethodKind::SingleDigitFdi));
    FAIL();
  } catch (const SessionError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
  EXPECT_THROW(plan_presses("A#", builtin_layout(MethodKind::Fti)), SessionError);
}

TEST(Synthesis, UniformLatencyIsSeededAndBounded) {
  const auto m = MethodKind::Fti;
  const auto lat = parse_latency("uniform:300:900", 42);
  const auto a = synthesize_session("Hello there", builtin_layout(m), profile_for(m), lat);
  const auto b = synthesize_session("Hello there", builtin_layout(m), profile_for(m), lat);
  EXPECT_EQ(a, b);
  std::int64_t prev = 0;
  for (const auto& e : a.events) {
    EXPECT_GE(e.t_ms - prev, 300);
    EXPECT_LE(e.t_ms - prev, 900);
    prev = e.t_ms;
  }
  EXPECT_THROW(parse_latency("uniform:5", 0), SessionError);
  EXPECT_THROW(parse_latency("fixed:0", 0), SessionError);
  EXPECT_THROW(parse_latency("gaussian:3", 0), SessionError);
}

TEST(Replay, FixedLatencyGivesExactDuration) {
  const auto m = MethodKind::SingleDigitFdi;
  const Layout layout = builtin_layout(m);
  const auto log = synthesize_session("0123456789", layout, profile_for(m), kOneSecond);
  const auto r = replay_session(log, layout, profile_for(m));
  EXPECT_EQ(r.transcript, "0123456789");
  EXPECT_TRUE(r.terminated);
  // 11 presses, first at t = 1 s: 10 intervals from first to last.
  EXPECT_EQ(r.record.end_ms - r.record.start_ms, 10000);
  const auto metrics = trial_metrics(r.record);
  EXPECT_NEAR(metrics.wpm, 9.0 / 10.0 * 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(metrics.kspc, 1.0);
}

TEST(Replay, DoubleDigitKspc) {
  const auto m = MethodKind::DoubleDigitFdi;
  const Layout layout = builtin_layout(m);
  const auto log = synthesize_session("1234567890", layout, profile_for(m), kOneSecond);
  const auto r = replay_session(log, layout, profile_for(m));
  EXPECT_EQ(r.transcript, "1234567890");
  EXPECT_EQ(r.record.press_total, 25);
  EXPECT_DOUBLE_EQ(trial_metrics(r.record).kspc, 2.5);
}

TEST(Replay, TouchPayloadsRoundTrip) {
  for (auto m : kAllMethods) {
    const Layout layout = builtin_layout(m);
    const auto phrases = generate_phrases(m, 20, 8);
    for (const auto& phrase : phrases) {
      const auto log = synthesize_session(phrase, layout, profile_for(m), kOneSecond,
                                          {.touch_payloads = true});
      const auto parsed = parse_session_log(serialize_session_log(log));
      EXPECT_EQ(parsed, log);
      const auto r = replay_session(parsed, layout, profile_for(m));
      EXPECT_EQ(r.transcript, phrase);
      EXPECT_EQ(r.skipped, 0u);
    }
  }
}

TEST(Replay, UnresolvedTouchIsSkippedWithNote) {
  const auto m = MethodKind::SingleDigitFdi;
  const Layout layout = builtin_layout(m);
  SessionLog log;
  log.header.method = m;
  log.header.layout_id = layout.id();
  const Point four = profile_for(m).anchor(RegionId::Index);
  log.events = {{0, TouchPayload{four.x, four.y}},
                {500, TouchPayload{0.3, 0.75}},
                {1000, TouchPayload{four.x, four.y}}};
  const auto r = replay_session(log, layout, profile_for(m));
  EXPECT_EQ(r.transcript, "44");
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_FALSE(r.trace[1].slot);
  EXPECT_FALSE(r.trace[1].note.empty());
  EXPECT_FALSE(r.terminated);
}

TEST(Replay, UnknownRegionAndPressesAfterTermination) {
  const auto m = MethodKind::SingleDigitFdi;
  const Layout layout = builtin_layout(m);
  SessionLog log;
  log.header.method = m;
  log.header.layout_id = layout.id();
  log.events = {{0, RegionPayload{"Index"}},
                {1, RegionPayload{"Elbow"}},
                {2, RegionPayload{"BottomCenter2"}},
                {3, RegionPayload{"Middle"}}};
  const auto r = replay_session(log, layout, profile_for(m));
  EXPECT_EQ(r.transcript, "4");
  EXPECT_EQ(r.skipped, 2u);
  EXPECT_NE(r.trace[1].note.find("Elbow"), std::string::npos);
  EXPECT_NE(r.trace[3].note.find("termination"), std::string::npos);
  EXPECT_EQ(r.record.press_total, 1);
  // No prescribed text in the header: compared against itself.
  EXPECT_EQ(r.record.prescribed, "4");
}

TEST(Replay, Errors) {
  const Layout single = builtin_layout(MethodKind::SingleDigitFdi);
  SessionLog log;
  log.header.method = MethodKind::Fti;
  log.events = {{0, RegionPayload{"Index"}}};
  EXPECT_THROW(replay_session(log, single, profile_for(MethodKind::SingleDigitFdi)),
               SessionError);
  log.header.method = MethodKind::SingleDigitFdi;
  // Profile built for another layout shape.
  EXPECT_THROW(replay_session(log, single, profile_for(MethodKind::DoubleDigitFdi)),
               SessionError);
  log.events.clear();
  EXPECT_THROW(replay_session(log, single, profile_for(MethodKind::SingleDigitFdi)),
               SessionError);
}

TEST(LogFormat, HeaderVariantsRoundTrip) {
  SessionLog log;
  log.header.method = MethodKind::DoubleDigitFdi;
  log.header.layout_id = "x";
  log.events = {{0, RegionPayload{"Index"}}, {0, RegionPayload{"Thumb"}}};
  EXPECT_EQ(parse_session_log(serialize_session_log(log)), log);
  log.header.calibration = CalibrationRef{"grip.json"};
  log.header.participant_id = "P7";
  EXPECT_EQ(parse_session_log(serialize_session_log(log)), log);
  const auto text = serialize_session_log(log);
  EXPECT_EQ(text.back(), '\n');
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(LogFormat, ParseErrorsNameTheEvent) {
  const std::string header = R"({"method":"fti","layout_id":"fti-default"})";
  auto expect_error = [](const std::string& text, std::string_view needle) {
    try {
      parse_session_log(text);
      ADD_FAILURE() << "accepted: " << text;
    } catch (const SessionError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error(header + "\n{\"t\":5,\"region\":\"Index\"}\n{\"t\":4,\"region\":\"Index\"}\n",
               "event 1");
  expect_error(header + "\n{\"t\":-1,\"region\":\"Index\"}\n", "negative");
  expect_error(header + "\n{\"t\":1,\"key\":\"Index\"}\n", "unknown payload");
  expect_error(header + "\n{\"t\":1,\"region\":\"Index\"}\n{\"t\":2,\"x\":0.1,\"y\":0.2}\n",
               "mixed");
  expect_error(header + "\n{\"t\":1,\"region\":\"Index\"}\n\n{\"t\":2,\"region\":\"Index\"}\n",
               "empty line");
  expect_error(header + "\n{\"t\":1,\"region\":\n", "malformed");
  expect_error(R"({"method":"morse","layout_id":"x"})", "morse");
  expect_error(R"({"layout_id":"x"})", "method");
}

TEST(LogFormat, EqualTimestampsAccepted) {
  const auto log = parse_session_log(
      "{\"method\":\"fti\",\"layout_id\":\"l\"}\n{\"t\":3,\"region\":\"Index\"}\n"
      "{\"t\":3,\"region\":\"Thumb\"}");
  EXPECT_EQ(log.events.size(), 2u);
}

TEST(Phrases, GeneratedSetsAreDeterministicAndWellFormed) {
  EXPECT_EQ(generate_digit_phrases(50, 3), generate_digit_phrases(50, 3));
  for (const auto& p : generate_digit_phrases(200, 1)) {
    ASSERT_EQ(p.size(), kDigitPhraseLength);
    ASSERT_EQ(p.find_first_not_of("0123456789"), std::string::npos);
  }
  for (const auto& p : generate_text_phrases(200, 1)) {
    ASSERT_GE(p.size(), kTextPhraseMin);
    ASSERT_LE(p.size(), kTextPhraseMax);
    ASSERT_TRUE(p[0] >= 'A' && p[0] <= 'Z') << p;
  }
  EXPECT_EQ(parse_phrase_set("123\r\n\n456\n"), (std::vector<std::string>{"123", "456"}));
}

}  // namespace
}  // namespace fbt
