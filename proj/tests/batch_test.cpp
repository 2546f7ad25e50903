#include "fbt/batch.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fbt/phrases.hpp"

namespace fbt {
namespace {

TEST(Batch, ReplayParallelMatchesSerial) {
  for (auto m : kAllMethods) {
    const Layout layout = builtin_layout(m);
    const auto profile = derive_anchors(default_fingertips(), {}, layout);
    std::vector<SessionLog> logs;
    const auto phrases = generate_phrases(m, 40, 2);
    for (std::size_t i = 0; i < phrases.size(); ++i) {
      logs.push_back(synthesize_session(phrases[i], layout, profile,
                                        parse_latency("uniform:200:1500", i),
                                        {.touch_payloads = i % 2 == 0}));
    }
    logs.back().events.clear();  // one failing job
    const auto serial = batch::replay_serial(logs, layout, profile);
    const auto parallel = batch::replay_parallel(logs, layout, profile);
    ASSERT_EQ(serial.size(), logs.size());
    ASSERT_EQ(parallel.size(), logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i) {
      EXPECT_EQ(serial[i].metrics, parallel[i].metrics);
      EXPECT_EQ(serial[i].error, parallel[i].error);
      EXPECT_EQ(serial[i].replay.has_value(), parallel[i].replay.has_value());
      if (serial[i].replay) {
        EXPECT_EQ(serial[i].replay->transcript, parallel[i].replay->transcript);
        EXPECT_EQ(serial[i].replay->transcript, phrases[i]);
      }
    }
    EXPECT_FALSE(serial.back().error.empty());
  }
}

TEST(Batch, ResolveParallelMatchesSerial) {
  const auto profile = derive_anchors(default_fingertips(), {});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(5000);
  for (auto& p : pts) p = {u(rng), u(rng)};
  const auto s = batch::resolve_serial(pts, profile);
  const auto p = batch::resolve_parallel(pts, profile);
  EXPECT_EQ(s, p);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    EXPECT_EQ(s[i], resolve_region(pts[i], profile));
  }
}

TEST(Batch, RoundTripKernelsAgree) {
  const Layout layout = builtin_layout(MethodKind::Fti);
  const auto profile = derive_anchors(default_fingertips(), {}, layout);
  auto phrases = generate_text_phrases(30, 6);
  phrases.push_back("#");  // not producible
  const auto lat = parse_latency("fixed:400", 0);
  const auto s = batch::round_trip_failures_serial(phrases, layout, profile, lat, true);
  const auto p = batch::round_trip_failures_parallel(phrases, layout, profile, lat, true);
  EXPECT_EQ(s, p);
  EXPECT_EQ(s, (std::vector<std::size_t>{phrases.size() - 1}));
  EXPECT_GE(batch::max_threads(), 1);
}

}  // namespace
}  // namespace fbt
