#include "fbt/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace fbt {
namespace {

Fingertips example_tips() {
  return {Point{0.07, 0.20}, Point{0.07, 0.35}, Point{0.07, 0.50},
          Point{0.07, 0.65}, Point{0.93, 0.45}};
}

void expect_point(Point actual, double x, double y) {
  EXPECT_NEAR(actual.x, x, 1e-12);
  EXPECT_NEAR(actual.y, y, 1e-12);
}

// Random grip: fingertips near the left edge with spacing >= 0.08, thumb on
// the right.
Fingertips random_tips(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> edge(0.0, 0.15);
  std::uniform_real_distribution<double> start(0.1, 0.3);
  std::uniform_real_distribution<double> gap(0.08, 0.2);
  Fingertips t{};
  double y = start(rng);
  for (int i = 0; i < 4; ++i) {
    t[i] = {edge(rng), y};
    y += gap(rng);
  }
  t[4] = {1.0 - edge(rng), std::uniform_real_distribution<double>(0.3, 0.7)(rng)};
  return t;
}

TEST(Geometry, DerivesExampleAnchors) {
  const auto p = derive_anchors(example_tips(), {0.05, 0.18});
  expect_point(p.anchor(RegionId::Index), 0.12, 0.20);
  expect_point(p.anchor(RegionId::AboveIndex), 0.12, 0.05);
  expect_point(p.anchor(RegionId::BelowLittle), 0.12, 0.80);
  expect_point(p.anchor(RegionId::Thumb), 0.88, 0.45);
  expect_point(p.anchor(RegionId::AboveThumb), 0.88, 0.30);
  expect_point(p.anchor(RegionId::BelowThumb), 0.88, 0.60);
  expect_point(p.anchor(RegionId::Center), 0.5, 0.5);
  expect_point(p.anchor(RegionId::BottomCenter), 0.5, 0.95);
}

TEST(Geometry, ZeroOffsetPutsAnchorOnFingertip) {
  const auto tips = example_tips();
  const auto p = derive_anchors(tips, {0.0, 0.18});
  EXPECT_EQ(p.anchor(RegionId::Index), tips[0]);
  EXPECT_EQ(p.anchor(RegionId::Thumb), tips[4]);
}

TEST(Geometry, SyntheticAnchorsFollowRegions) {
  const Layout l = builtin_layout(MethodKind::SingleDigitFdi);
  const auto p = derive_anchors(example_tips(), {}, l);
  ASSERT_EQ(p.anchors().size(), l.slot_count());
  EXPECT_EQ(p.anchors().back().name, "BottomCenter2");
  expect_point(p.anchors().back().position, 0.6, 0.95);
}

TEST(Geometry, AnchorsClampedToScreen) {
  Fingertips t = example_tips();
  t[0].y = 0.05;  // AboveIndex would land at y < 0
  const auto p = derive_anchors(t, {});
  EXPECT_GE(p.anchor(RegionId::AboveIndex).y, 0.0);
}

TEST(Geometry, RejectsBadGrips) {
  Fingertips t = example_tips();
  std::swap(t[1], t[2]);
  try {
    derive_anchors(t, {});
    FAIL();
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("non-monotone"), std::string::npos);
  }
  Fingertips flat = example_tips();
  flat[1].y = flat[0].y;
  EXPECT_THROW(derive_anchors(flat, {}), GeometryError);
  EXPECT_THROW(derive_anchors(example_tips(), {-0.1, 0.18}), GeometryError);
  EXPECT_THROW(derive_anchors(example_tips(), {0.05, 0.0}), GeometryError);
  Fingertips off = example_tips();
  off[4].x = 1.2;
  EXPECT_THROW(derive_anchors(off, {}), GeometryError);
}

TEST(Geometry, ResolveExactAnchorAndOutOfRange) {
  const auto p = derive_anchors(example_tips(), {});
  EXPECT_EQ(resolve_region(p.anchor(RegionId::Index), p), Slot{RegionId::Index});
  const auto tight = derive_anchors(example_tips(), {0.05, 0.01});
  EXPECT_FALSE(resolve_region({0.3, 0.3}, tight));
}

TEST(Geometry, ExactTieGoesToCanonicalOrder) {
  // Anchors on dyadic coordinates so the two distances are bit-identical.
  std::vector<NamedAnchor> anchors;
  for (auto r : kAllRegions) {
    const double i = static_cast<double>(static_cast<int>(r));
    anchors.push_back({std::string(region_name(r)), {0.75, i / 16.0}});
  }
  anchors[static_cast<std::size_t>(RegionId::Index)].position = {0.25, 0.25};
  anchors[static_cast<std::size_t>(RegionId::Middle)].position = {0.25, 0.5};
  const CalibrationProfile p(example_tips(), {0.05, 0.18}, anchors);
  EXPECT_EQ(resolve_region({0.25, 0.375}, p), Slot{RegionId::Index});
}

TEST(Geometry, EveryAnchorResolvesToItselfAcrossRandomGrips) {
  std::mt19937_64 rng(11);
  const Layout l = builtin_layout(MethodKind::Fti);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = derive_anchors(random_tips(rng), {}, l);
    for (std::uint16_t i = 0; i < p.anchors().size(); ++i) {
      EXPECT_EQ(resolve_region(p.anchor(Slot{i}), p), Slot{i});
    }
  }
}

TEST(Geometry, VoronoiStabilityUnderSmallPerturbation) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = derive_anchors(random_tips(rng), {});
    double min_gap = 1e9;
    for (std::size_t i = 0; i < p.anchors().size(); ++i) {
      for (std::size_t j = i + 1; j < p.anchors().size(); ++j) {
        const auto a = p.anchors()[i].position;
        const auto b = p.anchors()[j].position;
        min_gap = std::min(min_gap, std::hypot(a.x - b.x, a.y - b.y));
      }
    }
    const double reach = std::min(0.5 * min_gap, p.activation_radius()) * 0.999;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (std::uint16_t i = 0; i < p.anchors().size(); ++i) {
      for (int k = 0; k < 20; ++k) {
        const double th = angle(rng);
        const double r = reach * frac(rng);
        const Point a = p.anchor(Slot{i});
        const Point q{std::clamp(a.x + r * std::cos(th), 0.0, 1.0),
                      std::clamp(a.y + r * std::sin(th), 0.0, 1.0)};
        EXPECT_EQ(resolve_region(q, p), Slot{i});
      }
    }
  }
}

TEST(Geometry, CalibrationFileRoundTrip) {
  const CalibrationInput in{example_tips(), {0.04, 0.2}};
  EXPECT_EQ(parse_calibration(serialize_calibration(in)), in);
  const auto profile = derive_anchors(in.fingertips, in.params);
  EXPECT_EQ(parse_calibration(serialize_profile(profile)), in);
  EXPECT_THROW(parse_calibration(R"({"fingertips":[]})"), GeometryError);
  EXPECT_THROW(parse_calibration("nope"), GeometryError);
}

}  // namespace
}  // namespace fbt
