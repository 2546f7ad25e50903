#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbt/layout.hpp"

namespace fbt {

// Normalized screen coordinates: origin top-left, x rightward, y downward.
struct Point {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point&) const = default;
};

enum class Finger : std::uint8_t { Index, Middle, Ring, Little, Thumb };

// Fingertip contact points of a left-hand grip, in Finger order.
using Fingertips = std::array<Point, 5>;

struct GeometryParams {
  double edge_offset = 0.05;
  double radius = 0.18;
  bool operator==(const GeometryParams&) const = default;
};

struct NamedAnchor {
  std::string name;
  Point position;
  bool operator==(const NamedAnchor&) const = default;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Anchors indexed by Slot: the eleven regions in canonical order followed by
// the synthetic anchors of the layout the profile was derived for.
class CalibrationProfile {
 public:
  CalibrationProfile(Fingertips fingertips, GeometryParams params,
                     std::vector<NamedAnchor> anchors);

  const Fingertips& fingertips() const { return fingertips_; }
  const GeometryParams& params() const { return params_; }
  double activation_radius() const { return params_.radius; }
  const std::vector<NamedAnchor>& anchors() const { return anchors_; }
  Point anchor(Slot slot) const { return anchors_.at(slot.index).position; }

  bool operator==(const CalibrationProfile&) const = default;

 private:
  Fingertips fingertips_;
  GeometryParams params_;
  std::vector<NamedAnchor> anchors_;
};

// Places the eleven region anchors around the grip, then the synthetic
// anchors relative to their regions. Throws GeometryError for fingertips
// that are out of range, non-monotone, coincident, or that produce
// coincident anchors.
CalibrationProfile derive_anchors(const Fingertips& fingertips,
                                  const GeometryParams& params,
                                  std::span<const SyntheticAnchor> synthetic = {});

// Convenience: derive for a layout's synthetic anchors.
CalibrationProfile derive_anchors(const Fingertips& fingertips,
                                  const GeometryParams& params,
                                  const Layout& layout);

// Nearest anchor within the activation radius; exact ties go to the lower
// slot index.
std::optional<Slot> resolve_region(Point p, const CalibrationProfile& profile);

// Reference grip used when no calibration is supplied.
Fingertips default_fingertips();

// Calibration file: {"fingertips":[{x,y}x5], "edge_offset":n, "radius":n}.
// A profile document additionally carries "anchors" (informational; anchors
// are always re-derived on load).
struct CalibrationInput {
  Fingertips fingertips;
  GeometryParams params;
  bool operator==(const CalibrationInput&) const = default;
};

CalibrationInput parse_calibration(std::string_view document);
std::string serialize_calibration(const CalibrationInput& input);
std::string serialize_profile(const CalibrationProfile& profile);

}  // namespace fbt
