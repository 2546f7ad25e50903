#include "fbt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace fbt {

namespace {

Point clamp_unit(Point p) {
  return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)};
}

bool in_unit_square(Point p) {
  return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
}

}  // namespace

CalibrationProfile::CalibrationProfile(Fingertips fingertips,
                                       GeometryParams params,
                                       std::vector<NamedAnchor> anchors)
    : fingertips_(fingertips), params_(params), anchors_(std::move(anchors)) {
  if (!(params_.radius > 0.0)) {
    throw GeometryError("activation radius must be positive");
  }
  if (anchors_.size() < kRegionCount) {
    throw GeometryError("profile needs an anchor for every region");
  }
}

CalibrationProfile derive_anchors(const Fingertips& tips,
                                  const GeometryParams& params,
                                  std::span<const SyntheticAnchor> synthetic) {
  if (!(params.edge_offset >= 0.0)) {
    throw GeometryError("edge_offset must be non-negative");
  }
  if (!(params.radius > 0.0)) {
    throw GeometryError("activation radius must be positive");
  }
  for (const auto& p : tips) {
    if (!in_unit_square(p)) {
      throw GeometryError("fingertip outside the unit square");
    }
  }
  // index..little run top to bottom along the left edge.
  for (int i = 0; i < 3; ++i) {
    if (tips[i + 1].y < tips[i].y) {
      throw GeometryError("non-monotone fingertips: " +
                          std::string(i == 0 ? "middle above index"
                                      : i == 1 ? "ring above middle"
                                               : "little above ring"));
    }
  }
  for (int i = 0; i < 3; ++i) {
    if (tips[i + 1].y == tips[i].y) {
      throw GeometryError("coincident fingertips along y");
    }
  }

  const double off = params.edge_offset;
  const double spacing = (tips[3].y - tips[0].y) / 3.0;

  auto inward = [&](Finger f) {
    const Point t = tips[static_cast<std::size_t>(f)];
    return f == Finger::Thumb ? Point{t.x - off, t.y} : Point{t.x + off, t.y};
  };

  std::array<Point, kRegionCount> at{};
  auto set = [&](RegionId r, Point p) {
    at[static_cast<std::size_t>(r)] = clamp_unit(p);
  };
  const Point index = inward(Finger::Index);
  const Point little = inward(Finger::Little);
  const Point thumb = inward(Finger::Thumb);
  set(RegionId::Index, index);
  set(RegionId::Middle, inward(Finger::Middle));
  set(RegionId::Ring, inward(Finger::Ring));
  set(RegionId::Little, little);
  set(RegionId::AboveIndex, {index.x, index.y - spacing});
  set(RegionId::BelowLittle, {little.x, little.y + spacing});
  set(RegionId::Thumb, thumb);
  set(RegionId::AboveThumb, {thumb.x, thumb.y - spacing});
  set(RegionId::BelowThumb, {thumb.x, thumb.y + spacing});
  set(RegionId::Center, {0.5, 0.5});
  set(RegionId::BottomCenter, {0.5, 0.95});

  std::vector<NamedAnchor> anchors;
  anchors.reserve(kRegionCount + synthetic.size());
  for (auto r : kAllRegions) {
    anchors.push_back({std::string(region_name(r)),
                       at[static_cast<std::size_t>(r)]});
  }
  for (const auto& s : synthetic) {
    const Point base = at[static_cast<std::size_t>(s.relative_to)];
    anchors.push_back({s.name, clamp_unit({base.x + s.dx, base.y + s.dy})});
  }

  for (std::size_t i = 0; i < anchors.size(); ++i) {
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      if (anchors[i].position == anchors[j].position) {
        throw GeometryError("coincident anchors: " + anchors[i].name + " and " +
                            anchors[j].name);
      }
    }
  }
  return CalibrationProfile(tips, params, std::move(anchors));
}

CalibrationProfile derive_anchors(const Fingertips& fingertips,
                                  const GeometryParams& params,
                                  const Layout& layout) {
  return derive_anchors(fingertips, params, layout.synthetic_anchors());
}

std::optional<Slot> resolve_region(Point p, const CalibrationProfile& profile) {
  const auto& anchors = profile.anchors();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = anchors.size();
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const double dx = p.x - anchors[i].position.x;
    const double dy = p.y - anchors[i].position.y;
    const double d2 = dx * dx + dy * dy;
    if (d2 < best) {  // strict: earlier slot wins exact ties
      best = d2;
      best_i = i;
    }
  }
  const double r = profile.activation_radius();
  if (best_i == anchors.size() || best > r * r) return std::nullopt;
  return Slot{static_cast<std::uint16_t>(best_i)};
}

Fingertips default_fingertips() {
  return {Point{0.07, 0.20}, Point{0.07, 0.35}, Point{0.07, 0.50},
          Point{0.07, 0.65}, Point{0.93, 0.45}};
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json point_json(Point p) { return {{"x", p.x}, {"y", p.y}}; }

json calibration_json(const Fingertips& tips, const GeometryParams& params) {
  json arr = json::array();
  for (const auto& p : tips) arr.push_back(point_json(p));
  return {{"fingertips", arr},
          {"edge_offset", params.edge_offset},
          {"radius", params.radius}};
}

}  // namespace

CalibrationInput parse_calibration(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw GeometryError(std::string("calibration: malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("fingertips") ||
      !doc["fingertips"].is_array() || doc["fingertips"].size() != 5) {
    throw GeometryError("calibration: \"fingertips\" must list 5 points");
  }
  CalibrationInput in;
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& p = doc["fingertips"][i];
    if (!p.is_object() || !p.contains("x") || !p["x"].is_number() ||
        !p.contains("y") || !p["y"].is_number()) {
      throw GeometryError("calibration: fingertips[" + std::to_string(i) +
                          "] needs numeric x and y");
    }
    in.fingertips[i] = {p["x"].get<double>(), p["y"].get<double>()};
  }
  if (doc.contains("edge_offset")) {
    if (!doc["edge_offset"].is_number()) {
      throw GeometryError("calibration: edge_offset must be a number");
    }
    in.params.edge_offset = doc["edge_offset"].get<double>();
  }
  if (doc.contains("radius")) {
    if (!doc["radius"].is_number()) {
      throw GeometryError("calibration: radius must be a number");
    }
    in.params.radius = doc["radius"].get<double>();
  }
  return in;
}

std::string serialize_calibration(const CalibrationInput& input) {
  return calibration_json(input.fingertips, input.params).dump(2) + "\n";
}

std::string serialize_profile(const CalibrationProfile& profile) {
  json doc = calibration_json(profile.fingertips(), profile.params());
  json anchors = json::array();
  for (const auto& a : profile.anchors()) {
    anchors.push_back(
        {{"name", a.name}, {"x", a.position.x}, {"y", a.position.y}});
  }
  doc["anchors"] = std::move(anchors);
  return doc.dump(2) + "\n";
}

}  // namespace fbt
