// Minimal SVG emission for traced scenes: lattice slits or circles, the orbit
// polyline and optional band edges at a measured width.
#pragma once

#include <optional>
#include <ostream>

#include "eaton/raytrace.hpp"

namespace eaton {

struct BandOverlay {
  Vec2 direction;  // band direction (line)
  double width;    // half-strip width measured from the start point
};

void render_scene_svg(std::ostream& os, const Trajectory& t,
                      const std::optional<BandOverlay>& band);

}  // namespace eaton
