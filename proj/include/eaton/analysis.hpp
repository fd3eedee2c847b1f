// Quantitative verification over traced orbits: bounded homology functional,
// band geometry, deviation-exponent fits and the flat/round comparison.
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eaton/raytrace.hpp"

namespace eaton {

struct BandReport {
  Vec2 direction_used;
  Vec2 functional;  // (a, b)
  double max_functional_dev = 0.0;
  double transverse_width = 0.0;
  std::vector<std::pair<double, double>> along_displacement;  // (time, signed)
  int singular_flags = 0;
};

// a * dm1 + b * dm2 at each sample time, tile displacement relative to the
// start tile.
std::vector<std::pair<double, double>> bounded_functional_series(
    const Trajectory& t, Vec2 coeffs);

// Transverse width = max over samples of the distance from pos - start to the
// line through the origin in the given direction; along displacement is the
// signed projection. When functional coefficients are supplied the report
// also carries sup |a dm1 + b dm2|.
BandReport band_report(const Trajectory& t, Vec2 direction,
                       std::optional<Vec2> functional = std::nullopt);

struct DeviationFit {
  std::vector<double> times;          // geometric grid
  std::vector<double> displacements;  // ||dm|| at the grid times
  double slope = 0.0;
  double r_squared = 0.0;
};

// Least-squares slope of log ||dm(t)|| against log t over a geometric grid
// spanning three decades, skipping zero displacements.
DeviationFit deviation_exponent(const Trajectory& t);

// Sup over matched interactions of the distance between corresponding flat
// and round orbit points: the two orbits coincide outside the disks, and
// inside disk k differ by the chord length 2|offset_k|. Throws EventMismatch
// when the interaction sequences visit different lattice points.
double compare_models(const SceneConfig& cfg_flat, const SceneConfig& cfg_eaton,
                      Vec2 start, double t_max);

}  // namespace eaton
