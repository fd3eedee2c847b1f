#include "eaton/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace eaton {

std::vector<std::pair<double, double>> bounded_functional_series(
    const Trajectory& t, Vec2 coeffs) {
  if (coeffs.x == 0.0 && coeffs.y == 0.0)
    throw ZeroCoefficients("bounded_functional_series: (a,b) = (0,0)");
  std::vector<std::pair<double, double>> out;
  out.reserve(t.samples.size());
  const TileIndex m0 = t.start.tile;
  for (const Sample& s : t.samples) {
    const double dm1 = static_cast<double>(s.tile.m1 - m0.m1);
    const double dm2 = static_cast<double>(s.tile.m2 - m0.m2);
    out.emplace_back(s.time, coeffs.x * dm1 + coeffs.y * dm2);
  }
  return out;
}

BandReport band_report(const Trajectory& t, Vec2 direction,
                       std::optional<Vec2> functional) {
  const double n = direction.norm();
  if (n == 0.0) throw Error("band_report: degenerate direction");
  const Vec2 u{direction.x / n, direction.y / n};

  BandReport rep;
  rep.direction_used = u;
  rep.singular_flags = t.singular_count;
  rep.along_displacement.reserve(t.samples.size());

  const Vec2 origin = t.start.pos;
  double width = 0.0;
  for (const Sample& s : t.samples) {
    const Vec2 rel = s.position - origin;
    width = std::max(width, std::abs(rel.cross(u)));
    rep.along_displacement.emplace_back(s.time, rel.dot(u));
  }
  rep.transverse_width = width;

  rep.functional = functional.value_or(Vec2{0.0, 0.0});
  if (functional) {
    double dev = 0.0;
    const TileIndex m0 = t.start.tile;
    for (const Sample& s : t.samples) {
      const double v = functional->x * static_cast<double>(s.tile.m1 - m0.m1) +
                       functional->y * static_cast<double>(s.tile.m2 - m0.m2);
      dev = std::max(dev, std::abs(v));
    }
    rep.max_functional_dev = dev;
  }
  return rep;
}

DeviationFit deviation_exponent(const Trajectory& t) {
  if (t.samples.size() < 2)
    throw InsufficientData("deviation_exponent: too few samples");
  const double t_hi = t.samples.back().time;
  const double dt = t.samples[1].time - t.samples[0].time;
  if (!(t_hi >= 1000.0 * dt))
    throw InsufficientData("deviation_exponent: needs three decades of samples");

  const double t_lo = t_hi / 1000.0;
  const int n_grid = 33;
  const TileIndex m0 = t.start.tile;

  // The exponent is a limsup growth rate and orbits are recurrent, so the
  // fitted quantity is the running sup of the displacement up to each grid
  // time (instantaneous values drop back to O(1) at recurrences and would
  // flatten the fit).
  DeviationFit fit;
  double running = 0.0;
  std::size_t si = 0;
  for (int i = 0; i < n_grid; ++i) {
    const double ts =
        t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) / (n_grid - 1));
    while (si < t.samples.size() && t.samples[si].time <= ts) {
      const Sample& s = t.samples[si];
      running = std::max(
          running, std::hypot(static_cast<double>(s.tile.m1 - m0.m1),
                              static_cast<double>(s.tile.m2 - m0.m2)));
      ++si;
    }
    if (running <= 0.0) continue;
    fit.times.push_back(ts);
    fit.displacements.push_back(running);
  }
  if (fit.times.size() < 8)
    throw InsufficientData("deviation_exponent: displacement vanishes on the grid");

  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const auto nn = static_cast<double>(fit.times.size());
  for (std::size_t i = 0; i < fit.times.size(); ++i) {
    const double x = std::log10(fit.times[i]);
    const double y = std::log10(fit.displacements[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = sxx - sx * sx / nn;
  const double cov = sxy - sx * sy / nn;
  const double vy = syy - sy * sy / nn;
  if (vx <= 0.0) throw InsufficientData("deviation_exponent: degenerate grid");
  fit.slope = cov / vx;
  fit.r_squared = vy > 0.0 ? (cov * cov) / (vx * vy) : 1.0;
  return fit;
}

namespace {

struct Interaction {
  TileIndex point;
  double offset;
};

std::vector<Interaction> interactions(const Trajectory& t,
                                      const PositiveBasis& B) {
  std::vector<Interaction> out;
  for (const Event& e : t.events) {
    switch (e.kind) {
      case EventKind::SlitHit:
      case EventKind::LensEntry:
      case EventKind::CenterTurnback: {
        const Vec2 lambda = B.point(e.lattice_point.m1, e.lattice_point.m2);
        out.push_back({e.lattice_point, std::abs(e.position.x - lambda.x)});
        break;
      }
      default:
        break;  // exits duplicate entries; singular markers are flags
    }
  }
  return out;
}

}  // namespace

double compare_models(const SceneConfig& cfg_flat, const SceneConfig& cfg_eaton,
                      Vec2 start, double t_max) {
  if (cfg_flat.model != Model::Flat || cfg_eaton.model != Model::Eaton)
    throw Error("compare_models: expected one flat and one round scene");
  if (!nearly_equal(cfg_flat.lattice.b1, cfg_eaton.lattice.b1) ||
      !nearly_equal(cfg_flat.lattice.b2, cfg_eaton.lattice.b2) ||
      !nearly_equal(cfg_flat.radius, cfg_eaton.radius))
    throw Error("compare_models: scenes differ in lattice or radius");

  const double sample_dt = std::max(t_max / 4096.0, 1e-3);
  const Trajectory tf = trace(cfg_flat, start, +1, t_max, sample_dt);
  const Trajectory te = trace(cfg_eaton, start, +1, t_max, sample_dt);

  const auto fi = interactions(tf, cfg_flat.basis);
  const auto ei = interactions(te, cfg_eaton.basis);
  // The round clock skips lens transits, so it completes at least as many
  // interactions in the same span; compare the common prefix.
  const std::size_t k = std::min(fi.size(), ei.size());
  double sup = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(fi[i].point == ei[i].point))
      throw EventMismatch("compare_models: interaction " + std::to_string(i) +
                          " visits different lattice points");
    if (std::abs(fi[i].offset - ei[i].offset) >
        1e-9 * (1.0 + std::abs(fi[i].offset)))
      throw EventMismatch("compare_models: interaction " + std::to_string(i) +
                          " offsets diverge");
    sup = std::max(sup, 2.0 * fi[i].offset);
  }
  return sup;
}

}  // namespace eaton
