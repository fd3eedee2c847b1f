#include "eaton/predictor.hpp"

#include <cmath>

namespace eaton {

namespace {

double reduce_half_open(double v) { return v - std::floor(v + 0.5); }

}  // namespace

SlitTorusDatum::SlitTorusDatum(Vec2 u_, Vec2 theta) : u(u_) {
  const double n = theta.norm();
  if (n == 0.0) throw DegenerateDatum("SlitTorusDatum: zero direction");
  theta_dir = theta * (1.0 / n);
  if (u.norm2() == 0.0) throw DegenerateDatum("SlitTorusDatum: u = 0");
  if (std::abs(u.x) >= 0.5 || std::abs(u.y) >= 0.5)
    throw DegenerateDatum("SlitTorusDatum: u outside (-1/2,1/2)^2");
  if (u.cross(theta_dir) <= 0.0)
    throw DegenerateDatum("SlitTorusDatum: u wedge theta must be positive");
}

SlitTorusDatum lattice_to_torus(const PositiveBasis& B, double R) {
  if (!(R > 0.0)) throw Error("lattice_to_torus: R must be positive");
  const Mat2 g = Mat2::from_columns(B.gamma_plus, B.gamma_minus).inverse();
  Vec2 u = g.apply({R, 0.0});
  u = {reduce_half_open(u.x), reduce_half_open(u.y)};
  if (std::abs(u.x) >= 0.5 - kPosTol || std::abs(u.y) >= 0.5 - kPosTol)
    throw DegenerateBasis(
        "lattice_to_torus: slit not inside the fundamental domain; "
        "basis was not built for this radius");
  const Vec2 theta = g.apply({0.0, 1.0});
  return {u, theta};  // u wedge theta = R/||g(0,1)|| > 0 since det g = 1
}

TorusLatticeResult torus_to_lattice(const SlitTorusDatum& d, double R) {
  if (!(R > 0.0)) throw Error("torus_to_lattice: R must be positive");
  const double w = d.u.cross(d.theta_dir);
  if (std::abs(w) < kDetTol)
    throw DegenerateDatum("torus_to_lattice: u parallel to theta");
  const Mat2 frame = Mat2::from_columns(d.u, d.theta_dir);
  const Mat2 target = Mat2::from_columns({R, 0.0}, {0.0, w / R});
  const Mat2 eta = target * frame.inverse();
  return {eta, eta.col1(), eta.col2()};
}

std::optional<double> direction_slope(Vec2 direction) {
  if (std::abs(direction.x) < 1e-12) return std::nullopt;
  return direction.y / direction.x;
}

BandPrediction predict_band_periodic(const TorusPoint& u, const SL2Z& h, double R) {
  if (!(R > 0.0)) throw Error("predict_band_periodic: R must be positive");
  const Rat minus_half(-1, 2);
  if (u.x() == minus_half || u.y() == minus_half)
    throw ExcludedPoint("predict_band_periodic: u must lie in the open square");
  if (!is_hyperbolic(h))
    throw NotHyperbolic("predict_band_periodic: base matrix is not hyperbolic");
  if (!(torus_act(h, u) == u))
    throw NotFixed("predict_band_periodic: h does not fix u on the torus");

  const PSL2Z hstar = induced_action(h, u);
  if (!is_hyperbolic(hstar.rep()))
    throw NotHyperbolic("predict_band_periodic: induced action is not hyperbolic");

  Vec2 vartheta = contracting_eigendirection(h.to_real());
  const Vec2 u_vec = u.to_vec();
  const double wedge = u_vec.cross(vartheta);
  if (wedge == 0.0)
    throw DegenerateDatum("predict_band_periodic: u parallel to eigendirection");
  if (wedge < 0.0) vartheta = -vartheta;

  const Vec2 theta = contracting_eigendirection(hstar.rep().to_real());
  const TorusLatticeResult tl = torus_to_lattice({u_vec, vartheta}, R);

  const Lattice2 lattice(tl.gamma_plus, tl.gamma_minus);
  if (!slits_disjoint(lattice, R))
    throw NotDisjoint("predict_band_periodic: slits overlap for Lambda_{u,theta}");

  const Vec2 direction = normalize_line_direction(tl.eta.apply(theta));

  // The eigenvector lives in the homology frame of the eta columns; the tile
  // bookkeeping downstream uses the canonical positive basis, so transport
  // the class coefficients there.
  const PositiveBasis tiles = positive_basis(lattice, R);
  Vec2 theta_tiles = transport_class_coeffs(
      Mat2::from_columns(tl.gamma_plus, tl.gamma_minus),
      Mat2::from_columns(tiles.gamma_plus, tiles.gamma_minus), theta);
  theta_tiles = theta_tiles * (1.0 / theta_tiles.norm());

  BandPrediction out;
  out.direction = direction;
  out.slope = direction_slope(direction);
  out.xi_coeffs = theta_tiles;
  out.bounded_functional = {theta_tiles.y, -theta_tiles.x};
  out.method = PredictionMethod::PeriodicTheorem;
  out.lattice = lattice;
  out.eta = tl.eta;
  out.vartheta = vartheta;
  out.induced_eigenvector = theta;
  out.induced_class = hstar;
  return out;
}

Vec2 transport_class_coeffs(const Mat2& from_columns, const Mat2& to_columns,
                            Vec2 coeffs) {
  const Mat2 A = from_columns.inverse() * to_columns;
  const double ra = std::round(A.a), rb = std::round(A.b);
  const double rc = std::round(A.c), rd = std::round(A.d);
  if (std::abs(A.a - ra) > 1e-6 || std::abs(A.b - rb) > 1e-6 ||
      std::abs(A.c - rc) > 1e-6 || std::abs(A.d - rd) > 1e-6 ||
      std::abs(std::abs(ra * rd - rb * rc) - 1.0) > 1e-9)
    throw Error("transport_class_coeffs: bases generate different lattices");
  // integral inverse of the basis change, applied to the coefficients
  const double det = ra * rd - rb * rc;
  const Mat2 Ainv{rd / det, -rb / det, -rc / det, ra / det};
  return Ainv.apply(coeffs);
}

Vec2 band_direction_from_class(const PositiveBasis& B, Vec2 xi_coeffs) {
  if (xi_coeffs.x == 0.0 && xi_coeffs.y == 0.0)
    throw ZeroClass("band_direction_from_class: zero class");
  const Vec2 v =
      (B.gamma_plus * xi_coeffs.x + B.gamma_minus * xi_coeffs.y) * -2.0;
  return normalize_line_direction(v);
}

BandPrediction prediction_from_direction(const PositiveBasis& B, Vec2 direction,
                                         PredictionMethod method) {
  const Vec2 dir = normalize_line_direction(direction);
  // Invert direction = -2 (theta1 gamma+ + theta2 gamma-) up to scale.
  const Mat2 Cinv = Mat2::from_columns(B.gamma_plus, B.gamma_minus).inverse();
  Vec2 theta = Cinv.apply(dir) * -0.5;
  const double n = theta.norm();
  if (n == 0.0) throw ZeroClass("prediction_from_direction: degenerate direction");
  theta = theta * (1.0 / n);

  BandPrediction out;
  out.direction = dir;
  out.slope = direction_slope(dir);
  out.xi_coeffs = theta;
  out.bounded_functional = {theta.y, -theta.x};
  out.method = method;
  return out;
}

}  // namespace eaton
