// Coordinate dictionary between slit tori and lattices, and band-direction
// prediction for periodic (pseudo-Anosov) data.
#pragma once

#include <optional>

#include "eaton/geom.hpp"
#include "eaton/lattice.hpp"
#include "eaton/sl2.hpp"

namespace eaton {

// Normalized slit-torus datum: marked point u in (-1/2,1/2)^2 \ {0} and a
// unit direction theta with u wedge theta > 0.
struct SlitTorusDatum {
  Vec2 u;
  Vec2 theta_dir;

  SlitTorusDatum(Vec2 u_, Vec2 theta);
};

enum class PredictionMethod { PeriodicTheorem, Empirical };

struct BandPrediction {
  Vec2 direction;               // sign-normalized line direction
  std::optional<double> slope;  // nullopt means vertical
  // Class coefficients in the homology basis attached to the canonical
  // positive basis of the lattice -- the same basis the tracer tiles with,
  // so (a, b) = (theta2, -theta1) pairs directly with tile displacements.
  Vec2 xi_coeffs;
  Vec2 bounded_functional;
  PredictionMethod method = PredictionMethod::PeriodicTheorem;

  // Provenance of the periodic construction.
  std::optional<Lattice2> lattice;   // Lambda_{u,theta}, basis = eta columns
  std::optional<Mat2> eta;
  std::optional<Vec2> vartheta;      // contracting eigendirection of h
  std::optional<Vec2> induced_eigenvector;  // raw theta in the eta frame
  std::optional<PSL2Z> induced_class;
};

// (Lambda, gamma+, gamma-) -> (u, theta): u = g(R,0) and theta the direction
// of g(0,1), where g maps the basis to the standard one. Requires the basis
// to satisfy the slit-containment bound for this R.
SlitTorusDatum lattice_to_torus(const PositiveBasis& B, double R);

struct TorusLatticeResult {
  Mat2 eta;          // eta u = (R,0), eta theta = (0, (u wedge theta)/R)
  Vec2 gamma_plus;   // eta (1,0)
  Vec2 gamma_minus;  // eta (0,1)
};

// Inverse dictionary. The returned columns generate Lambda_{u,theta} but are
// not necessarily a positive basis; run positive_basis on the lattice when
// the region invariants are needed.
TorusLatticeResult torus_to_lattice(const SlitTorusDatum& d, double R);

// Band direction for a fixed rational point u of a hyperbolic h whose induced
// homology action is hyperbolic too: theta = contracting direction of the
// induced class, and the band direction is eta_{u,vartheta} theta.
BandPrediction predict_band_periodic(const TorusPoint& u, const SL2Z& h, double R);

// Band direction -2 (theta1 gamma+ + theta2 gamma-) from a homology class
// given by its coefficients, sign-normalized.
Vec2 band_direction_from_class(const PositiveBasis& B, Vec2 xi_coeffs);

// Re-expresses class coefficients when the lattice basis changes: both
// column matrices must generate the same lattice (integral unimodular
// change), and the class (gamma1, gamma2) . theta is kept fixed.
Vec2 transport_class_coeffs(const Mat2& from_columns, const Mat2& to_columns,
                            Vec2 coeffs);

// Fills the class coefficients consistent with a known direction, for
// provenance-tagged reports that did not come from the periodic theorem.
BandPrediction prediction_from_direction(const PositiveBasis& B, Vec2 direction,
                                         PredictionMethod method);

// Slope of a line direction; nullopt when the direction is vertical.
std::optional<double> direction_slope(Vec2 direction);

}  // namespace eaton
