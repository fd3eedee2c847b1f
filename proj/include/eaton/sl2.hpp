// Exact integer SL(2,Z)/PSL(2,Z) layer: generator words, the torus action on
// rational marked points, the induced homology action and hyperbolic
// eigendirections.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eaton/geom.hpp"
#include "eaton/rational.hpp"

namespace eaton {

// Row-major integer 2x2 matrix with determinant exactly 1. All arithmetic is
// overflow-checked.
struct SL2Z {
  std::int64_t a = 1, b = 0;
  std::int64_t c = 0, d = 1;

  SL2Z() = default;
  SL2Z(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_);

  static SL2Z identity() { return {}; }
  // Generators: h_plus = [[1,1],[0,1]], h_minus = [[1,0],[1,1]].
  static SL2Z h_plus() { return {1, 1, 0, 1}; }
  static SL2Z h_minus() { return {1, 0, 1, 1}; }

  std::int64_t trace() const;
  SL2Z inverse() const { return {d, -b, -c, a}; }

  bool operator==(const SL2Z&) const = default;

  Mat2 to_real() const {
    return {static_cast<double>(a), static_cast<double>(b),
            static_cast<double>(c), static_cast<double>(d)};
  }
};

SL2Z mul(const SL2Z& g, const SL2Z& h);
SL2Z inverse(const SL2Z& g);
SL2Z power(const SL2Z& g, std::int64_t n);

// Projective class: the representative has its first nonzero entry (in the
// order a, b, c, d) positive, so equality is a plain comparison.
struct PSL2Z {
  explicit PSL2Z(const SL2Z& g);
  const SL2Z& rep() const { return rep_; }
  bool operator==(const PSL2Z&) const = default;

 private:
  SL2Z rep_;
};

enum class Gen { HPlus, HMinus };

struct GenLetter {
  Gen gen;
  std::int64_t exponent;  // nonzero

  bool operator==(const GenLetter&) const = default;
};

// Word in the generators, normal form: adjacent letters use distinct
// generators and exponents are nonzero.
using GenWord = std::vector<GenLetter>;

struct WordDecomposition {
  GenWord word;
  int sign;  // product of letters equals sign * g
};

// Continued-fraction style decomposition by Euclidean reduction on the first
// column; ties |a| = |c| reduce c. The letters multiply back to sign * g
// exactly.
WordDecomposition decompose_word(const SL2Z& g);

SL2Z word_to_matrix(const GenWord& word);

// CLI word syntax: 'L' = h_plus (upper triangular), 'R' = h_minus (lower
// triangular), optional ^exponent, e.g. "R^3 L" or "L^-2 R".
GenWord parse_word(const std::string& text);
std::string format_word(const GenWord& word);

// Rational point of the torus [-1/2,1/2)^2 with the four 2-torsion points
// (0,0), (-1/2,-1/2), (-1/2,0), (0,-1/2) excluded.
class TorusPoint {
 public:
  TorusPoint(Rat x, Rat y);

  const Rat& x() const { return x_; }
  const Rat& y() const { return y_; }
  Vec2 to_vec() const { return {x_.to_double(), y_.to_double()}; }

  bool operator==(const TorusPoint&) const = default;

 private:
  Rat x_, y_;
};

// Image of u under the algebraic torus automorphism g, reduced into
// [-1/2,1/2)^2. Exact; throws ExcludedPoint if the image is 2-torsion (which
// cannot happen for u outside the excluded set).
TorusPoint torus_act(const SL2Z& g, const TorusPoint& u);

// Matrix of the homology action induced by g on the anti-invariant subspace
// of the double slit cover marked at u, as a PSL(2,Z) class. Evaluated letter
// by letter through decompose_word using the cocycle rule
// (g1 g2)_*(u) = (g1)_*(g2 u) (g2)_*(u); a single generator acts by itself
// when u lies in {-1/2 <= x+y < 1/2} and by its inverse otherwise.
PSL2Z induced_action(const SL2Z& g, const TorusPoint& u);

bool is_hyperbolic(const SL2Z& g);
bool is_hyperbolic(const Mat2& g);

// Unit eigenvector for the eigenvalue of modulus < 1 of a det-1 hyperbolic
// matrix, sign-normalized as a line direction.
Vec2 contracting_eigendirection(const Mat2& g);

}  // namespace eaton
