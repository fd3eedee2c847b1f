// Planar unimodular lattices: Lagrange reduction, admissibility tests, the
// positive-basis construction and centered-parallelogram tile coordinates.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "eaton/geom.hpp"

namespace eaton {

// Unimodular planar lattice with an ordered basis. |det| must be 1 within
// kDetTol; a near-zero determinant raises DegenerateBasis, any other
// non-unit determinant raises NotUnimodular.
struct Lattice2 {
  Vec2 b1;
  Vec2 b2;

  Lattice2(Vec2 b1_, Vec2 b2_);

  double det() const { return b1.cross(b2); }
  Vec2 point(std::int64_t m, std::int64_t n) const {
    return {b1.x * m + b2.x * n, b1.y * m + b2.y * n};
  }
};

// Basis with gamma_plus in R++ = {x>0, y>=0}, gamma_minus in R-+ = {x<=0, y>0}
// and determinant +1. Any pair in those regions automatically has positive
// determinant, so only unimodularity can fail.
struct PositiveBasis {
  Vec2 gamma_plus;
  Vec2 gamma_minus;

  PositiveBasis(Vec2 gp, Vec2 gm);

  Vec2 point(std::int64_t m, std::int64_t n) const {
    return {gamma_plus.x * m + gamma_minus.x * n,
            gamma_plus.y * m + gamma_minus.y * n};
  }
  Lattice2 lattice() const { return {gamma_plus, gamma_minus}; }
};

struct TileIndex {
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;

  bool operator==(const TileIndex&) const = default;
  TileIndex operator+(const TileIndex& o) const { return {m1 + o.m1, m2 + o.m2}; }
  TileIndex operator-(const TileIndex& o) const { return {m1 - o.m1, m2 - o.m2}; }
};

// Lagrange-reduced equivalent basis: ||b1|| <= ||b2|| <= ||b1 +- b2|| and b1
// a shortest nonzero lattice vector.
Lattice2 gauss_reduce(const Lattice2& L);

// Length of a shortest nonzero lattice vector.
double shortest_vector_length(const Lattice2& L);

// True iff radius-R disks centered at lattice points are pairwise disjoint,
// i.e. the shortest nonzero vector is strictly longer than 2R.
bool is_admissible(const Lattice2& L, double R);

// True iff no two open horizontal slits of length 2R centered at distinct
// lattice points intersect: no nonzero lattice vector has a vanishing second
// coordinate and |first coordinate| < 2R.
bool slits_disjoint(const Lattice2& L, double R);

// Positive basis with both second coordinates in [0, 1/(2R)), so the slit
// [-R,R] x {0} lies in the interior of the centered parallelogram. Seeds the
// Euclidean-type iteration from the Gauss-reduced basis (eight sign/swap
// variants, then a |m|,|n| <= 3 fallback). Throws NotDisjoint when the slit
// condition fails and NoConvergence when no valid seed or bound is reachable.
PositiveBasis positive_basis(const Lattice2& L, double R);

// Decomposes x = (m1 + y1) gamma_plus + (m2 + y2) gamma_minus with
// y1, y2 in [-1/2, 1/2). Coefficients within kPosTol of a half-integer are
// snapped before the half-open split, so the tiling is an exact partition.
std::pair<TileIndex, Vec2> tile_index(Vec2 x, const PositiveBasis& B);

struct BoxPoint {
  std::int64_t m1;
  std::int64_t m2;
  Vec2 p;
};

// All lattice points in the closed box, with integer coordinates in the
// Gauss-reduced basis. Throws BoxTooLarge when the expected count (the box
// area, by unimodularity) exceeds cap.
std::vector<BoxPoint> enumerate_in_box(const Lattice2& L, double xmin,
                                       double xmax, double ymin, double ymax,
                                       std::size_t cap = 1000000);

// Visits every integer pair (k1, k2) whose lattice point could fall in the
// box spanned by the given basis; the callback filters. Allocation-free, used
// by the event search.
template <typename F>
void visit_coefficient_hull(Vec2 e1, Vec2 e2, double xmin, double xmax,
                            double ymin, double ymax, F&& fn) {
  const Mat2 inv = Mat2::from_columns(e1, e2).inverse();
  const Vec2 corners[4] = {{xmin, ymin}, {xmin, ymax}, {xmax, ymin}, {xmax, ymax}};
  double lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
  for (int i = 0; i < 4; ++i) {
    Vec2 c = inv.apply(corners[i]);
    if (i == 0) {
      lo1 = hi1 = c.x;
      lo2 = hi2 = c.y;
    } else {
      lo1 = std::min(lo1, c.x);
      hi1 = std::max(hi1, c.x);
      lo2 = std::min(lo2, c.y);
      hi2 = std::max(hi2, c.y);
    }
  }
  const double pad1 = kPosTol * (1.0 + std::max(std::abs(lo1), std::abs(hi1)));
  const double pad2 = kPosTol * (1.0 + std::max(std::abs(lo2), std::abs(hi2)));
  const auto a1 = static_cast<std::int64_t>(std::ceil(lo1 - pad1));
  const auto b1 = static_cast<std::int64_t>(std::floor(hi1 + pad1));
  const auto a2 = static_cast<std::int64_t>(std::ceil(lo2 - pad2));
  const auto b2 = static_cast<std::int64_t>(std::floor(hi2 + pad2));
  for (std::int64_t k1 = a1; k1 <= b1; ++k1) {
    const double px = e1.x * k1;
    const double py = e1.y * k1;
    for (std::int64_t k2 = a2; k2 <= b2; ++k2) {
      fn(k1, k2, Vec2{px + e2.x * k2, py + e2.y * k2});
    }
  }
}

}  // namespace eaton
