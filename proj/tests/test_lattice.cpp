#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "eaton/lattice.hpp"
#include "eaton/random.hpp"
#include "eaton/verify.hpp"

using namespace eaton;

namespace {

// Independent oracle: shortest nonzero vector by brute force over |m|,|n| <= 10.
double brute_shortest(const Lattice2& L) {
  double best = 1e300;
  for (int m = -10; m <= 10; ++m)
    for (int n = -10; n <= 10; ++n) {
      if (m == 0 && n == 0) continue;
      best = std::min(best, L.point(m, n).norm());
    }
  return best;
}

Lattice2 example54() {
  return {{1.0, 0.0}, {(3.0 + std::sqrt(21.0)) / 6.0, 1.0}};
}

}  // namespace

TEST_CASE("Lattice2 validates unimodularity") {
  CHECK_NOTHROW(Lattice2({1, 0}, {0, 1}));
  CHECK_THROWS_AS(Lattice2({3, 2}, {-1, 1}), NotUnimodular);  // det 5
  CHECK_THROWS_AS(Lattice2({1, 0}, {2, 0}), DegenerateBasis);
  CHECK_THROWS_AS(Vec2(std::nan(""), 0.0), Error);
}

TEST_CASE("gauss_reduce recovers the standard basis of Z^2") {
  const Lattice2 red = gauss_reduce({{1, 0}, {5, 1}});
  CHECK(std::abs(red.b1.norm() - 1.0) < 1e-12);
  CHECK(std::abs(red.b2.norm() - 1.0) < 1e-12);
  // up to sign, the standard vectors
  CHECK(std::min(std::abs(red.b1.x), std::abs(red.b1.y)) < 1e-12);
  CHECK(std::min(std::abs(red.b2.x), std::abs(red.b2.y)) < 1e-12);

  const Lattice2 same = gauss_reduce({{1, 0}, {0, 1}});
  CHECK(same.b1.x == 1.0);
  CHECK(same.b2.y == 1.0);
}

TEST_CASE("gauss_reduce finds the shortest vector (brute-force oracle)") {
  const Lattice2 L{{2, 1}, {3, 2}};
  const Lattice2 red = gauss_reduce(L);
  CHECK(red.b1.norm() == doctest::Approx(brute_shortest(L)).epsilon(1e-12));
  CHECK(red.b1.norm() <= red.b2.norm());
  CHECK(red.b2.norm() <= (red.b2 + red.b1).norm() + 1e-12);
  CHECK(red.b2.norm() <= (red.b2 - red.b1).norm() + 1e-12);
}

TEST_CASE("gauss_reduce preserves the lattice") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const Lattice2 L = random_unimodular_lattice(rng);
    const Lattice2 red = gauss_reduce(L);
    // Each reduced vector must have integer coordinates in the input basis.
    const Mat2 inv = Mat2::from_columns(L.b1, L.b2).inverse();
    const Vec2 c1 = inv.apply(red.b1), c2 = inv.apply(red.b2);
    CHECK(std::abs(c1.x - std::round(c1.x)) < 1e-6);
    CHECK(std::abs(c1.y - std::round(c1.y)) < 1e-6);
    CHECK(std::abs(c2.x - std::round(c2.x)) < 1e-6);
    CHECK(std::abs(c2.y - std::round(c2.y)) < 1e-6);
    const double cd = std::round(c1.x) * std::round(c2.y) -
                      std::round(c1.y) * std::round(c2.x);
    CHECK(std::abs(std::abs(cd) - 1.0) < 1e-9);
    CHECK(red.b1.norm() == doctest::Approx(brute_shortest(L)).epsilon(1e-9));
  }
}

TEST_CASE("is_admissible") {
  CHECK(is_admissible(Lattice2{{1, 0}, {0, 1}}, 0.25));
  // hexagonal at the packing bound: equality is not disjointness
  const double c = std::sqrt(2.0 / std::sqrt(3.0));
  const Lattice2 hex{{c, 0}, {c / 2, c * std::sqrt(3.0) / 2}};
  CHECK_FALSE(is_admissible(hex, 1.0 / std::sqrt(2.0 * std::sqrt(3.0))));
  // brute-force oracle: shortest vector of the worked example exceeds 2/3
  CHECK(brute_shortest(example54()) > 2.0 / 3.0);
  CHECK(is_admissible(example54(), 1.0 / 3.0));
}

TEST_CASE("slits_disjoint") {
  const Lattice2 sq{{1, 0}, {0, 1}};
  CHECK(slits_disjoint(sq, 0.4));
  CHECK_FALSE(slits_disjoint(sq, 0.6));
  // horizontal sublattice of the worked example is (1,0)Z and 1 > 2/3
  CHECK(slits_disjoint(example54(), 1.0 / 3.0));
}

TEST_CASE("admissibility implies slit disjointness") {
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    const Lattice2 L = random_unimodular_lattice(rng);
    const double R = rng.uniform(0.02, 0.5);
    if (is_admissible(L, R)) CHECK(slits_disjoint(L, R));
  }
}

TEST_CASE("positive_basis on Z^2") {
  const PositiveBasis B = positive_basis(Lattice2{{1, 0}, {0, 1}}, 0.25);
  CHECK(B.gamma_plus.x == 1.0);
  CHECK(B.gamma_plus.y == 0.0);
  CHECK(B.gamma_minus.x == 0.0);
  CHECK(B.gamma_minus.y == 1.0);
}

TEST_CASE("positive_basis on the worked example") {
  const double R = 1.0 / 3.0;
  const PositiveBasis B = positive_basis(example54(), R);
  CHECK(B.gamma_plus.x > 0.0);
  CHECK(B.gamma_plus.y >= 0.0);
  CHECK(B.gamma_minus.x <= 0.0);
  CHECK(B.gamma_minus.y > 0.0);
  CHECK(B.gamma_plus.cross(B.gamma_minus) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(B.gamma_plus.y < 1.5);
  CHECK(B.gamma_minus.y < 1.5);
  // generates the same lattice: original basis has integer coordinates
  const Mat2 inv = Mat2::from_columns(B.gamma_plus, B.gamma_minus).inverse();
  const Lattice2 L = example54();
  for (const Vec2 v : {L.b1, L.b2}) {
    const Vec2 cc = inv.apply(v);
    CHECK(std::abs(cc.x - std::round(cc.x)) < 1e-9);
    CHECK(std::abs(cc.y - std::round(cc.y)) < 1e-9);
  }
}

TEST_CASE("positive_basis rejects overlapping slits") {
  CHECK_THROWS_AS(positive_basis(Lattice2{{1, 0}, {0, 1}}, 0.6), NotDisjoint);
}

TEST_CASE("positive_basis at the touching-slit boundary") {
  // Z^2 at R = 1/2: slits touch end to end, so slits_disjoint holds, but the
  // required bound gamma2 < 1/(2R) = 1 is unreachable (the second coordinate
  // would have to be exactly 1).
  const Lattice2 sq{{1, 0}, {0, 1}};
  CHECK(slits_disjoint(sq, 0.5));
  CHECK_THROWS_AS(positive_basis(sq, 0.5), NoConvergence);
}

TEST_CASE("positive_basis postconditions on random admissible lattices") {
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const double R = rng.uniform(0.05, 0.35);
    const Lattice2 L = random_admissible_lattice(rng, R);
    const PositiveBasis B = positive_basis(L, R);
    const double bound = 1.0 / (2.0 * R);
    CHECK(B.gamma_plus.y >= 0.0);
    CHECK(B.gamma_plus.y < bound);
    CHECK(B.gamma_minus.y > 0.0);
    CHECK(B.gamma_minus.y < bound);
  }
}

TEST_CASE("tile_index conventions") {
  const PositiveBasis B = positive_basis(Lattice2{{1, 0}, {0, 1}}, 0.25);

  auto [m0, y0] = tile_index({0, 0}, B);
  CHECK(m0 == TileIndex{0, 0});
  CHECK(y0.x == 0.0);
  CHECK(y0.y == 0.0);

  auto [m1, y1] = tile_index(B.gamma_plus + B.gamma_minus, B);
  CHECK(m1 == TileIndex{1, 1});
  CHECK(std::abs(y1.x) < 1e-12);
  CHECK(std::abs(y1.y) < 1e-12);

  // half-open boundary: coefficient 1/2 belongs to the next tile
  auto [m2, y2] = tile_index(B.gamma_plus * 0.5, B);
  CHECK(m2 == TileIndex{1, 0});
  CHECK(y2.x == -0.5);
  CHECK(y2.y == 0.0);
}

TEST_CASE("tile_index reconstruction on a skew basis") {
  const PositiveBasis B = positive_basis(example54(), 1.0 / 3.0);
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const Vec2 x{rng.uniform(-30, 30), rng.uniform(-30, 30)};
    const auto [m, y] = tile_index(x, B);
    CHECK(y.x >= -0.5);
    CHECK(y.x < 0.5);
    CHECK(y.y >= -0.5);
    CHECK(y.y < 0.5);
    const Vec2 rec =
        B.point(m.m1, m.m2) + B.gamma_plus * y.x + B.gamma_minus * y.y;
    CHECK((rec - x).norm() < 1e-9 * (1.0 + x.norm()));
  }
}

TEST_CASE("enumerate_in_box basics") {
  const Lattice2 sq{{1, 0}, {0, 1}};
  const auto center = enumerate_in_box(sq, -0.5, 0.5, -0.5, 0.5);
  REQUIRE(center.size() == 1);
  CHECK(center[0].p.norm() < 1e-12);

  CHECK(enumerate_in_box(sq, 0, 2, 0, 1).size() == 6);

  CHECK_THROWS_AS(enumerate_in_box(sq, 0, 1e6, 0, 1e6), BoxTooLarge);
  CHECK_THROWS_AS(enumerate_in_box(sq, 1, 0, 0, 1), Error);
}

TEST_CASE("enumerate_in_box equals brute force on random lattices") {
  Rng rng(13);
  for (int i = 0; i < 50; ++i) {
    const Lattice2 L = random_unimodular_lattice(rng);
    const double x0 = rng.uniform(-5, 0), y0 = rng.uniform(-5, 0);
    const double x1 = x0 + rng.uniform(0.5, 10), y1 = y0 + rng.uniform(0.5, 10);
    const auto pts = enumerate_in_box(L, x0, x1, y0, y1);

    std::set<std::pair<long long, long long>> got;
    for (const BoxPoint& bp : pts) {
      // integer pair in the reduced basis uniquely identifies the point
      got.insert({bp.m1, bp.m2});
      CHECK(bp.p.x >= x0 - 1e-9);
      CHECK(bp.p.x <= x1 + 1e-9);
      CHECK(bp.p.y >= y0 - 1e-9);
      CHECK(bp.p.y <= y1 + 1e-9);
    }
    CHECK(got.size() == pts.size());

    // brute force in the original basis over a generous window
    std::size_t brute = 0;
    for (int m = -60; m <= 60; ++m)
      for (int n = -60; n <= 60; ++n) {
        const Vec2 p = L.point(m, n);
        if (p.x >= x0 - 1e-9 && p.x <= x1 + 1e-9 && p.y >= y0 - 1e-9 &&
            p.y <= y1 + 1e-9)
          ++brute;
      }
    CHECK(brute == pts.size());
  }
}

TEST_CASE("random unimodular area statistics") {
  Rng rng(17);
  const Lattice2 L = random_unimodular_lattice(rng);
  const auto pts = enumerate_in_box(L, -5, 5, -5, 5);  // area 100
  CHECK(pts.size() >= 100 - 3 * 10);
  CHECK(pts.size() <= 100 + 3 * 10);
}
