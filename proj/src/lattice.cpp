#include "eaton/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace eaton {

namespace {

bool in_rpp(Vec2 v) { return v.x > 0.0 && v.y >= 0.0; }
bool in_rmp(Vec2 v) { return v.x <= 0.0 && v.y > 0.0; }

void check_unimodular(Vec2 b1, Vec2 b2) {
  const double d = std::abs(b1.cross(b2));
  if (d < kDetTol) throw DegenerateBasis("basis vectors are linearly dependent");
  if (std::abs(d - 1.0) > kDetTol)
    throw NotUnimodular("basis determinant " + std::to_string(b1.cross(b2)) +
                        " is not +-1");
}

}  // namespace

Lattice2::Lattice2(Vec2 b1_, Vec2 b2_) : b1(b1_), b2(b2_) {
  check_unimodular(b1, b2);
}

PositiveBasis::PositiveBasis(Vec2 gp, Vec2 gm) : gamma_plus(gp), gamma_minus(gm) {
  if (!in_rpp(gamma_plus))
    throw DegenerateBasis("gamma_plus outside {x>0, y>=0}");
  if (!in_rmp(gamma_minus))
    throw DegenerateBasis("gamma_minus outside {x<=0, y>0}");
  const double d = gamma_plus.cross(gamma_minus);
  if (std::abs(d - 1.0) > kDetTol)
    throw NotUnimodular("positive basis determinant is not +1");
}

Lattice2 gauss_reduce(const Lattice2& L) {
  Vec2 u = L.b1, v = L.b2;
  if (std::abs(u.cross(v)) < kDetTol)
    throw DegenerateBasis("gauss_reduce: degenerate basis");
  if (u.norm2() > v.norm2()) std::swap(u, v);
  for (int iter = 0; iter < 128; ++iter) {
    const double mu = std::round(u.dot(v) / u.norm2());
    v = v - u * mu;
    if (v.norm2() < u.norm2())
      std::swap(u, v);
    else
      break;
  }
  return {u, v};
}

double shortest_vector_length(const Lattice2& L) {
  return gauss_reduce(L).b1.norm();
}

bool is_admissible(const Lattice2& L, double R) {
  if (!(R > 0.0)) throw Error("is_admissible: R must be positive");
  return shortest_vector_length(L) > 2.0 * R * (1.0 + kStrictRel);
}

bool slits_disjoint(const Lattice2& L, double R) {
  if (!(R > 0.0)) throw Error("slits_disjoint: R must be positive");
  const Lattice2 red = gauss_reduce(L);
  // A violating vector is horizontal with |x| < 2R, hence has norm < 2R.
  const double w = 2.0 * R * (1.0 + kPosTol);
  const double ytol = kPosTol * (1.0 + 2.0 * R);
  bool ok = true;
  visit_coefficient_hull(red.b1, red.b2, -w, w, -ytol, ytol,
                         [&](std::int64_t k1, std::int64_t k2, Vec2 p) {
                           if (k1 == 0 && k2 == 0) return;
                           if (std::abs(p.y) > ytol) return;
                           if (std::abs(p.x) < 2.0 * R * (1.0 - kStrictRel))
                             ok = false;
                         });
  return ok;
}

namespace {

// Initial positive basis with determinant +1, or throws NoConvergence.
std::pair<Vec2, Vec2> initial_positive_pair(const Lattice2& red) {
  const Vec2 u = red.b1, v = red.b2;
  const Vec2 cands[8][2] = {{u, v},   {-u, -v}, {-v, u},  {v, -u},
                            {v, u},   {-v, -u}, {-u, v},  {u, -v}};
  for (const auto& pq : cands) {
    if (in_rpp(pq[0]) && in_rmp(pq[1]) && pq[0].cross(pq[1]) > 0.5)
      return {pq[0], pq[1]};
  }
  // Fallback: small integer combinations of the reduced basis.
  std::pair<Vec2, Vec2> best;
  double best_len = std::numeric_limits<double>::infinity();
  for (int m1 = -3; m1 <= 3; ++m1)
    for (int n1 = -3; n1 <= 3; ++n1) {
      if (m1 == 0 && n1 == 0) continue;
      const Vec2 p = red.point(m1, n1);
      if (!in_rpp(p)) continue;
      for (int m2 = -3; m2 <= 3; ++m2)
        for (int n2 = -3; n2 <= 3; ++n2) {
          const Vec2 q = red.point(m2, n2);
          if (!in_rmp(q)) continue;
          if (std::abs(m1 * n2 - n1 * m2) != 1) continue;
          if (p.cross(q) < 0.5) continue;
          const double len = p.norm() + q.norm();
          if (len < best_len) {
            best_len = len;
            best = {p, q};
          }
        }
    }
  if (!std::isfinite(best_len))
    throw NoConvergence("positive_basis: no positive seed basis found");
  return best;
}

}  // namespace

PositiveBasis positive_basis(const Lattice2& L, double R) {
  if (!(R > 0.0)) throw Error("positive_basis: R must be positive");
  if (!slits_disjoint(L, R))
    throw NotDisjoint("positive_basis: slits overlap for this radius");

  auto [a, b] = initial_positive_pair(gauss_reduce(L));
  const double bound = 1.0 / (2.0 * R);

  // Euclidean iteration of the positive-basis lemma, with block steps: when
  // a.y >= b.y the single-step rule subtracts b from a until either both
  // second coordinates drop below 1/(2R) or the comparison flips.
  for (int iter = 0; iter < 256; ++iter) {
    if (a.y < bound && b.y < bound) return {a, b};
    if (a.y >= b.y) {
      // b.y > 0 by region invariant.
      double k = std::floor(a.y / b.y);  // keeps a.y >= 0
      if (b.y < bound) {
        const double kstop = std::floor((a.y - bound) / b.y) + 1.0;
        k = std::min(k, std::max(kstop, 1.0));
      }
      if (k < 1.0) k = 1.0;
      a = a - b * k;
    } else {
      if (a.y == 0.0) {
        // b.y can no longer decrease; only the bound check above can succeed.
        throw NoConvergence("positive_basis: second coordinates stuck at bound");
      }
      double k = std::ceil(b.y / a.y) - 1.0;  // keeps b.y > 0
      if (a.y < bound) {
        const double kstop = std::floor((b.y - bound) / a.y) + 1.0;
        k = std::min(k, std::max(kstop, 1.0));
      }
      if (k < 1.0) k = 1.0;
      b = b - a * k;
    }
  }
  throw NoConvergence("positive_basis: iteration budget exhausted");
}

std::pair<TileIndex, Vec2> tile_index(Vec2 x, const PositiveBasis& B) {
  const Mat2 inv =
      Mat2::from_columns(B.gamma_plus, B.gamma_minus).inverse();
  const Vec2 c = inv.apply(x);
  const auto split = [](double ci) {
    double snapped = ci;
    const double half = std::round(ci * 2.0) / 2.0;
    if (std::abs(ci - half) <= kPosTol * (1.0 + std::abs(ci))) snapped = half;
    if (std::abs(snapped) > 9.0e15)
      throw Error("tile_index: coordinate out of integer range");
    const double m = std::floor(snapped + 0.5);
    return std::pair<std::int64_t, double>(static_cast<std::int64_t>(m),
                                           snapped - m);
  };
  const auto [m1, y1] = split(c.x);
  const auto [m2, y2] = split(c.y);
  return {TileIndex{m1, m2}, Vec2{y1, y2}};
}

std::vector<BoxPoint> enumerate_in_box(const Lattice2& L, double xmin,
                                       double xmax, double ymin, double ymax,
                                       std::size_t cap) {
  if (!(xmin < xmax) || !(ymin < ymax))
    throw Error("enumerate_in_box: empty box");
  const double area = (xmax - xmin) * (ymax - ymin);
  if (area > static_cast<double>(cap))
    throw BoxTooLarge("enumerate_in_box: expected count " +
                      std::to_string(area) + " exceeds cap");
  const Lattice2 red = gauss_reduce(L);
  std::vector<BoxPoint> out;
  const double txl = kPosTol * (1.0 + std::max(std::abs(xmin), std::abs(xmax)));
  const double tyl = kPosTol * (1.0 + std::max(std::abs(ymin), std::abs(ymax)));
  visit_coefficient_hull(red.b1, red.b2, xmin, xmax, ymin, ymax,
                         [&](std::int64_t k1, std::int64_t k2, Vec2 p) {
                           if (p.x < xmin - txl || p.x > xmax + txl) return;
                           if (p.y < ymin - tyl || p.y > ymax + tyl) return;
                           out.push_back({k1, k2, p});
                         });
  return out;
}

}  // namespace eaton
