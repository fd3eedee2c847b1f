#include "eaton/sl2.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace eaton {

namespace {

using detail::Wide;
using detail::narrow;

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  return narrow(Wide(x) * Wide(y), "SL2Z multiply");
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  return narrow(Wide(x) + Wide(y), "SL2Z add");
}

// Nearest-integer division; ties pick the quotient of smaller magnitude.
std::int64_t round_div(std::int64_t x, std::int64_t y) {
  const std::int64_t q0 = x / y;
  const std::int64_t r0 = x % y;
  if (r0 == 0) return q0;
  const std::int64_t q1 = q0 + ((x < 0) == (y < 0) ? 1 : -1);
  const Wide e0 = Wide(x) - Wide(q0) * y;
  const Wide e1 = Wide(x) - Wide(q1) * y;
  const Wide a0 = e0 < 0 ? -e0 : e0;
  const Wide a1 = e1 < 0 ? -e1 : e1;
  if (a0 < a1) return q0;
  if (a1 < a0) return q1;
  return std::llabs(q0) <= std::llabs(q1) ? q0 : q1;
}

int sign_of(std::int64_t v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

}  // namespace

SL2Z::SL2Z(std::int64_t a_, std::int64_t b_, std::int64_t c_, std::int64_t d_)
    : a(a_), b(b_), c(c_), d(d_) {
  const Wide det = Wide(a) * d - Wide(b) * c;
  if (det != 1) throw Error("SL2Z: determinant must be exactly 1");
}

std::int64_t SL2Z::trace() const { return checked_add(a, d); }

SL2Z mul(const SL2Z& g, const SL2Z& h) {
  return {narrow(Wide(g.a) * h.a + Wide(g.b) * h.c, "SL2Z mul"),
          narrow(Wide(g.a) * h.b + Wide(g.b) * h.d, "SL2Z mul"),
          narrow(Wide(g.c) * h.a + Wide(g.d) * h.c, "SL2Z mul"),
          narrow(Wide(g.c) * h.b + Wide(g.d) * h.d, "SL2Z mul")};
}

SL2Z inverse(const SL2Z& g) { return g.inverse(); }

SL2Z power(const SL2Z& g, std::int64_t n) {
  SL2Z base = n < 0 ? g.inverse() : g;
  std::int64_t e = n < 0 ? -n : n;
  SL2Z acc;
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    e >>= 1;
    if (e) base = mul(base, base);
  }
  return acc;
}

PSL2Z::PSL2Z(const SL2Z& g) : rep_(g) {
  const std::int64_t entries[4] = {g.a, g.b, g.c, g.d};
  for (std::int64_t e : entries) {
    if (e == 0) continue;
    if (e < 0) rep_ = SL2Z{-g.a, -g.b, -g.c, -g.d};
    break;
  }
}

WordDecomposition decompose_word(const SL2Z& g) {
  std::int64_t a = g.a, b = g.b, c = g.c, d = g.d;
  GenWord word;
  while (c != 0) {
    if (a == 0) {
      // [[0,b],[c,d]] with bc = -1; one h_plus step makes |a| = |c| = 1.
      const std::int64_t q = -sign_of(c);
      word.push_back({Gen::HPlus, q});
      a = checked_add(a, -checked_mul(q, c));
      b = checked_add(b, -checked_mul(q, d));
      continue;
    }
    if (std::llabs(a) > std::llabs(c)) {
      std::int64_t q = round_div(a, c);
      if (a - checked_mul(q, c) == 0) q -= sign_of(q);  // keep a nonzero
      word.push_back({Gen::HPlus, q});
      a = checked_add(a, -checked_mul(q, c));
      b = checked_add(b, -checked_mul(q, d));
    } else {
      const std::int64_t q = round_div(c, a);
      word.push_back({Gen::HMinus, q});
      c = checked_add(c, -checked_mul(q, a));
      d = checked_add(d, -checked_mul(q, b));
    }
  }
  // Upper triangular with unit diagonal: a = d = s, remainder s*(h_plus)^(s*b).
  const int sign = a > 0 ? 1 : -1;
  if (b != 0) word.push_back({Gen::HPlus, sign > 0 ? b : -b});
  return {word, sign};
}

SL2Z word_to_matrix(const GenWord& word) {
  SL2Z acc;
  for (const GenLetter& l : word) {
    if (l.exponent == 0) throw Error("GenWord: zero exponent");
    // (h_plus)^e = [[1,e],[0,1]], (h_minus)^e = [[1,0],[e,1]].
    const SL2Z m = l.gen == Gen::HPlus ? SL2Z{1, l.exponent, 0, 1}
                                       : SL2Z{1, 0, l.exponent, 1};
    acc = mul(acc, m);
  }
  return acc;
}

GenWord parse_word(const std::string& text) {
  GenWord word;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    Gen gen;
    const char ch = text[i];
    if (ch == 'L' || ch == 'l')
      gen = Gen::HPlus;
    else if (ch == 'R' || ch == 'r')
      gen = Gen::HMinus;
    else
      throw Error(std::string("parse_word: unexpected character '") + ch + "'");
    ++i;
    std::int64_t exponent = 1;
    skip_ws();
    if (i < text.size() && text[i] == '^') {
      ++i;
      skip_ws();
      std::size_t start = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == start) throw Error("parse_word: missing exponent after '^'");
      exponent = std::stoll(text.substr(start, i - start));
      if (exponent == 0) throw Error("parse_word: zero exponent");
    }
    if (!word.empty() && word.back().gen == gen) {
      word.back().exponent = checked_add(word.back().exponent, exponent);
      if (word.back().exponent == 0) word.pop_back();
    } else {
      word.push_back({gen, exponent});
    }
    skip_ws();
  }
  return word;
}

std::string format_word(const GenWord& word) {
  std::string out;
  for (const GenLetter& l : word) {
    if (!out.empty()) out += ' ';
    out += l.gen == Gen::HPlus ? 'L' : 'R';
    if (l.exponent != 1) out += "^" + std::to_string(l.exponent);
  }
  return out;
}

namespace {

const Rat kHalf(1, 2);
const Rat kMinusHalf(-1, 2);

bool excluded(const Rat& x, const Rat& y) {
  const bool x0 = x.is_zero(), y0 = y.is_zero();
  const bool xh = x == kMinusHalf, yh = y == kMinusHalf;
  return (x0 && y0) || (xh && yh) || (xh && y0) || (x0 && yh);
}

}  // namespace

TorusPoint::TorusPoint(Rat x, Rat y) : x_(x), y_(y) {
  if (x_ < kMinusHalf || x_ >= kHalf || y_ < kMinusHalf || y_ >= kHalf)
    throw Error("TorusPoint: coordinates outside [-1/2, 1/2)");
  if (excluded(x_, y_))
    throw ExcludedPoint("TorusPoint: 2-torsion point " + x_.str() + "," + y_.str());
}

TorusPoint torus_act(const SL2Z& g, const TorusPoint& u) {
  const Rat x = (Rat(g.a) * u.x() + Rat(g.b) * u.y()).reduce_half_open();
  const Rat y = (Rat(g.c) * u.x() + Rat(g.d) * u.y()).reduce_half_open();
  return {x, y};  // constructor raises ExcludedPoint on 2-torsion images
}

namespace {

// Single-generator induced action: h if u is in S = {-1/2 <= x+y < 1/2},
// its inverse otherwise.
SL2Z generator_action(Gen gen, const TorusPoint& u) {
  const Rat s = u.x() + u.y();
  const bool in_S = kMinusHalf <= s && s < kHalf;
  const SL2Z h = gen == Gen::HPlus ? SL2Z::h_plus() : SL2Z::h_minus();
  return in_S ? h : h.inverse();
}

// On the half-integer lines x = -1/2 or y = -1/2 the representatives of u and
// -u both sit on the seam of the square and the centered-slit convention
// degenerates: no pointwise extension of the generator rule keeps word
// evaluation well defined there (the PSL(2,Z) relator words fail exactly on
// these lines and nowhere else). Evaluation refuses such source points.
bool on_seam(const TorusPoint& u) {
  return u.x() == kMinusHalf || u.y() == kMinusHalf;
}

void require_off_seam(const TorusPoint& u) {
  if (on_seam(u))
    throw ExcludedPoint(
        "induced_action: intermediate point (" + u.x().str() + "," +
        u.y().str() + ") lies on a half-integer line where the slit "
        "convention degenerates");
}

}  // namespace

PSL2Z induced_action(const SL2Z& g, const TorusPoint& u0) {
  const WordDecomposition dec = decompose_word(g);
  {
    // evaluation walks the word one generator application at a time
    std::int64_t steps = 0;
    for (const GenLetter& l : dec.word)
      steps = detail::narrow(detail::Wide(steps) + std::llabs(l.exponent),
                             "induced_action steps");
    if (steps > 2000000)
      throw Error("induced_action: word too long to evaluate (" +
                  std::to_string(steps) + " generator steps)");
  }
  TorusPoint u = u0;
  SL2Z acc;
  // Rightmost letter acts first: (g1 g2)_*(u) = (g1)_*(g2 u) (g2)_*(u).
  for (auto it = dec.word.rbegin(); it != dec.word.rend(); ++it) {
    const SL2Z h = it->gen == Gen::HPlus ? SL2Z::h_plus() : SL2Z::h_minus();
    const std::int64_t steps = std::llabs(it->exponent);
    const bool fwd = it->exponent > 0;
    for (std::int64_t k = 0; k < steps; ++k) {
      if (fwd) {
        require_off_seam(u);
        acc = mul(generator_action(it->gen, u), acc);
        u = torus_act(h, u);
      } else {
        // (h)^{-1}_*(u) = [h_*(h^{-1} u)]^{-1}
        const TorusPoint v = torus_act(h.inverse(), u);
        require_off_seam(v);
        acc = mul(generator_action(it->gen, v).inverse(), acc);
        u = v;
      }
    }
  }
  return PSL2Z(acc);  // the +-g ambiguity dies in PSL
}

bool is_hyperbolic(const SL2Z& g) { return std::llabs(g.trace()) > 2; }

bool is_hyperbolic(const Mat2& g) { return std::abs(g.trace()) > 2.0; }

Vec2 contracting_eigendirection(const Mat2& g) {
  if (std::abs(g.det() - 1.0) > 1e-9)
    throw Error("contracting_eigendirection: determinant must be 1");
  if (!is_hyperbolic(g))
    throw NotHyperbolic("contracting_eigendirection: |trace| <= 2");
  // lambda_small = 2 / (tr + sign(tr) sqrt(tr^2 - 4)), evaluated in extended
  // precision so the eigen-residual stays near machine epsilon.
  const long double tr = static_cast<long double>(g.a) + g.d;
  const long double disc = sqrtl(tr * tr - 4.0L);
  const long double lam = 2.0L / (tr + (tr > 0 ? disc : -disc));
  // (g - lambda) has rank 1; use the better-conditioned row.
  const long double v1x = g.b, v1y = lam - g.a;
  const long double v2x = lam - g.d, v2y = g.c;
  long double vx, vy;
  if (v1x * v1x + v1y * v1y >= v2x * v2x + v2y * v2y) {
    vx = v1x;
    vy = v1y;
  } else {
    vx = v2x;
    vy = v2y;
  }
  const long double n = sqrtl(vx * vx + vy * vy);
  if (n == 0.0L) throw NotHyperbolic("contracting_eigendirection: zero eigenvector");
  vx /= n;
  vy /= n;
  if (vy < 0.0L || (vy == 0.0L && vx < 0.0L)) {
    vx = -vx;
    vy = -vy;
  }
  return {static_cast<double>(vx), static_cast<double>(vy)};
}

}  // namespace eaton
