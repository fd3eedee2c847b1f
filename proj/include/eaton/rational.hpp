// Exact rationals on 64-bit numerator/denominator with checked overflow.
// Used for the torus coordinates, where half-open boundary membership is
// discontinuous and floating point would misclassify orbits.
#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "eaton/errors.hpp"

namespace eaton {

namespace detail {

using Wide = __int128;

inline std::int64_t narrow(Wide v, const char* what) {
  if (v > Wide(INT64_MAX) || v < Wide(INT64_MIN))
    throw Overflow(std::string("integer overflow in ") + what);
  return static_cast<std::int64_t>(v);
}

inline Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Floor division for possibly-negative numerators.
inline Wide floor_div(Wide num, Wide den) {
  Wide q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

}  // namespace detail

class Rat {
 public:
  Rat() = default;
  Rat(std::int64_t num, std::int64_t den = 1) { assign(num, den); }

  static Rat from_wide(detail::Wide num, detail::Wide den) {
    if (den == 0) throw Error("Rat: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    detail::Wide g = detail::wide_gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
    Rat r;
    r.num_ = detail::narrow(num, "Rat reduce");
    r.den_ = detail::narrow(den, "Rat reduce");
    return r;
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  Rat operator+(const Rat& o) const {
    return from_wide(detail::Wide(num_) * o.den_ + detail::Wide(o.num_) * den_,
                     detail::Wide(den_) * o.den_);
  }
  Rat operator-(const Rat& o) const {
    return from_wide(detail::Wide(num_) * o.den_ - detail::Wide(o.num_) * den_,
                     detail::Wide(den_) * o.den_);
  }
  Rat operator*(const Rat& o) const {
    return from_wide(detail::Wide(num_) * o.num_, detail::Wide(den_) * o.den_);
  }
  Rat operator-() const { return from_wide(-detail::Wide(num_), den_); }

  bool operator==(const Rat& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Rat& o) const { return !(*this == o); }
  bool operator<(const Rat& o) const {
    return detail::Wide(num_) * o.den_ < detail::Wide(o.num_) * den_;
  }
  bool operator<=(const Rat& o) const { return *this < o || *this == o; }
  bool operator>(const Rat& o) const { return o < *this; }
  bool operator>=(const Rat& o) const { return o <= *this; }

  bool is_zero() const { return num_ == 0; }

  // Reduces into the half-open interval [-1/2, 1/2): r - floor(r + 1/2).
  Rat reduce_half_open() const {
    detail::Wide two_num = 2 * detail::Wide(num_);
    detail::Wide two_den = 2 * detail::Wide(den_);
    detail::Wide k = detail::floor_div(two_num + den_, two_den);
    return from_wide(detail::Wide(num_) - k * den_, den_);
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error("Rat: zero denominator");
    *this = from_wide(num, den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace eaton
