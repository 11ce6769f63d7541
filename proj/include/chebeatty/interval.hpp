#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

namespace chebeatty {

// Closed interval [lo, hi] * 2^-scale with big-integer endpoints. All
// operations round outward, so the true value is never lost.
class DyadicInterval {
 public:
  DyadicInterval() = default;
  DyadicInterval(mpz_class lo, mpz_class hi, long scale);

  static DyadicInterval point(const mpz_class& v, long scale = 0);
  // Tightest outward enclosure of a rational on the 2^-scale grid.
  static DyadicInterval from_rational(const mpq_class& q, long scale);

  const mpz_class& lo() const { return lo_; }
  const mpz_class& hi() const { return hi_; }
  long scale() const { return scale_; }

  mpq_class lower() const;
  mpq_class upper() const;
  double lower_double() const;
  double upper_double() const;
  double mid_double() const;

  bool is_point() const { return lo_ == hi_; }
  // hi - lo <= 2^-g
  bool width_at_most(long g) const;
  // floor(log2(hi - lo)) - scale, or a very negative number for points.
  long width_log2() const;

  bool contains(const mpq_class& q) const;
  bool contains(const DyadicInterval& other) const;
  bool strictly_positive() const { return sgn(lo_) > 0; }
  bool strictly_negative() const { return sgn(hi_) < 0; }

  // Re-expressed on the 2^-new_scale grid, rounding outward when coarsening.
  DyadicInterval rescaled(long new_scale) const;
  // Intersection of two enclosures of the same number. Throws if disjoint.
  DyadicInterval intersect(const DyadicInterval& other) const;

  // floor of every point in the interval when it is the same integer.
  std::optional<mpz_class> certain_floor() const;

  DyadicInterval operator-() const;
  friend DyadicInterval operator+(const DyadicInterval& a, const DyadicInterval& b);
  friend DyadicInterval operator-(const DyadicInterval& a, const DyadicInterval& b);
  friend DyadicInterval operator*(const DyadicInterval& a, const mpz_class& k);
  // Product rounded outward to the 2^-scale grid.
  static DyadicInterval multiply(const DyadicInterval& a, const DyadicInterval& b, long scale);
  // 1/x rounded outward to the 2^-scale grid. Requires 0 outside the interval.
  DyadicInterval reciprocal(long scale) const;

  std::string to_string() const;

 private:
  mpz_class lo_{0};
  mpz_class hi_{0};
  long scale_ = 0;
};

// floor(x * 2^s) / ceil(x * 2^s) helpers for rationals.
mpz_class floor_scaled(const mpq_class& q, long s);
mpz_class ceil_scaled(const mpq_class& q, long s);

// Natural log of |q| for q != 0, accurate to double precision for any size.
double log_abs(const mpq_class& q);
double log_abs(const mpz_class& z);

}  // namespace chebeatty
