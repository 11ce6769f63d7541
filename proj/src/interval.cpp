#include "chebeatty/interval.hpp"

#include <algorithm>
#include <cmath>

#include "chebeatty/error.hpp"

namespace chebeatty {
namespace {

// floor(z * 2^-s) for any sign of s.
mpz_class floor_shift(const mpz_class& z, long s) {
  mpz_class r;
  if (s >= 0) {
    mpz_fdiv_q_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  } else {
    mpz_mul_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
  }
  return r;
}

mpz_class ceil_shift(const mpz_class& z, long s) {
  mpz_class r;
  if (s >= 0) {
    mpz_cdiv_q_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  } else {
    mpz_mul_2exp(r.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
  }
  return r;
}

mpq_class scaled_rational(const mpz_class& z, long scale) {
  mpq_class q(z);
  if (scale >= 0) {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(scale));
  } else {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-scale));
  }
  return q;
}

double scaled_double(const mpz_class& z, long scale) {
  long e = 0;
  const double d = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::ldexp(d, static_cast<int>(e - scale));
}

}  // namespace

mpz_class floor_scaled(const mpq_class& q, long s) {
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  if (s >= 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  } else {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
  }
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

mpz_class ceil_scaled(const mpq_class& q, long s) {
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  if (s >= 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
  } else {
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-s));
  }
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return r;
}

double log_abs(const mpz_class& z) {
  if (sgn(z) == 0) raise(ErrorCode::InvalidArgument, "log of zero");
  long e = 0;
  const double d = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(std::abs(d)) + static_cast<double>(e) * std::log(2.0);
}

double log_abs(const mpq_class& q) { return log_abs(q.get_num()) - log_abs(q.get_den()); }

DyadicInterval::DyadicInterval(mpz_class lo, mpz_class hi, long scale)
    : lo_(std::move(lo)), hi_(std::move(hi)), scale_(scale) {
  if (lo_ > hi_) raise(ErrorCode::InvalidArgument, "DyadicInterval: lo > hi");
}

DyadicInterval DyadicInterval::point(const mpz_class& v, long scale) { return {v, v, scale}; }

DyadicInterval DyadicInterval::from_rational(const mpq_class& q, long scale) {
  return {floor_scaled(q, scale), ceil_scaled(q, scale), scale};
}

mpq_class DyadicInterval::lower() const { return scaled_rational(lo_, scale_); }
mpq_class DyadicInterval::upper() const { return scaled_rational(hi_, scale_); }
double DyadicInterval::lower_double() const { return scaled_double(lo_, scale_); }
double DyadicInterval::upper_double() const { return scaled_double(hi_, scale_); }

double DyadicInterval::mid_double() const {
  mpz_class sum = lo_ + hi_;
  return scaled_double(sum, scale_ + 1);
}

bool DyadicInterval::width_at_most(long g) const {
  // (hi - lo) * 2^-scale <= 2^-g  <=>  (hi - lo) <= 2^(scale - g)
  mpz_class w = hi_ - lo_;
  if (sgn(w) == 0) return true;
  const long e = scale_ - g;
  if (e < 0) return false;
  mpz_class bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return w <= bound;
}

long DyadicInterval::width_log2() const {
  mpz_class w = hi_ - lo_;
  if (sgn(w) == 0) return -(1L << 40);
  return static_cast<long>(mpz_sizeinbase(w.get_mpz_t(), 2)) - 1 - scale_;
}

bool DyadicInterval::contains(const mpq_class& q) const { return lower() <= q && q <= upper(); }

bool DyadicInterval::contains(const DyadicInterval& other) const {
  return lower() <= other.lower() && other.upper() <= upper();
}

DyadicInterval DyadicInterval::rescaled(long new_scale) const {
  if (new_scale >= scale_) {
    const auto d = static_cast<mp_bitcnt_t>(new_scale - scale_);
    mpz_class lo, hi;
    mpz_mul_2exp(lo.get_mpz_t(), lo_.get_mpz_t(), d);
    mpz_mul_2exp(hi.get_mpz_t(), hi_.get_mpz_t(), d);
    return {lo, hi, new_scale};
  }
  const long d = scale_ - new_scale;
  return {floor_shift(lo_, d), ceil_shift(hi_, d), new_scale};
}

DyadicInterval DyadicInterval::intersect(const DyadicInterval& other) const {
  const long s = std::max(scale_, other.scale_);
  const DyadicInterval a = rescaled(s);
  const DyadicInterval b = other.rescaled(s);
  mpz_class lo = a.lo_ > b.lo_ ? a.lo_ : b.lo_;
  mpz_class hi = a.hi_ < b.hi_ ? a.hi_ : b.hi_;
  if (lo > hi) raise(ErrorCode::InvalidArgument, "disjoint enclosures of one value");
  return {lo, hi, s};
}

std::optional<mpz_class> DyadicInterval::certain_floor() const {
  mpz_class a = floor_shift(lo_, scale_);
  mpz_class b = floor_shift(hi_, scale_);
  if (a != b) return std::nullopt;
  return a;
}

DyadicInterval DyadicInterval::operator-() const { return {-hi_, -lo_, scale_}; }

DyadicInterval operator+(const DyadicInterval& a, const DyadicInterval& b) {
  const long s = std::max(a.scale_, b.scale_);
  const DyadicInterval x = a.rescaled(s);
  const DyadicInterval y = b.rescaled(s);
  return {x.lo_ + y.lo_, x.hi_ + y.hi_, s};
}

DyadicInterval operator-(const DyadicInterval& a, const DyadicInterval& b) { return a + (-b); }

DyadicInterval operator*(const DyadicInterval& a, const mpz_class& k) {
  if (sgn(k) >= 0) return {a.lo_ * k, a.hi_ * k, a.scale_};
  return {a.hi_ * k, a.lo_ * k, a.scale_};
}

DyadicInterval DyadicInterval::multiply(const DyadicInterval& a, const DyadicInterval& b,
                                        long scale) {
  mpz_class p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  mpz_class lo = p[0], hi = p[0];
  for (const auto& v : p) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const DyadicInterval raw(lo, hi, a.scale_ + b.scale_);
  return raw.rescaled(scale);
}

DyadicInterval DyadicInterval::reciprocal(long scale) const {
  if (strictly_negative()) return (-*this).reciprocal(scale).operator-();
  if (!strictly_positive()) raise(ErrorCode::PrecisionExhausted, "reciprocal of interval containing 0");
  // 1/(v 2^-s) = 2^s / v, scaled by 2^scale.
  const long e = scale_ + scale;
  mpz_class num;
  mpz_class den_lo = lo_;
  mpz_class den_hi = hi_;
  if (e >= 0) {
    mpz_ui_pow_ui(num.get_mpz_t(), 2, static_cast<unsigned long>(e));
  } else {
    num = 1;
    mpz_mul_2exp(den_lo.get_mpz_t(), den_lo.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
    mpz_mul_2exp(den_hi.get_mpz_t(), den_hi.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  }
  mpz_class lo, hi;
  mpz_fdiv_q(lo.get_mpz_t(), num.get_mpz_t(), den_hi.get_mpz_t());
  mpz_cdiv_q(hi.get_mpz_t(), num.get_mpz_t(), den_lo.get_mpz_t());
  return {lo, hi, scale};
}

std::string DyadicInterval::to_string() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", lower_double(), upper_double());
  return buf;
}

}  // namespace chebeatty
