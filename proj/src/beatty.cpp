#include "chebeatty/beatty.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "chebeatty/error.hpp"
#include "chebeatty/numeric.hpp"

namespace chebeatty {
namespace {

u128 low_u128(const mpz_class& z) {
  mpz_class r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), z.get_mpz_t(), 128);
  std::uint64_t words[2] = {0, 0};
  std::size_t count = 0;
  mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, r.get_mpz_t());
  return (static_cast<u128>(words[1]) << 64) | words[0];
}

long cap_of(const RealValue& x) {
  if (const auto* irr = std::get_if<IrrationalNumber>(&x)) return irr->max_precision();
  return kDefaultMaxPrecision;
}

}  // namespace

FixedFrac fixed_frac(const RealValue& x) {
  const DyadicInterval e = enclose(x, 126).rescaled(128);
  const mpz_class w = e.hi() - e.lo();
  FixedFrac f;
  if (mpz_sizeinbase(w.get_mpz_t(), 2) > 60) return f;
  f.lo = low_u128(e.lo());
  f.width = static_cast<u128>(w.get_ui());
  f.valid = true;
  return f;
}

BeattyParams::BeattyParams(IrrationalNumber alpha, RealValue beta)
    : alpha_(std::move(alpha)), beta_(std::move(beta)), gamma_(reciprocal(alpha_)) {
  const DyadicInterval a = alpha_.enclose(64);
  if (!(a.lower() > 1)) {
    if (a.upper() <= 1) {
      raise(ErrorCode::AlphaNotGreaterThanOne, "alpha = " + alpha_.name() + " must exceed 1");
    }
    const DyadicInterval fine = alpha_.enclose(alpha_.max_precision());
    if (!(fine.lower() > 1)) {
      raise(ErrorCode::AlphaNotGreaterThanOne, "alpha = " + alpha_.name() + " must exceed 1");
    }
  }
  if (const auto* q = std::get_if<mpq_class>(&beta_)) {
    const mpq_class one_minus = 1 - *q;
    if (sgn(one_minus) == 0) {
      delta_ = mpq_class(0);
    } else {
      delta_ = affine(gamma_, one_minus, 0);
    }
  } else {
    delta_ = product(gamma_, affine(std::get<IrrationalNumber>(beta_), -1, 1));
  }
  const DyadicInterval g = gamma_.enclose(126).rescaled(128);
  const mpz_class limit = mpz_class(1) << 128;
  const FixedFrac d = fixed_frac(delta_);
  if (sgn(g.lo()) > 0 && g.hi() < limit && d.valid) {
    gamma_lo_ = low_u128(g.lo());
    gamma_hi_ = low_u128(g.hi());
    delta_frac_ = d;
    fast_ = gamma_hi_ - gamma_lo_ < (static_cast<u128>(1) << 60);
  }
}

std::string BeattyParams::describe() const {
  return "floor(" + alpha_.name() + " n + " + chebeatty::describe(beta_) + ")";
}

std::int64_t BeattyParams::term(std::int64_t n) const {
  if (n < 1) raise(ErrorCode::InvalidArgument, "beatty_term needs n >= 1");
  const long cap = std::min(alpha_.max_precision(), cap_of(beta_));
  for (long g = kStartPrecision;; g *= 2) {
    const long use = std::min(g, cap);
    const DyadicInterval y = linear_enclosure(alpha_, mpz_class(static_cast<long>(n)), beta_, use);
    if (auto f = y.certain_floor()) {
      if (!f->fits_slong_p()) raise(ErrorCode::InvalidArgument, "Beatty term exceeds 64 bits");
      return f->get_si();
    }
    if (use >= cap) {
      raise(ErrorCode::PrecisionExhausted,
            "floor(alpha n + beta) undecided at n = " + std::to_string(n));
    }
  }
}

bool BeattyParams::is_member(std::uint64_t m) const {
  if (m < 1 || m >= (std::uint64_t{1} << 62)) {
    raise(ErrorCode::InvalidArgument, "is_member needs 1 <= m < 2^62");
  }
  if (fast_) {
    const u128 f_lo = gamma_lo_ * m + delta_frac_.lo;
    const u128 w = (gamma_hi_ - gamma_lo_) * m + delta_frac_.width;
    const u128 f_hi = f_lo + w;
    if (f_hi >= f_lo) {
      if (f_lo > 0 && f_hi <= gamma_lo_) return true;
      if (f_lo > gamma_hi_) return false;
    }
  }
  return is_member_certified(m);
}

bool BeattyParams::is_member_certified(std::uint64_t m) const {
  const mpz_class mz(static_cast<unsigned long>(m));
  const long cap = std::min(gamma_.max_precision(), cap_of(delta_));
  for (long g = kStartPrecision;; g *= 2) {
    const long use = std::min(g, cap);
    const FracInterval fr = frac_linear(gamma_, mz, delta_, use);
    if (!fr.wrapped()) {
      const DyadicInterval gi = gamma_.enclose(use);
      const mpq_class lo = fr.high.lower();
      const mpq_class hi = fr.high.upper();
      if (sgn(lo) > 0 && hi <= gi.lower()) return true;
      if (lo > gi.upper()) return false;
    }
    if (use >= cap) {
      raise(ErrorCode::PrecisionExhausted,
            "membership of " + std::to_string(m) + " undecided at " + std::to_string(use) + " bits");
    }
  }
}

std::int64_t beatty_term(std::int64_t n, const BeattyParams& p) { return p.term(n); }
bool is_member(std::uint64_t m, const BeattyParams& p) { return p.is_member(m); }

double PsiDelta::coefficient_bound(std::size_t k) const {
  const double kd = static_cast<double>(k);
  return std::min(2.0 / (kPi * kd), 2.0 / (kPi * kPi * kd * kd * Delta));
}

bool PsiDelta::coefficients_within_bound() const {
  for (std::size_t k = 1; k <= K; ++k) {
    const double b = coefficient_bound(k);
    if (!(std::abs(g[k - 1]) <= b) || !(std::abs(h[k - 1]) <= b)) return false;
  }
  return true;
}

double PsiDelta::eval(double x) const {
  const double y = x - gamma / 2.0;
  CompensatedSum sum;
  sum.add(gamma);
  for (std::size_t k = 1; k <= K; ++k) {
    // g_k e(kx) + h_k e(-kx) = 2 Re(g_k e(kx)); g_k e(kx) = s_k e(k (x - gamma/2)).
    const double s = 2.0 * std::real(g[k - 1] * unit_phase(static_cast<double>(k) * gamma / 2.0));
    double turns = static_cast<double>(k) * y;
    turns -= std::floor(turns);
    sum.add(s * std::cos(2.0 * kPi * turns));
  }
  return sum.value();
}

double PsiDelta::exact(double x) const {
  const double D = Delta;
  auto cdf = [D](double t) {
    if (t <= -D) return 0.0;
    if (t <= 0.0) return (t + D) * (t + D) / (2.0 * D * D);
    if (t < D) return 1.0 - (D - t) * (D - t) / (2.0 * D * D);
    return 1.0;
  };
  const double r = x - std::floor(x + D);
  return cdf(r) - cdf(r - gamma);
}

PsiDelta build_psi_delta(double gamma, double Delta, std::size_t K) {
  if (!(gamma > 0.0 && gamma < 1.0)) raise(ErrorCode::InvalidDelta, "gamma must lie in (0,1)");
  if (!(Delta > 0.0 && Delta < 0.125)) raise(ErrorCode::InvalidDelta, "Delta must lie in (0, 1/8)");
  if (Delta > 0.5 * std::min(gamma, 1.0 - gamma)) {
    raise(ErrorCode::InvalidDelta, "Delta exceeds min(gamma, 1 - gamma)/2");
  }
  if (K < 1 || K > 10'000'000) raise(ErrorCode::InvalidArgument, "K must lie in [1, 10^7]");
  PsiDelta psi;
  psi.gamma = gamma;
  psi.Delta = Delta;
  psi.K = K;
  psi.g.resize(K);
  psi.h.resize(K);
  for (std::size_t k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    const double sinc = std::sin(kPi * kd * Delta) / (kPi * kd * Delta);
    const double mag = std::sin(kPi * kd * gamma) / (kPi * kd) * sinc * sinc;
    psi.g[k - 1] = mag * unit_phase(-kd * gamma / 2.0);
    psi.h[k - 1] = std::conj(psi.g[k - 1]);
  }
  const double Kd = static_cast<double>(K);
  psi.truncation_error = 1.0 / (kPi * kPi * kPi * Delta * Delta * Kd * Kd) + Kd * 8.0 * DBL_EPSILON;
  return psi;
}

double eval_psi_delta(const PsiDelta& psi, double x) { return psi.eval(x); }

double sharp_indicator(double gamma, double x) {
  const double r = x - std::floor(x);
  return (r > 0.0 && r <= gamma) ? 1.0 : 0.0;
}

std::vector<double> frac_points(const RealValue& gamma, const RealValue& delta, std::uint64_t M) {
  const FixedFrac g = fixed_frac(gamma);
  const FixedFrac d = fixed_frac(delta);
  if (!g.valid || !d.valid) raise(ErrorCode::PrecisionExhausted, "cannot fix gamma or delta");
  std::vector<double> pts(M);
  u128 acc = d.lo;
  for (std::uint64_t m = 1; m <= M; ++m) {
    acc += g.lo;
    pts[m - 1] = std::ldexp(static_cast<double>(static_cast<std::uint64_t>(acc >> 75)), -53);
  }
  return pts;
}

double star_discrepancy(std::vector<double> points) {
  std::sort(points.begin(), points.end());
  const double M = static_cast<double>(points.size());
  double best = 0.0;
  for (std::size_t i = 1; i <= points.size(); ++i) {
    const double x = points[i - 1];
    best = std::max(best, static_cast<double>(i) / M - x);
    best = std::max(best, x - static_cast<double>(i - 1) / M);
  }
  return best;
}

Discrepancy discrepancy(const RealValue& gamma, const RealValue& delta, std::uint64_t M) {
  if (M < 1) raise(ErrorCode::InvalidArgument, "discrepancy needs M >= 1");
  if (M > kMaxDiscrepancyPoints) {
    raise(ErrorCode::BudgetExceeded, "M = " + std::to_string(M) + " exceeds 10^7");
  }
  Discrepancy d;
  d.D_star = star_discrepancy(frac_points(gamma, delta, M));
  d.D_lower = d.D_star;
  d.D_upper = 2.0 * d.D_star;
  return d;
}

}  // namespace chebeatty
