#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "chebeatty/irrational.hpp"

namespace chebeatty {

using u128 = unsigned __int128;

// Fractional part of an irrational on the 2^-128 grid: the true value lies in
// [lo, lo + width] * 2^-128, read modulo 1.
struct FixedFrac {
  u128 lo = 0;
  u128 width = 0;
  bool valid = false;
};

FixedFrac fixed_frac(const RealValue& x);

// The Beatty sequence floor(alpha n + beta) with alpha > 1.
class BeattyParams {
 public:
  BeattyParams(IrrationalNumber alpha, RealValue beta);

  const IrrationalNumber& alpha() const { return alpha_; }
  const RealValue& beta() const { return beta_; }
  // gamma = 1/alpha, delta = gamma (1 - beta)
  const IrrationalNumber& gamma() const { return gamma_; }
  const RealValue& delta() const { return delta_; }
  std::string describe() const;

  // floor(alpha n + beta), n >= 1.
  std::int64_t term(std::int64_t n) const;

  // m is a term iff 0 < {gamma m + delta} <= gamma. Requires 1 <= m < 2^62.
  bool is_member(std::uint64_t m) const;

  // Slow path of is_member: interval refinement up to the precision cap.
  bool is_member_certified(std::uint64_t m) const;

 private:
  IrrationalNumber alpha_;
  RealValue beta_;
  IrrationalNumber gamma_;
  RealValue delta_;
  u128 gamma_lo_ = 0;
  u128 gamma_hi_ = 0;
  FixedFrac delta_frac_;
  bool fast_ = false;
};

std::int64_t beatty_term(std::int64_t n, const BeattyParams& p);
bool is_member(std::uint64_t m, const BeattyParams& p);

// The smoothed indicator of (0, gamma]: the indicator convolved twice with
// a centred box of width Delta. Its Fourier series is
//   gamma + sum_k g_k e(kx) + h_k e(-kx),
//   g_k = e(-k gamma/2) sin(pi k gamma)/(pi k) (sin(pi k Delta)/(pi k Delta))^2,
//   h_k = conj(g_k).
// It equals 1 on [Delta, gamma - Delta] and 0 outside (-Delta, gamma + Delta).
struct PsiDelta {
  double gamma = 0.0;
  double Delta = 0.0;
  std::size_t K = 0;
  std::vector<std::complex<double>> g;  // g[k-1] = g_k
  std::vector<std::complex<double>> h;
  // Bound on |truncated series - psi_Delta| including rounding.
  double truncation_error = 0.0;

  // min(2/(pi k), 2/(pi^2 k^2 Delta))
  double coefficient_bound(std::size_t k) const;
  bool coefficients_within_bound() const;
  double eval(double x) const;
  // The smoothed function itself, computed piecewise in closed form.
  double exact(double x) const;
};

PsiDelta build_psi_delta(double gamma, double Delta, std::size_t K);
double eval_psi_delta(const PsiDelta& psi, double x);
// 1 on (0, gamma], 0 elsewhere, periodic.
double sharp_indicator(double gamma, double x);

struct Discrepancy {
  double D_star = 0.0;
  double D_lower = 0.0;
  double D_upper = 0.0;
};

inline constexpr std::uint64_t kMaxDiscrepancyPoints = 10'000'000;

// {gamma m + delta} for m = 1..M, truncated to 53 bits.
std::vector<double> frac_points(const RealValue& gamma, const RealValue& delta, std::uint64_t M);

// max_i max(i/M - x_(i), x_(i) - (i-1)/M) over the sorted sample.
double star_discrepancy(std::vector<double> points);

Discrepancy discrepancy(const RealValue& gamma, const RealValue& delta, std::uint64_t M);

}  // namespace chebeatty
