#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chebeatty/beatty.hpp"
#include "chebeatty/galois.hpp"

namespace chebeatty::expsum {

// A frequency theta, either rational or an irrational times an integer.
class Frequency {
 public:
  static Frequency rational(const mpq_class& q);
  static Frequency irrational(const IrrationalNumber& x, std::int64_t k = 1);
  static Frequency from(const RealValue& v, std::int64_t k = 1);

  bool is_rational() const { return !x_.has_value(); }
  Frequency negated() const;
  std::string describe() const;

  // {theta p} as a fraction of a turn, within 2^-40 of the true value.
  double phase(std::uint64_t p) const;

 private:
  mpq_class q_{0};
  std::uint64_t num_mod_ = 0;  // numerator reduced mod the denominator
  std::uint64_t den_ = 1;
  std::optional<IrrationalNumber> x_;
  std::int64_t k_ = 1;
  u128 frac_ = 0;  // {x k} on the 2^-128 grid
  u128 err_ = 0;   // bound on the error of frac_, in grid units
};

struct ExpSumResult {
  std::uint64_t X = 0;
  std::uint64_t q = 1;
  std::uint64_t a = 0;
  std::optional<std::size_t> chi_index;
  std::string theta;
  std::complex<double> value;
  double trivial_bound = 0.0;  // sum of log p over the summation set
  std::uint64_t terms = 0;
};

// Primes p <= X with Frobenius in the class, ascending.
std::vector<std::uint64_t> class_primes(std::uint64_t X, const galois::GaloisContext& ctx,
                                        std::size_t class_index, unsigned workers = 1);

// sum over the given class primes p = a (mod q) of log p e(theta p).
ExpSumResult g_sum(std::span<const std::uint64_t> class_primes, std::uint64_t q, std::uint64_t a,
                   const Frequency& theta);
ExpSumResult g_sum(std::uint64_t X, const galois::GaloisContext& ctx, std::size_t class_index,
                   std::uint64_t q, std::uint64_t a, const Frequency& theta, unsigned workers = 1);

// sum over the given class primes of log p e(theta p) chi(p).
ExpSumResult g_sum_twisted(std::span<const std::uint64_t> class_primes,
                           const galois::DirichletCharacter& chi, const Frequency& theta);
ExpSumResult g_sum_twisted(std::uint64_t X, const galois::GaloisContext& ctx,
                           std::size_t class_index, const galois::DirichletCharacter& chi,
                           const Frequency& theta, unsigned workers = 1);

// (1/phi(q)) sum over chi mod q of conj(chi(a)) times the twisted sums.
std::complex<double> orthogonality_combination(
    std::span<const std::uint64_t> class_primes, std::uint64_t q, std::uint64_t a,
    const Frequency& theta);

struct ErrorBudget {
  double E = 0.0;
  double bound = 0.0;  // q^(d+1) X E
  double terms[4] = {0.0, 0.0, 0.0, 0.0};
};

// E = L^2 B^(-10^-d/12) + L^2 X^(-10^-d/60) + L^2 X^(-10^-d/10) + L^(2+d^2/2) B^(-1/12),
// L = log X.
ErrorBudget error_budget(double X, double B, std::uint64_t q, unsigned d);

// 10^-d / max(125 tau, 20 d)
double eta(unsigned d, double tau);

struct DecayRow {
  std::string theta;
  std::uint64_t X = 0;
  double abs_value = 0.0;
  double over_X = 0.0;        // |G| / X
  double over_trivial = 0.0;  // |G| / sum log p
};

struct DecaySeries {
  std::string theta;
  std::vector<DecayRow> rows;
  std::optional<double> slope;  // least squares of log|G| against log X
};

struct DecayReport {
  std::string label;
  std::vector<DecaySeries> series;  // k = 1..k_max, then the rational 1/3 control
  std::string note;
};

DecayReport decay_report(const galois::GaloisContext& ctx, std::size_t class_index,
                         const IrrationalNumber& theta_base, unsigned k_max,
                         const std::vector<std::uint64_t>& X_grid, unsigned workers = 1);

}  // namespace chebeatty::expsum
