#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chebeatty/interval.hpp"

namespace chebeatty {

inline constexpr long kDefaultMaxPrecision = 4096;
inline constexpr long kStartPrecision = 128;

// A real number that can be enclosed to any accuracy up to a precision cap.
// Values are immutable; copies share one refinement cache.
class IrrationalNumber {
 public:
  enum class Kind { Pi, E, Surd, Digits, Derived };

  // (a + b sqrt(D)) / c
  struct Surd {
    mpz_class a, b, c, D;
  };

  // Computes an enclosure of width <= 2^-target. Must be deterministic.
  using Evaluator = std::function<DyadicInterval(long target)>;

  static IrrationalNumber pi(long max_precision = kDefaultMaxPrecision);
  static IrrationalNumber e(long max_precision = kDefaultMaxPrecision);
  // Throws InvalidSurd unless D > 0 is not a square, c != 0 and b != 0.
  static IrrationalNumber surd(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                               const mpz_class& D, long max_precision = kDefaultMaxPrecision);
  static IrrationalNumber sqrt(const mpz_class& D, long max_precision = kDefaultMaxPrecision);
  static IrrationalNumber golden_ratio(long max_precision = kDefaultMaxPrecision);
  // Text of the form "3.14159...": optional sign, integer part, '.', digits.
  static IrrationalNumber from_digits(const std::string& text, const std::string& name,
                                      long max_precision = kDefaultMaxPrecision);
  static IrrationalNumber from_digit_file(const std::string& path,
                                          long max_precision = kDefaultMaxPrecision);
  static IrrationalNumber derived(std::string name, Evaluator eval,
                                  long max_precision = kDefaultMaxPrecision);

  // "pi", "e", "phi", "sqrtD", "surd:a,b,c,D", "file:PATH".
  static IrrationalNumber parse(const std::string& spec, long max_precision = kDefaultMaxPrecision);

  Kind kind() const;
  const std::string& name() const;
  long max_precision() const;
  const Surd* as_surd() const;

  // Enclosure of width <= 2^-g. Results for increasing g are nested.
  DyadicInterval enclose(long g) const;
  double approx() const;

 private:
  struct State;
  explicit IrrationalNumber(std::shared_ptr<State> state);
  DyadicInterval enclose_raw(long g) const;
  friend IrrationalNumber reciprocal(const IrrationalNumber& x);
  friend IrrationalNumber affine(const IrrationalNumber& x, const mpq_class& mul,
                                 const mpq_class& add);
  friend IrrationalNumber product(const IrrationalNumber& x, const IrrationalNumber& y);

  std::shared_ptr<State> state_;
};

// 1/x, x*mul + add and x*y. Surd inputs stay exact surds where possible.
IrrationalNumber reciprocal(const IrrationalNumber& x);
IrrationalNumber affine(const IrrationalNumber& x, const mpq_class& mul, const mpq_class& add);
IrrationalNumber product(const IrrationalNumber& x, const IrrationalNumber& y);

using RealValue = std::variant<mpq_class, IrrationalNumber>;

DyadicInterval enclose(const IrrationalNumber& x, long g);
DyadicInterval enclose(const RealValue& x, long g);
double approx(const RealValue& x);
std::string describe(const RealValue& x);
// Accepts a rational "p/q", a decimal "0.25", or any IrrationalNumber spec.
RealValue parse_real(const std::string& spec, long max_precision = kDefaultMaxPrecision);

// Enclosure of x*m + shift of width <= 2^-g.
DyadicInterval linear_enclosure(const IrrationalNumber& x, const mpz_class& m,
                                const RealValue& shift, long g);

// {x*m + shift} enclosed with width <= 2^-g. When the enclosure of x*m + shift
// contains an integer, the result wraps: `high` is [f, 1] and `low` is [0, f'].
struct FracInterval {
  DyadicInterval high;
  std::optional<DyadicInterval> low;
  bool wrapped() const { return low.has_value(); }
};

FracInterval frac_linear(const IrrationalNumber& x, const mpz_class& m, const RealValue& shift,
                         long g);

struct RationalApprox {
  mpz_class r;
  mpz_class s;
  mpq_class gap;  // certified: |x - r/s| <= gap < 1/s^2
};

// First n continued-fraction convergents with certified quotients.
std::vector<RationalApprox> convergents(const IrrationalNumber& x, std::size_t n);

// Every convergent with denominator <= Q, plus the first one past Q.
std::vector<RationalApprox> convergents_upto(const IrrationalNumber& x, const mpz_class& Q);

// The convergent with the largest s in (B, X/B), or nullopt for an empty
// window. B <= 1 is an InvalidArgument.
std::optional<RationalApprox> good_approx(const IrrationalNumber& x, double B, double X);

struct TypeEstimate {
  double tau_hat = 1.0;    // max(1, slope)
  double slope = 0.0;      // fit of log(1/||q x||) against log q over the tail
  double max_ratio = 0.0;  // max of log(1/||q x||)/log q over q in [2, Q]
  std::size_t points = 0;  // convergents used in the fit
};

// Lower-bound estimate of the type of x from its convergents up to Q.
// The fit uses denominators in [sqrt(Q), Q]; with fewer than three such
// points it uses every denominator >= 2.
TypeEstimate estimate_type(const IrrationalNumber& x, const mpz_class& Q);

}  // namespace chebeatty
