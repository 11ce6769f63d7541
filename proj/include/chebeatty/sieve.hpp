#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chebeatty/beatty.hpp"
#include "chebeatty/galois.hpp"

namespace chebeatty::sieve {

inline constexpr unsigned kMaxExponent = 30;

// A polynomial in t_1..t_k on the simplex R_k = {t_i >= 0, sum t_i <= 1}.
struct SievePolynomial {
  unsigned k = 1;
  std::map<std::vector<unsigned>, mpq_class> terms;

  static SievePolynomial constant(unsigned k, const mpq_class& c);
  static SievePolynomial monomial(const std::vector<unsigned>& exponents, const mpq_class& c = 1);

  unsigned degree() const;
  void add_term(const std::vector<unsigned>& exponents, const mpq_class& c);
  double eval(const std::vector<double>& t) const;
  std::string to_string() const;

  friend SievePolynomial operator+(const SievePolynomial& a, const SievePolynomial& b);
  friend SievePolynomial operator*(const SievePolynomial& a, const SievePolynomial& b);
};

// a0! prod a_i! / (k + a0 + sum a_i)!, the integral over R_k of
// t^a (1 - sum t)^a0. Every exponent must be at most 30.
mpq_class simplex_moment(unsigned k, const std::vector<unsigned>& a, unsigned a0);

struct Integrals {
  mpq_class I;
  std::vector<mpq_class> J;  // J[m-1] = J_k^(m)
  mpq_class J_sum() const;
};

// I_k(F) = int F^2, J_k^(m)(F) = int (int F dt_m)^2, exact.
Integrals integrals(const SievePolynomial& F);

// The monomial symmetric polynomial m_lambda in k variables.
SievePolynomial monomial_symmetric(unsigned k, const std::vector<unsigned>& lambda);

struct MkResult {
  unsigned k = 1;
  unsigned degree = 0;
  double M = 0.0;  // sum_m J^(m) / I at the optimum
  std::vector<std::vector<unsigned>> basis;  // partitions, |lambda| <= degree
  std::vector<double> coefficients;          // of F_opt in the basis
  SievePolynomial F;
  unsigned iterations = 0;
};

struct MkOptions {
  unsigned max_iterations = 10'000;
  double tolerance = 1e-12;
};

// Maximizes sum_m J^(m)(F) / I(F) over symmetric F of total degree <= degree.
MkResult optimize_Mk(unsigned k, unsigned degree, const MkOptions& options = {});

struct AdmissibleTuple {
  std::vector<std::int64_t> H;
  std::int64_t width = 0;                 // h_k - h_1
  double gap_bound = 0.0;                 // 1.6 k log k
  std::optional<bool> within_gap_bound;   // reported for k >= 213
};

struct AdmissibilityCheck {
  bool admissible = true;
  std::optional<std::uint64_t> covering_prime;
};

inline constexpr std::size_t kMaxTupleSize = 10'000;

AdmissibilityCheck is_admissible(const std::vector<std::int64_t>& H);

// (p_{pi(k)+1}, ..., p_{pi(k)+k}).
AdmissibleTuple make_admissible(unsigned k);

struct MainTerms {
  std::uint64_t U = 1;
  std::uint64_t W = 1;
  bool W_is_U = true;
  unsigned k = 1;
  mpq_class I;
  mpq_class J_sum;
  double delta = 0.0;         // |C| / (alpha |G|)
  std::uint64_t phi_rad = 1;  // phi(rad(Delta_L))
  double S1 = 0.0;
  double S2 = 0.0;
  double rho = 0.0;           // S2 / S1
  std::string note;
};

// prod of p <= log log log N with p not dividing Delta_L; 1 when there are none.
std::uint64_t gpy_modulus(double N, const galois::GaloisContext& ctx);

// S1 = phi(W)^k N (log R)^k / W^(k+1) I(F),
// S2 = delta phi(rad Delta_L) (log R / log N) phi(W)^k N (log R)^k / W^(k+1) sum_m J^(m)(F),
// with W = U.
MainTerms s1_s2_main_terms(double N, double R, const galois::GaloisContext& ctx,
                           std::size_t class_index, const IrrationalNumber& alpha,
                           const SievePolynomial& F, const std::vector<std::int64_t>& H);
// The same with an explicit W.
MainTerms s1_s2_main_terms(double N, double R, std::uint64_t W, const galois::GaloisContext& ctx,
                           std::size_t class_index, const IrrationalNumber& alpha,
                           const SievePolynomial& F, const std::vector<std::int64_t>& H);

// Membership in P_{C,alpha,beta} or one of its relaxations.
struct JointSet {
  const galois::GaloisContext* ctx = nullptr;
  std::optional<std::size_t> class_index;
  const BeattyParams* beatty = nullptr;

  // flags[n] for 0 <= n < hi.
  std::vector<std::uint8_t> flags(std::uint64_t hi, unsigned workers = 1) const;
  bool contains(std::uint64_t n) const;
  // Membership for a known prime p.
  bool contains_prime(std::uint64_t p) const;
};

struct GapScan {
  std::uint64_t m = 1;
  std::uint64_t count = 0;  // primes found
  std::uint64_t min_gap = 0;
  std::uint64_t witness = 0;  // q_n attaining min_gap first
  std::map<std::uint64_t, std::uint64_t> histogram;  // q_{n+m} - q_n
};

inline constexpr std::uint64_t kMaxGapX = 100'000'000;
inline constexpr std::uint64_t kMaxScanX = 10'000'000;

GapScan gap_scan(std::uint64_t X, const JointSet& set, std::uint64_t m, unsigned workers = 1);

struct ClusterScan {
  std::uint64_t count = 0;
  std::vector<std::uint64_t> witnesses;  // first 10
};

// n in [1, X] with at least m of n + h_i in the set.
ClusterScan cluster_scan(std::uint64_t X, const std::vector<std::int64_t>& H, const JointSet& set,
                         std::uint64_t m, unsigned workers = 1);

struct Progression {
  std::uint64_t a = 0;
  std::uint64_t d = 0;
  unsigned t = 3;
};

// t-term progressions a, a+d, ... inside {n <= X : n + h in the set for all h},
// ordered by (a, d), at most max_results of them.
std::vector<Progression> ap_scan(std::uint64_t X, const std::vector<std::int64_t>& Hprime,
                                 const JointSet& set, unsigned t, std::size_t max_results = 100,
                                 unsigned workers = 1);

struct Threshold {
  double log_threshold = 0.0;  // 2 alpha |G| |Delta_L| m / (|C| theta phi(|Delta_L|))
  double threshold = 0.0;      // exp of the above, inf on overflow
  std::uint64_t phi_disc = 1;
  std::optional<double> log_gap_bound;  // log(m D |Delta_L|) + 2 m D |Delta_L|
  std::string note = "scale indicators; the implied constants are unspecified";
};

Threshold gt_threshold(std::uint64_t m, const galois::GaloisContext& ctx, std::size_t class_index,
                       const IrrationalNumber& alpha, double theta,
                       std::optional<double> D = std::nullopt);

}  // namespace chebeatty::sieve
