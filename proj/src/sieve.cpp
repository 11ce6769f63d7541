#include "chebeatty/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chebeatty/error.hpp"
#include "chebeatty/primes.hpp"

namespace chebeatty::sieve {
namespace {

mpz_class phi_of(const mpz_class& n) {
  mpz_class r = abs(n);
  for (std::uint64_t p : galois::prime_divisors(n)) {
    r /= static_cast<unsigned long>(p);
    r *= static_cast<unsigned long>(p - 1);
  }
  return r;
}

std::uint64_t phi_rad(const mpz_class& n) {
  std::uint64_t r = 1;
  for (std::uint64_t p : galois::prime_divisors(n)) r *= p - 1;
  return r;
}

std::uint64_t phi_small(std::uint64_t n) { return phi_of(mpz_class(static_cast<unsigned long>(n))).get_ui(); }

void check_class(const galois::GaloisContext& ctx, std::size_t c) {
  if (c >= ctx.classes().size()) raise(ErrorCode::InvalidArgument, "class index out of range");
}

}  // namespace

AdmissibilityCheck is_admissible(const std::vector<std::int64_t>& H) {
  if (H.size() > kMaxTupleSize) raise(ErrorCode::InvalidArgument, "tuple longer than 10^4");
  AdmissibilityCheck out;
  const auto k = static_cast<std::uint64_t>(H.size());
  if (k < 2) return out;
  std::vector<std::uint8_t> seen;
  for (std::uint64_t p : primes::first_primes(primes::prime_pi(k))) {
    seen.assign(p, 0);
    std::uint64_t covered = 0;
    for (std::int64_t h : H) {
      const auto r = static_cast<std::uint64_t>(((h % static_cast<std::int64_t>(p)) +
                                                 static_cast<std::int64_t>(p)) %
                                                static_cast<std::int64_t>(p));
      if (!seen[r]) {
        seen[r] = 1;
        ++covered;
      }
    }
    if (covered == p) {
      out.admissible = false;
      out.covering_prime = p;
      return out;
    }
  }
  return out;
}

AdmissibleTuple make_admissible(unsigned k) {
  if (k < 1 || k > kMaxTupleSize) raise(ErrorCode::InvalidArgument, "k must lie in [1, 10^4]");
  const std::uint64_t start = primes::prime_pi(k);
  const auto ps = primes::first_primes(start + k);
  AdmissibleTuple t;
  for (std::uint64_t i = start; i < start + k; ++i) t.H.push_back(static_cast<std::int64_t>(ps[i]));
  t.width = t.H.back() - t.H.front();
  t.gap_bound = 1.6 * k * std::log(static_cast<double>(k));
  if (k >= primes::kShiftedGapStart) t.within_gap_bound = static_cast<double>(t.width) <= t.gap_bound;
  if (!is_admissible(t.H).admissible) {
    raise(ErrorCode::InvalidArgument, "constructed tuple failed the admissibility check");
  }
  return t;
}

std::uint64_t gpy_modulus(double N, const galois::GaloisContext& ctx) {
  if (!(N > std::exp(1.0))) return 1;
  const double l1 = std::log(N);
  if (!(l1 > 1.0)) return 1;
  const double l3 = std::log(std::log(l1));
  if (!(l3 >= 2.0)) return 1;
  std::uint64_t U = 1;
  for (std::uint64_t p = 2; static_cast<double>(p) <= l3; ++p) {
    if (!primes::is_prime(p)) continue;
    if (mpz_divisible_ui_p(ctx.disc_L().get_mpz_t(), p)) continue;
    if (U > std::numeric_limits<std::uint64_t>::max() / p) {
      raise(ErrorCode::BudgetExceeded, "U overflows 64 bits");
    }
    U *= p;
  }
  return U;
}

MainTerms s1_s2_main_terms(double N, double R, std::uint64_t W, const galois::GaloisContext& ctx,
                           std::size_t class_index, const IrrationalNumber& alpha,
                           const SievePolynomial& F, const std::vector<std::int64_t>& H) {
  check_class(ctx, class_index);
  if (H.size() != F.k) raise(ErrorCode::InvalidArgument, "|H| must equal the dimension of F");
  if (!(N > 1.0) || !(R > 1.0)) raise(ErrorCode::InvalidArgument, "need N > 1 and R > 1");
  if (W < 1) raise(ErrorCode::InvalidArgument, "W must be positive");
  MainTerms t;
  t.k = F.k;
  t.U = gpy_modulus(N, ctx);
  t.W = W;
  t.W_is_U = W == t.U;
  const Integrals in = integrals(F);
  t.I = in.I;
  t.J_sum = in.J_sum();
  t.delta = static_cast<double>(ctx.classes()[class_index].size) /
            (alpha.approx() * static_cast<double>(ctx.group_order()));
  t.phi_rad = phi_rad(ctx.disc_L());
  const double k = static_cast<double>(t.k);
  const double logR = std::log(R);
  const double common = std::pow(static_cast<double>(phi_small(W)), k) * N * std::pow(logR, k) /
                        std::pow(static_cast<double>(W), k + 1.0);
  t.S1 = common * t.I.get_d();
  t.S2 = t.delta * static_cast<double>(t.phi_rad) * (logR / std::log(N)) * common * t.J_sum.get_d();
  t.rho = t.S2 / t.S1;
  t.note = t.W_is_U ? "W taken equal to U; (1 + o(1)) factors dropped"
                    : "explicit W; (1 + o(1)) factors dropped";
  return t;
}

MainTerms s1_s2_main_terms(double N, double R, const galois::GaloisContext& ctx,
                           std::size_t class_index, const IrrationalNumber& alpha,
                           const SievePolynomial& F, const std::vector<std::int64_t>& H) {
  return s1_s2_main_terms(N, R, gpy_modulus(N, ctx), ctx, class_index, alpha, F, H);
}

std::vector<std::uint8_t> JointSet::flags(std::uint64_t hi, unsigned workers) const {
  std::vector<std::uint8_t> out(hi, 0);
  if (hi <= 2) return out;
  const std::uint64_t span = std::uint64_t{1} << 22;
  const std::size_t chunks = static_cast<std::size_t>((hi - 2 + span - 1) / span);
  auto parts = primes::run_chunks(2, hi, chunks, workers, [&](std::uint64_t lo, std::uint64_t h) {
    std::vector<std::uint64_t> found;
    primes::for_each_prime(lo, h, [&](std::uint64_t p) {
      if (contains_prime(p)) found.push_back(p);
    });
    return found;
  });
  for (const auto& part : parts) {
    for (std::uint64_t p : part) out[p] = 1;
  }
  return out;
}

bool JointSet::contains_prime(std::uint64_t p) const {
  if (beatty && !beatty->is_member(p)) return false;
  if (class_index) {
    const auto c = ctx->artin_class(p);
    return c && *c == *class_index;
  }
  return true;
}

bool JointSet::contains(std::uint64_t n) const {
  return n >= 2 && primes::is_prime(n) && contains_prime(n);
}

GapScan gap_scan(std::uint64_t X, const JointSet& set, std::uint64_t m, unsigned workers) {
  if (X > kMaxGapX) raise(ErrorCode::BudgetExceeded, "X exceeds 10^8");
  if (m < 1) raise(ErrorCode::InvalidArgument, "m must be >= 1");
  const auto f = set.flags(X + 1, workers);
  std::vector<std::uint64_t> ps;
  for (std::uint64_t n = 2; n <= X; ++n) {
    if (f[n]) ps.push_back(n);
  }
  if (ps.size() < m + 1) {
    raise(ErrorCode::InsufficientPrimes, "found " + std::to_string(ps.size()) +
                                             " primes, need at least " + std::to_string(m + 1));
  }
  GapScan g;
  g.m = m;
  g.count = ps.size();
  g.min_gap = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = 0; i + m < ps.size(); ++i) {
    const std::uint64_t gap = ps[i + m] - ps[i];
    ++g.histogram[gap];
    if (gap < g.min_gap) {
      g.min_gap = gap;
      g.witness = ps[i];
    }
  }
  return g;
}

ClusterScan cluster_scan(std::uint64_t X, const std::vector<std::int64_t>& H, const JointSet& set,
                         std::uint64_t m, unsigned workers) {
  if (X > kMaxScanX) raise(ErrorCode::BudgetExceeded, "X exceeds 10^7");
  if (H.empty() || H.size() > 50) raise(ErrorCode::InvalidArgument, "|H| must lie in [1, 50]");
  const std::int64_t hmax = *std::max_element(H.begin(), H.end());
  const std::uint64_t top = X + static_cast<std::uint64_t>(std::max<std::int64_t>(hmax, 0)) + 1;
  const auto f = set.flags(top, workers);
  ClusterScan out;
  for (std::uint64_t n = 1; n <= X; ++n) {
    std::uint64_t hits = 0;
    for (std::int64_t h : H) {
      const std::int64_t v = static_cast<std::int64_t>(n) + h;
      if (v > 0 && f[static_cast<std::uint64_t>(v)]) ++hits;
    }
    if (hits >= m) {
      ++out.count;
      if (out.witnesses.size() < 10) out.witnesses.push_back(n);
    }
  }
  return out;
}

std::vector<Progression> ap_scan(std::uint64_t X, const std::vector<std::int64_t>& Hprime,
                                 const JointSet& set, unsigned t, std::size_t max_results,
                                 unsigned workers) {
  if (X > kMaxScanX) raise(ErrorCode::BudgetExceeded, "X exceeds 10^7");
  if (t != 3 && t != 4) raise(ErrorCode::InvalidArgument, "t must be 3 or 4");
  if (Hprime.empty() || Hprime.size() > 50) raise(ErrorCode::InvalidArgument, "|H'| must lie in [1, 50]");
  const std::int64_t hmax = *std::max_element(Hprime.begin(), Hprime.end());
  const std::uint64_t top = X + static_cast<std::uint64_t>(std::max<std::int64_t>(hmax, 0)) + 1;
  const auto f = set.flags(top, workers);
  std::vector<std::uint8_t> in(X + 1, 0);
  std::vector<std::uint64_t> S;
  for (std::uint64_t n = 1; n <= X; ++n) {
    bool all = true;
    for (std::int64_t h : Hprime) {
      const std::int64_t v = static_cast<std::int64_t>(n) + h;
      if (v <= 0 || !f[static_cast<std::uint64_t>(v)]) {
        all = false;
        break;
      }
    }
    if (all) {
      in[n] = 1;
      S.push_back(n);
    }
  }
  std::vector<Progression> out;
  for (std::size_t i = 0; i < S.size() && out.size() < max_results; ++i) {
    const std::uint64_t a = S[i];
    for (std::size_t j = i + 1; j < S.size() && out.size() < max_results; ++j) {
      const std::uint64_t d = S[j] - a;
      if (a + (t - 1) * d > X) break;
      bool ok = true;
      for (unsigned s = 2; s < t && ok; ++s) ok = in[a + s * d] != 0;
      if (ok) out.push_back({a, d, t});
    }
  }
  return out;
}

Threshold gt_threshold(std::uint64_t m, const galois::GaloisContext& ctx, std::size_t class_index,
                       const IrrationalNumber& alpha, double theta, std::optional<double> D) {
  check_class(ctx, class_index);
  if (!(theta > 0.0)) raise(ErrorCode::InvalidArgument, "theta must be positive");
  Threshold t;
  const mpz_class disc = abs(ctx.disc_L());
  t.phi_disc = phi_of(disc).get_ui();
  const double Dl = disc.get_d();
  t.log_threshold = 2.0 * alpha.approx() * static_cast<double>(ctx.group_order()) * Dl *
                    static_cast<double>(m) /
                    (static_cast<double>(ctx.classes()[class_index].size) * theta *
                     static_cast<double>(t.phi_disc));
  t.threshold = std::exp(t.log_threshold);
  if (D) {
    const double x = static_cast<double>(m) * *D * Dl;
    t.log_gap_bound = std::log(x) + 2.0 * x;
  }
  return t;
}

}  // namespace chebeatty::sieve
