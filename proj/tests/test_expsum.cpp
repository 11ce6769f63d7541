#include <doctest.h>

#include <cmath>
#include <numeric>

#include "chebeatty/error.hpp"
#include "chebeatty/expsum.hpp"
#include "naive.hpp"

using namespace chebeatty;
using namespace chebeatty::expsum;

namespace {

std::vector<std::uint64_t> naive_class12(std::uint64_t X) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 5; p <= X; ++p) {
    if (naive::is_prime(p) && naive::s3_class(p) == 1) out.push_back(p);
  }
  return out;
}

const galois::GaloisContext& ctx() {
  static const auto c = galois::GaloisContext::s3_x3m2();
  return c;
}

std::size_t c12() { return ctx().class_index("(12)"); }

const std::vector<std::uint64_t>& primes_1e4() {
  static const auto ps = class_primes(10'000, ctx(), c12());
  return ps;
}

}  // namespace

TEST_CASE("class primes") {
  CHECK(primes_1e4() == naive_class12(10'000));
  CHECK(class_primes(10'000, ctx(), c12(), 4) == primes_1e4());
  CHECK_THROWS_AS(class_primes(100'000'001, ctx(), c12()), Error);
}

TEST_CASE("theta = 0 gives the Chebyshev sum") {
  const auto r = g_sum(10'000, ctx(), c12(), 1, 0, Frequency::rational(0));
  long double cheb = 0;
  for (auto p : primes_1e4()) cheb += std::log(static_cast<long double>(p));
  CHECK(r.value.imag() == 0.0);
  CHECK(std::abs(r.value.real() - static_cast<double>(cheb)) < 1e-9);
  CHECK(std::abs(r.trivial_bound - static_cast<double>(cheb)) < 1e-9);
  CHECK(r.terms == primes_1e4().size());
}

TEST_CASE("theta = 1/2 at X = 100") {
  const auto r = g_sum(100, ctx(), c12(), 1, 0, Frequency::rational(mpq_class(1, 2)));
  double s = 0;
  for (auto p : naive_class12(100)) s += (p % 2 ? -1.0 : 1.0) * std::log(static_cast<double>(p));
  CHECK(std::abs(r.value.real() - s) < 1e-12);
  CHECK(std::abs(r.value.imag()) < 1e-12);
}

TEST_CASE("theta = pi against an exact rational reimplementation") {
  const auto r = g_sum(10'000, ctx(), c12(), 1, 0, Frequency::irrational(IrrationalNumber::pi()));
  long double re = 0, im = 0;
  const long double two_pi = 6.283185307179586476925286766559L;
  for (auto p : primes_1e4()) {
    mpq_class t = naive::kPi50 * static_cast<unsigned long>(p);
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    t -= fl;
    const long double f = t.get_d();
    const long double w = std::log(static_cast<long double>(p));
    re += w * std::cos(two_pi * f);
    im += w * std::sin(two_pi * f);
  }
  const double mag = std::hypot(static_cast<double>(re), static_cast<double>(im));
  CHECK(std::abs(r.value - std::complex<double>(static_cast<double>(re), static_cast<double>(im))) <=
        1e-6 * r.trivial_bound);
  CHECK(std::abs(std::abs(r.value) - mag) <= 1e-6 * mag);
}

TEST_CASE("phases stay accurate for large p and k") {
  const auto x = IrrationalNumber::e();
  for (std::int64_t k : {1, 7, -3, 999}) {
    const auto f = Frequency::irrational(x, k);
    for (std::uint64_t p : {2ULL, 99'991ULL, 99'999'989ULL}) {
      const auto fr = frac_linear(x, mpz_class(static_cast<long>(k)) * static_cast<unsigned long>(p),
                                  mpq_class(0), 80);
      double d = std::abs(f.phase(p) - fr.high.mid_double());
      d = std::min(d, 1 - d);
      CHECK(d < std::ldexp(1.0, -40));
    }
  }
}

TEST_CASE("twisted sums and orthogonality") {
  const auto& ps = primes_1e4();
  const auto plain = g_sum(ps, 1, 0, Frequency::irrational(IrrationalNumber::pi()));
  const auto principal = galois::character_group(1)[0];
  const auto tw = g_sum_twisted(ps, principal, Frequency::irrational(IrrationalNumber::pi()));
  CHECK(std::abs(tw.value - plain.value) < 1e-12);

  const auto chi4 = galois::character_group(4)[1];
  const auto t0 = g_sum_twisted(10'000, ctx(), c12(), chi4, Frequency::rational(0));
  CHECK(std::abs(t0.value) < t0.trivial_bound);

  const std::vector<Frequency> thetas = {Frequency::rational(0),
                                         Frequency::irrational(IrrationalNumber::pi()),
                                         Frequency::rational(mpq_class(1, 3))};
  double worst = 0;
  for (const auto& th : thetas) {
    for (std::uint64_t q = 1; q <= 50; ++q) {
      for (std::uint64_t a = 1; a <= q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        const auto direct = g_sum(ps, q, a % q, th);
        const auto comb = orthogonality_combination(ps, q, a % q, th);
        worst = std::max(worst, std::abs(comb - direct.value));
      }
    }
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("trivial bound and conjugation") {
  const auto& ps = primes_1e4();
  for (const auto& th : {Frequency::irrational(IrrationalNumber::sqrt(2), 3),
                         Frequency::rational(mpq_class(2, 7))}) {
    for (std::uint64_t q : {1ULL, 5ULL, 8ULL}) {
      const auto r = g_sum(ps, q, 1, th);
      const auto n = g_sum(ps, q, 1, th.negated());
      CHECK(std::abs(r.value) <= r.trivial_bound + 1e-6);
      CHECK(std::abs(n.value - std::conj(r.value)) < 1e-9);
    }
  }
  CHECK_THROWS_AS(g_sum(ps, 6, 3, Frequency::rational(0)), Error);
}

TEST_CASE("worker invariance") {
  const auto th = Frequency::irrational(IrrationalNumber::pi());
  const auto a = g_sum(300'000, ctx(), c12(), 7, 3, th, 1);
  const auto b = g_sum(300'000, ctx(), c12(), 7, 3, th, 4);
  CHECK(std::abs(a.value - b.value) <= 1e-12 * a.trivial_bound);
}

TEST_CASE("error budget") {
  auto oracle = [](long double X, long double B, long double q, int d) {
    const long double L = std::log(X);
    const long double e = std::pow(10.0L, -d);
    const long double E = L * L * std::pow(B, -e / 12) + L * L * std::pow(X, -e / 60) +
                          L * L * std::pow(X, -e / 10) + std::pow(L, 2 + d * d / 2.0L) * std::pow(B, -1.0L / 12);
    return std::pair{E, std::pow(q, d + 1) * X * E};
  };
  for (auto [X, B, q, d] : {std::tuple{1e6, 1e3, 1ULL, 3u}, {1e8, 50.0, 7ULL, 2u}, {1e12, 1e5, 1ULL, 6u}}) {
    const auto r = error_budget(X, B, q, d);
    const auto [E, bound] = oracle(X, B, static_cast<long double>(q), static_cast<int>(d));
    CHECK(std::abs(r.E - static_cast<double>(E)) <= 1e-12 * static_cast<double>(E));
    CHECK(std::abs(r.bound - static_cast<double>(bound)) <= 1e-12 * static_cast<double>(bound));
    CHECK(std::abs(r.terms[0] + r.terms[1] + r.terms[2] + r.terms[3] - r.E) <= 1e-12 * r.E);
  }
  CHECK(error_budget(1e6, std::pow(1e6, 0.4), 1, 3).E <= error_budget(1e6, std::pow(1e6, 0.1), 1, 3).E);
  CHECK_THROWS_AS(error_budget(100, 200, 1, 3), Error);
  CHECK_THROWS_AS(error_budget(100, 1, 1, 3), Error);
  CHECK(std::abs(eta(3, 1) - 8e-6) < 1e-18);
  CHECK(std::abs(eta(3, 2) - 1e-3 / 250) < 1e-18);
  CHECK(std::abs(eta(10, 1) - 1e-10 / 200) < 1e-24);
}

TEST_CASE("decay report") {
  const auto rep = decay_report(ctx(), c12(), IrrationalNumber::pi(), 2, {10'000, 100'000, 1'000'000});
  REQUIRE(rep.series.size() == 3);
  CHECK(rep.note.find("advisory") != std::string::npos);
  const auto& pi1 = rep.series[0];
  REQUIRE(pi1.rows.size() == 3);
  CHECK(pi1.rows[2].over_trivial < 1);
  CHECK(pi1.slope.has_value());
  // The rational control keeps a fixed fraction of the trivial bound.
  const auto& control = rep.series[2];
  CHECK(control.rows[2].over_trivial > 0.25);
  CHECK(control.rows[2].over_trivial > 10 * pi1.rows[2].over_trivial);
  // The row at X = 10^4 matches a direct g_sum.
  const auto direct = g_sum(primes_1e4(), 1, 0, Frequency::irrational(IrrationalNumber::pi()));
  CHECK(std::abs(pi1.rows[0].abs_value - std::abs(direct.value)) < 1e-9);
  CHECK_THROWS_AS(decay_report(ctx(), c12(), IrrationalNumber::pi(), 1001, {100}), Error);
}
