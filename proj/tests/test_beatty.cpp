#include <doctest.h>

#include <cmath>
#include <random>

#include "chebeatty/beatty.hpp"
#include "chebeatty/error.hpp"
#include "chebeatty/numeric.hpp"

using namespace chebeatty;

namespace {

// Star discrepancy by brute force over anchored intervals [0, t) and [0, t]
// with t running over the sample and 1.
double brute_star(const std::vector<double>& xs) {
  const double M = static_cast<double>(xs.size());
  double best = 0.0;
  std::vector<double> ts = xs;
  ts.push_back(1.0);
  for (double t : ts) {
    std::size_t below = 0, upto = 0;
    for (double x : xs) {
      below += x < t;
      upto += x <= t;
    }
    best = std::max(best, std::abs(static_cast<double>(below) / M - t));
    best = std::max(best, std::abs(static_cast<double>(upto) / M - t));
  }
  return best;
}

// Extreme discrepancy over all intervals with endpoints in the sample and {0, 1}.
double brute_extreme(const std::vector<double>& xs) {
  const double M = static_cast<double>(xs.size());
  std::vector<double> ends = xs;
  ends.push_back(0.0);
  ends.push_back(1.0);
  double best = 0.0;
  for (double a : ends) {
    for (double b : ends) {
      if (b < a) continue;
      std::size_t open = 0, closed = 0;
      for (double x : xs) {
        open += (x > a && x < b);
        closed += (x >= a && x <= b);
      }
      best = std::max(best, std::abs(static_cast<double>(open) / M - (b - a)));
      best = std::max(best, std::abs(static_cast<double>(closed) / M - (b - a)));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("terms") {
  const BeattyParams pi(IrrationalNumber::pi(), mpq_class(0));
  CHECK(pi.term(1) == 3);
  CHECK(pi.term(7) == 21);
  CHECK(pi.term(113) == 354);  // 113 pi = 354.99997...
  const BeattyParams r2(IrrationalNumber::sqrt(2), mpq_class(1, 2));
  CHECK(r2.term(1) == 1);
  for (std::int64_t n = 1; n < 200; ++n) {
    CHECK(r2.term(n) == static_cast<std::int64_t>(std::floor(std::sqrt(2.0) * n + 0.5)));
  }
}

TEST_CASE("membership") {
  const BeattyParams pi(IrrationalNumber::pi(), mpq_class(0));
  CHECK(is_member(3, pi));
  CHECK_FALSE(is_member(4, pi));
  // Generate-and-check oracle over the first terms.
  std::vector<std::uint8_t> seen(3200, 0);
  for (std::int64_t n = 1; n <= 1000; ++n) seen[static_cast<std::size_t>(pi.term(n))] = 1;
  for (std::uint64_t m = 1; m < 3000; ++m) CHECK(pi.is_member(m) == (seen[m] != 0));
}

TEST_CASE("roundtrip for n <= 10^5") {
  for (const char* a : {"pi", "e", "sqrt2"}) {
    const BeattyParams p(IrrationalNumber::parse(a), mpq_class(1, 3));
    std::size_t failures = 0;
    for (std::int64_t n = 1; n <= 100'000; ++n) {
      failures += !p.is_member(static_cast<std::uint64_t>(p.term(n)));
    }
    CHECK(failures == 0);
  }
}

TEST_CASE("fast and certified paths agree") {
  const BeattyParams p(IrrationalNumber::e(), IrrationalNumber::sqrt(2));
  std::mt19937_64 rng(99);
  for (int i = 0; i < 2000; ++i) {
    const std::uint64_t m = 1 + rng() % (1ULL << 61);
    CHECK(p.is_member(m) == p.is_member_certified(m));
  }
}

TEST_CASE("membership density") {
  const BeattyParams p(IrrationalNumber::pi(), mpq_class(0));
  for (std::uint64_t X : {10'000ULL, 1'000'000ULL}) {
    std::uint64_t c = 0;
    for (std::uint64_t m = 1; m <= X; ++m) c += p.is_member(m);
    const double d = static_cast<double>(c) / static_cast<double>(X);
    CHECK(std::abs(d - 1 / kPi) <= 3 / std::sqrt(static_cast<double>(X)));
  }
}

TEST_CASE("alpha must exceed one") {
  CHECK_THROWS_AS(BeattyParams(reciprocal(IrrationalNumber::pi()), mpq_class(0)), Error);
  try {
    BeattyParams(reciprocal(IrrationalNumber::sqrt(2)), mpq_class(0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AlphaNotGreaterThanOne);
  }
}

TEST_CASE("psi_Delta coefficients and values") {
  const double gamma = 1 / kPi;
  const auto psi = build_psi_delta(gamma, 0.01, 100);
  CHECK(psi.g.size() == 100);
  CHECK(psi.coefficients_within_bound());
  for (std::size_t k = 1; k <= 100; ++k) {
    CHECK(std::abs(psi.g[k - 1]) <= psi.coefficient_bound(k));
    CHECK(std::abs(psi.h[k - 1]) <= psi.coefficient_bound(k));
  }
  CHECK(std::abs(psi.g[0]) <= 2 / kPi);
  CHECK(std::abs(eval_psi_delta(psi, gamma / 2) - 1) <= psi.truncation_error);
  CHECK(std::abs(eval_psi_delta(psi, gamma + 2 * 0.01)) <= psi.truncation_error);
  double mean = 0;
  for (int i = 0; i < 10'000; ++i) mean += eval_psi_delta(psi, i / 10'000.0);
  CHECK(std::abs(mean / 10'000 - gamma) < 1e-3);
  // The truncated series stays close to the closed form everywhere.
  for (int i = 0; i < 1000; ++i) {
    const double x = i / 1000.0;
    CHECK(std::abs(psi.eval(x) - psi.exact(x)) <= psi.truncation_error);
  }
}

TEST_CASE("invalid Delta") {
  CHECK_THROWS_AS(build_psi_delta(0.3, 0.2, 10), Error);
  try {
    build_psi_delta(0.3, 0.2, 10);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidDelta);
  }
  CHECK_THROWS_AS(build_psi_delta(0.9, 0.06, 10), Error);
}

TEST_CASE("star discrepancy against brute force") {
  std::mt19937_64 rng(5);
  for (int inst = 0; inst < 20; ++inst) {
    const long D = 2 + static_cast<long>(rng() % 50);
    if (mpz_perfect_square_p(mpz_class(D).get_mpz_t())) continue;
    const RealValue gamma = reciprocal(IrrationalNumber::sqrt(D) );
    const RealValue delta = mpq_class(static_cast<long>(rng() % 1000), 1000);
    const std::uint64_t M = 1 + rng() % 200;
    const auto pts = frac_points(gamma, delta, M);
    CHECK(star_discrepancy(pts) == brute_star(pts));
  }
  const auto one = frac_points(IrrationalNumber::sqrt(2), mpq_class(0), 1);
  CHECK(star_discrepancy(one) == std::max(one[0], 1 - one[0]));
}

TEST_CASE("discrepancy bracket") {
  const auto pts = frac_points(IrrationalNumber::sqrt(2), mpq_class(0), 100);
  const double ext = brute_extreme(pts);
  const auto d = discrepancy(IrrationalNumber::sqrt(2), mpq_class(0), 100);
  CHECK(d.D_lower <= ext + 1e-15);
  CHECK(ext <= d.D_upper + 1e-15);
  const auto small = discrepancy(IrrationalNumber::sqrt(2), mpq_class(0), 1000);
  const auto large = discrepancy(IrrationalNumber::sqrt(2), mpq_class(0), 100'000);
  CHECK(large.D_upper < small.D_upper);
  CHECK_THROWS_AS(discrepancy(IrrationalNumber::sqrt(2), mpq_class(0), 10'000'001), Error);
}

TEST_CASE("frac_points matches certified fractional parts") {
  const auto x = IrrationalNumber::pi();
  const auto pts = frac_points(x, mpq_class(1, 7), 500);
  for (std::uint64_t m = 1; m <= 500; ++m) {
    const auto f = frac_linear(x, m, mpq_class(1, 7), 60);
    CHECK(std::abs(pts[m - 1] - f.high.mid_double()) < 1e-15);
  }
}
