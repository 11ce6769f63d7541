#include <doctest.h>

#include <cmath>

#include "chebeatty/density.hpp"
#include "chebeatty/error.hpp"
#include "chebeatty/primes.hpp"
#include "naive.hpp"

using namespace chebeatty;
using namespace chebeatty::density;

namespace {

struct Naive {
  std::uint64_t pi = 0, ramified = 0, beatty = 0;
  std::uint64_t cls[3] = {0, 0, 0}, joint[3] = {0, 0, 0};
};

Naive naive_upto(std::uint64_t X, std::uint64_t q, std::uint64_t a) {
  const auto member = naive::pi_terms(X);
  Naive n;
  for (std::uint64_t p = 2; p <= X; ++p) {
    if (!naive::is_prime(p) || p % q != a % q) continue;
    ++n.pi;
    n.beatty += member[p];
    if (p == 2 || p == 3) {
      ++n.ramified;
      continue;
    }
    const int c = naive::s3_class(p);
    ++n.cls[c];
    n.joint[c] += member[p];
  }
  return n;
}

const galois::GaloisContext& ctx() {
  static const auto c = galois::GaloisContext::s3_x3m2();
  return c;
}

const BeattyParams& pi_beatty() {
  static const BeattyParams b(IrrationalNumber::pi(), mpq_class(0));
  return b;
}

}  // namespace

TEST_CASE("joint counts equal a naive recomputation") {
  for (auto [q, a] : {std::pair<std::uint64_t, std::uint64_t>{1, 0}, {4, 1}, {4, 3}, {7, 2}}) {
    const std::vector<std::uint64_t> cps = {100, 1000, 10'000};
    const auto t = joint_count(cps, ctx(), pi_beatty(), CountMode::UptoX,
                               q == 1 ? std::nullopt : std::optional<Restriction>({q, a}));
    REQUIRE(t.rows.size() == cps.size());
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const auto n = naive_upto(cps[i], q, a);
      const auto& r = t.rows[i];
      CHECK(r.pi == n.pi);
      CHECK(r.ramified == n.ramified);
      CHECK(r.pi_beatty == n.beatty);
      for (int c = 0; c < 3; ++c) {
        CHECK(r.pi_C[c] == n.cls[c]);
        CHECK(r.pi_C_beatty[c] == n.joint[c]);
      }
    }
  }
}

TEST_CASE("count invariants") {
  const auto t = joint_count({10, 1000, 100'000}, ctx(), pi_beatty(), CountMode::UptoX);
  for (const auto& r : t.rows) {
    std::uint64_t sum = 0;
    for (std::size_t c = 0; c < 3; ++c) {
      sum += r.pi_C[c];
      CHECK(r.pi_C_beatty[c] <= std::min(r.pi_C[c], r.pi_beatty));
      CHECK(std::min(r.pi_C[c], r.pi_beatty) <= r.pi);
    }
    CHECK(sum + r.ramified == r.pi);
  }
  CHECK(t.rows[2].pi == 9592);
}

TEST_CASE("mode consistency") {
  const std::uint64_t X = 50'000;
  const std::uint64_t piX = primes::prime_pi(X);
  const auto up = joint_count({X}, ctx(), pi_beatty(), CountMode::UptoX);
  const auto first = joint_count({piX - 2}, ctx(), pi_beatty(), CountMode::FirstN);
  const auto& u = up.rows[0];
  const auto& f = first.rows[0];
  CHECK(f.pi == piX - 2);
  CHECK(f.last_prime == u.last_prime);
  CHECK(f.ramified == 0);
  CHECK(f.pi_C == u.pi_C);
  CHECK(f.pi_C_beatty == u.pi_C_beatty);
  // 3 = floor(pi) is a term, 2 is not.
  CHECK(f.pi_beatty + 1 == u.pi_beatty);
}

TEST_CASE("published first-n rows") {
  const auto t = density_table(ctx(), pi_beatty(), {100, 1000, 10'000}, CountMode::FirstN);
  REQUIRE(t.columns.size() == 7);
  CHECK(t.columns[0] == "B");
  CHECK(t.columns[3] == "C_(123)");
  const std::vector<std::vector<double>> published = {
      {0.35, 0.15, 0.52, 0.33, 0.10, 0.18, 0.07},
      {0.328, 0.157, 0.508, 0.335, 0.052, 0.166, 0.110},
  };
  for (std::size_t r = 0; r < published.size(); ++r) {
    for (std::size_t c = 0; c < 7; ++c) CHECK(std::abs(t.rows[r].values[c] - published[r][c]) < 1e-12);
  }
  // Published to four places, except the (123) cell which is printed as 0.3544;
  // that would push the class sum to 1.019, and the recount gives 0.3354.
  const std::vector<double> row4 = {0.3215, 0.1635, 0.5011, 0.3354, 0.0505, 0.1605, 0.1105};
  for (std::size_t c = 0; c < 7; ++c) CHECK(std::abs(t.rows[2].values[c] - row4[c]) < 1e-4);
  for (const auto& row : t.rows) CHECK(std::abs(row.class_sum - 1.0) < 1e-12);
}

TEST_CASE("limit row") {
  const auto t = density_table(ctx(), pi_beatty(), {100}, CountMode::FirstN);
  const double pi = 3.14159265358979323846;
  const std::vector<double> expect = {1 / pi, 1.0 / 6, 0.5, 1.0 / 3, 1 / (6 * pi), 1 / (2 * pi),
                                      1 / (3 * pi)};
  for (std::size_t c = 0; c < 7; ++c) CHECK(std::abs(t.limit.values[c] - expect[c]) < 1e-15);
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(t.limit.values[4 + c] <= std::min(t.limit.values[0], t.limit.values[1 + c]));
  }
  CHECK(std::abs(t.limit.values[4] - 0.05305) < 5e-6);
}

TEST_CASE("worker invariance") {
  CountOptions one, four;
  one.chunk_span = 1 << 14;
  four.chunk_span = 1 << 14;
  four.workers = 4;
  const auto a = joint_count({1000, 200'000}, ctx(), pi_beatty(), CountMode::UptoX, Restriction{5, 2}, one);
  const auto b = joint_count({1000, 200'000}, ctx(), pi_beatty(), CountMode::UptoX, Restriction{5, 2}, four);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.rows[i].pi_C == b.rows[i].pi_C);
    CHECK(a.rows[i].pi_C_beatty == b.rows[i].pi_C_beatty);
    CHECK(a.rows[i].pi_beatty == b.rows[i].pi_beatty);
  }
}

TEST_CASE("joint primes and membership") {
  const auto member = naive::pi_terms(20'000);
  const auto js = joint_primes(2, 20'000, ctx(), 1, pi_beatty());
  std::vector<std::uint64_t> expect;
  for (std::uint64_t p = 5; p < 20'000; ++p) {
    if (naive::is_prime(p) && member[p] && naive::s3_class(p) == 1) expect.push_back(p);
  }
  CHECK(js == expect);
  for (std::uint64_t n = 2; n < 2000; ++n) {
    const bool want = naive::is_prime(n) && n > 3 && member[n] && naive::s3_class(n) == 1;
    CHECK(in_joint_set(n, ctx(), 1, pi_beatty()) == want);
  }
}

TEST_CASE("pnt ratio") {
  CHECK(std::abs(pnt_kappa(3, 1.0) - 1.0 / 375'000) < 1e-20);
  const auto r = pnt_ratio({10'000, 1'000'000}, ctx(), 1, pi_beatty(), 1, 0, 1.0);
  REQUIRE(r.points.size() == 2);
  REQUIRE(r.points[0].R.has_value());
  REQUIRE(r.points[1].R.has_value());
  CHECK(*r.points[1].R >= 0.9);
  CHECK(*r.points[1].R <= 1.1);
  CHECK(std::abs(*r.points[1].R - 1) <= std::abs(*r.points[0].R - 1) + 0.05);
  CHECK(r.d == 3);
  CHECK(std::abs(r.points[1].envelope - std::pow(1e6, 1 - 1.0 / 375'000)) < 1e-3);
  // Tiny X leaves no class primes: the ratio is absent rather than infinite.
  const auto tiny = pnt_ratio({4}, ctx(), 0, pi_beatty(), 1, 0, 1.0);
  CHECK_FALSE(tiny.points[0].R.has_value());
  CHECK_THROWS_AS(pnt_ratio({100}, ctx(), 0, pi_beatty(), 6, 1, 1.0), Error);
  CHECK_THROWS_AS(pnt_ratio({100}, ctx(), 0, pi_beatty(), 5, 0, 1.0), Error);
}

TEST_CASE("argument errors") {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code([] { joint_count({100, 10}, ctx(), pi_beatty(), CountMode::UptoX); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code([] { joint_count({100}, ctx(), pi_beatty(), CountMode::UptoX, Restriction{4, 2}); }) ==
        ErrorCode::InvalidArgument);
  CountOptions small;
  small.max_x = 1000;
  CHECK(code([&] { joint_count({10'000}, ctx(), pi_beatty(), CountMode::UptoX, std::nullopt, small); }) ==
        ErrorCode::BudgetExceeded);
  CHECK(parse_mode("first-n") == CountMode::FirstN);
  CHECK(code([] { parse_mode("sideways"); }) == ErrorCode::InvalidArgument);
}
