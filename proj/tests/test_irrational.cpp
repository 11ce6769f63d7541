#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "chebeatty/error.hpp"
#include "chebeatty/irrational.hpp"

using namespace chebeatty;

namespace {

// pi and e to 50 decimals, from the standard published expansions.
const mpq_class kPi50("314159265358979323846264338327950288419716939937510/"
                      "100000000000000000000000000000000000000000000000000");
const mpq_class kE50("271828182845904523536028747135266249775724709369995/"
                     "100000000000000000000000000000000000000000000000000");
const mpq_class kUlp50("1/100000000000000000000000000000000000000000000000000");

bool overlaps_reference(const DyadicInterval& iv, const mpq_class& ref) {
  return iv.lower() <= ref + kUlp50 && iv.upper() >= ref - kUlp50;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

std::vector<std::string> fractions(const std::vector<RationalApprox>& cs) {
  std::vector<std::string> out;
  for (const auto& c : cs) out.push_back(c.r.get_str() + "/" + c.s.get_str());
  return out;
}

}  // namespace

TEST_CASE("dyadic interval arithmetic rounds outward") {
  const auto third = DyadicInterval::from_rational(mpq_class(1, 3), 30);
  CHECK(third.contains(mpq_class(1, 3)));
  CHECK(third.width_at_most(30));
  const auto sum = third + third + third;
  CHECK(sum.contains(mpq_class(1)));
  const auto prod = DyadicInterval::multiply(third, third, 40);
  CHECK(prod.contains(mpq_class(1, 9)));
  const auto rec = third.reciprocal(40);
  CHECK(rec.contains(mpq_class(3)));
  const auto neg = (-third).reciprocal(40);
  CHECK(neg.contains(mpq_class(-3)));
  CHECK(DyadicInterval::from_rational(mpq_class(7, 2), 4).certain_floor() == mpz_class(3));
  CHECK_FALSE(DyadicInterval(mpz_class(15), mpz_class(17), 4).certain_floor().has_value());
}

TEST_CASE("pi and e enclosures contain the 50-digit references") {
  const auto pi = IrrationalNumber::pi();
  const auto e = IrrationalNumber::e();
  for (long g : {20L, 64L, 128L, 160L}) {
    const auto a = pi.enclose(g);
    CHECK(a.width_at_most(g));
    CHECK(overlaps_reference(a, kPi50));
    const auto b = e.enclose(g);
    CHECK(b.width_at_most(g));
    CHECK(overlaps_reference(b, kE50));
  }
  CHECK(pi.enclose(20).contains(mpq_class("314159265/100000000")));
}

TEST_CASE("enclosures are nested") {
  for (const char* spec : {"pi", "e", "sqrt2", "phi", "surd:1,3,7,11"}) {
    const auto x = IrrationalNumber::parse(spec);
    DyadicInterval prev = x.enclose(8);
    for (long g = 9; g <= 300; g += 7) {
      const auto cur = x.enclose(g);
      CHECK(prev.contains(cur));
      prev = cur;
    }
  }
}

TEST_CASE("quadratic surds") {
  const auto r2 = IrrationalNumber::sqrt(2);
  for (long g : {10L, 100L, 1000L}) {
    const auto iv = r2.enclose(g);
    // Integer square-root oracle: floor(sqrt(2) 2^g) lies in the enclosure grid.
    mpz_class s;
    mpz_class n = mpz_class(2) << (2 * g);
    mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
    const mpq_class lo(s, mpz_class(1) << g);
    const mpq_class hi(s + 1, mpz_class(1) << g);
    CHECK(iv.lower() <= hi);
    CHECK(iv.upper() >= lo);
  }
  CHECK(code_of([] { IrrationalNumber::sqrt(4); }) == ErrorCode::InvalidSurd);
  CHECK(code_of([] { IrrationalNumber::surd(1, 1, 0, 3); }) == ErrorCode::InvalidSurd);
  CHECK(code_of([] { IrrationalNumber::surd(1, 0, 1, 3); }) == ErrorCode::InvalidSurd);
  CHECK(code_of([] { IrrationalNumber::sqrt(-3); }) == ErrorCode::InvalidSurd);
  const auto phi = IrrationalNumber::golden_ratio();
  CHECK(phi.approx() == doctest::Approx(1.6180339887498949));
  CHECK(reciprocal(r2).kind() == IrrationalNumber::Kind::Surd);
  CHECK(reciprocal(r2).approx() == doctest::Approx(0.70710678118654752));
}

TEST_CASE("derived values") {
  const auto pi = IrrationalNumber::pi();
  const auto inv = reciprocal(pi);
  CHECK(inv.approx() == doctest::Approx(0.31830988618379067));
  const auto a = affine(pi, mpq_class(2), mpq_class(-1, 2));
  CHECK(a.approx() == doctest::Approx(2 * 3.14159265358979 - 0.5));
  const auto p = product(pi, IrrationalNumber::e());
  CHECK(p.approx() == doctest::Approx(8.5397342226735670));
  const auto iv = p.enclose(120);
  CHECK(iv.width_at_most(120));
  CHECK(iv.lower() <= kPi50 * kE50 + 10 * kUlp50);
  CHECK(iv.upper() >= kPi50 * kE50 - 10 * kUlp50);
}

TEST_CASE("digit streams") {
  const auto x = IrrationalNumber::from_digits("3.14159265358979323846264338327950288419716939937510", "pi50");
  CHECK(x.enclose(100).contains(kPi50));
  CHECK(code_of([&] { x.enclose(400); }) == ErrorCode::PrecisionExhausted);
  CHECK(code_of([] { IrrationalNumber::from_digits("3.14x", "bad"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { IrrationalNumber::from_digits("", "bad"); }) == ErrorCode::ParseError);
  const std::string path = "test_irrational_digits.txt";
  {
    std::ofstream out(path);
    out << "2.71828182845904523536028747135266249775724709369995\n";
  }
  const auto e = IrrationalNumber::parse("file:" + path);
  CHECK(e.enclose(120).contains(kE50));
  std::remove(path.c_str());
}

TEST_CASE("parse") {
  CHECK(IrrationalNumber::parse("pi").kind() == IrrationalNumber::Kind::Pi);
  CHECK(IrrationalNumber::parse("e").kind() == IrrationalNumber::Kind::E);
  CHECK(IrrationalNumber::parse("sqrt3").approx() == doctest::Approx(1.7320508075688772));
  CHECK(IrrationalNumber::parse("surd:1,1,2,5").approx() == doctest::Approx(1.6180339887498949));
  CHECK(code_of([] { IrrationalNumber::parse("tau"); }) == ErrorCode::ParseError);
  CHECK(std::holds_alternative<mpq_class>(parse_real("3/7")));
  CHECK(std::get<mpq_class>(parse_real("0.25")) == mpq_class(1, 4));
  CHECK(std::holds_alternative<IrrationalNumber>(parse_real("pi")));
}

TEST_CASE("frac_linear") {
  const auto r2 = IrrationalNumber::sqrt(2);
  const auto f = frac_linear(r2, 2, mpq_class(0), 60);
  CHECK_FALSE(f.wrapped());
  CHECK(f.high.width_at_most(60));
  CHECK(f.high.mid_double() == doctest::Approx(0.8284271247461903));
  const auto fp = frac_linear(IrrationalNumber::pi(), 1, mpq_class(0), 60);
  CHECK(overlaps_reference(fp.high, kPi50 - 3));
  CHECK(fp.high.mid_double() == doctest::Approx(0.14159265358979323));
  const auto z = frac_linear(r2, 0, mpq_class(0), 60);
  CHECK(z.high.lower() == 0);
  CHECK(z.high.upper() == 0);
  const auto big = frac_linear(IrrationalNumber::pi(), mpz_class("4611686018427387904"), mpq_class(1, 3), 40);
  CHECK(big.high.width_at_most(40));
}

TEST_CASE("convergents") {
  CHECK(fractions(convergents(IrrationalNumber::sqrt(2), 4)) ==
        std::vector<std::string>{"1/1", "3/2", "7/5", "17/12"});
  CHECK(fractions(convergents(IrrationalNumber::pi(), 4)) ==
        std::vector<std::string>{"3/1", "22/7", "333/106", "355/113"});
  CHECK(fractions(convergents(IrrationalNumber::golden_ratio(), 5)) ==
        std::vector<std::string>{"1/1", "2/1", "3/2", "5/3", "8/5"});
  CHECK(fractions(convergents(IrrationalNumber::e(), 6)) ==
        std::vector<std::string>{"2/1", "3/1", "8/3", "11/4", "19/7", "87/32"});
  CHECK(abs(kPi50 - mpq_class(355, 113)) < mpq_class(1, 113 * 113));
}

TEST_CASE("convergent law and certified gaps") {
  for (const char* spec : {"pi", "e", "sqrt2", "sqrt7", "phi"}) {
    const auto x = IrrationalNumber::parse(spec);
    const auto cs = convergents(x, 60);
    const auto iv = x.enclose(1200);
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      const mpq_class q(cs[i].r, cs[i].s);
      CHECK(gcd(cs[i].r, cs[i].s) == 1);
      CHECK(cs[i].gap < mpq_class(1, cs[i].s * cs[i].s));
      const mpq_class bound(1, cs[i].s * cs[i + 1].s);
      // |x - r/s| < 1/(s s') holds for every point of the enclosure.
      CHECK(abs(iv.upper() - q) < bound);
      CHECK(abs(iv.lower() - q) < bound);
      CHECK(abs(iv.upper() - q) <= cs[i].gap);
    }
  }
}

TEST_CASE("convergent budgets") {
  CHECK(convergents(IrrationalNumber::sqrt(3), 10000).size() == 10000);
  CHECK(code_of([] { convergents(IrrationalNumber::sqrt(3), 10001); }) == ErrorCode::BudgetExceeded);
  CHECK(code_of([] { convergents(IrrationalNumber::pi(256), 500); }) == ErrorCode::PrecisionExhausted);
}

TEST_CASE("good approximations") {
  const auto pi = IrrationalNumber::pi();
  const auto a = good_approx(pi, 10, 1e4);
  REQUIRE(a.has_value());
  CHECK(a->r == 355);
  CHECK(a->s == 113);
  const auto b = good_approx(IrrationalNumber::sqrt(2), 2, 100);
  REQUIRE(b.has_value());
  CHECK(b->s > 2);
  CHECK(b->s < 50);
  CHECK(b->s == 29);
  CHECK_FALSE(good_approx(pi, 200, 1e4).has_value());
  CHECK(code_of([&] { good_approx(pi, 1, 100); }) == ErrorCode::InvalidArgument);
  // Def 2.1 inequality against an independent enclosure.
  const auto iv = pi.enclose(300);
  CHECK(abs(iv.upper() - mpq_class(a->r, a->s)) < mpq_class(1, a->s * a->s));
}

TEST_CASE("type estimates") {
  const mpz_class Q(1'000'000);
  const auto r2 = estimate_type(IrrationalNumber::sqrt(2), Q);
  CHECK(r2.tau_hat >= 0.99);
  CHECK(r2.tau_hat <= 1.01);
  const auto phi = estimate_type(IrrationalNumber::golden_ratio(), Q);
  CHECK(phi.tau_hat >= 0.99);
  CHECK(phi.tau_hat <= 1.01);
  const auto pi = estimate_type(IrrationalNumber::pi(), Q);
  CHECK(pi.tau_hat >= 1 - 1e-6);
  CHECK(code_of([] { estimate_type(IrrationalNumber::pi(), 9); }) == ErrorCode::InvalidArgument);
}
