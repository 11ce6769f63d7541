#include <doctest.h>

#include <cmath>
#include <numeric>

#include "chebeatty/error.hpp"
#include "chebeatty/galois.hpp"
#include "chebeatty/primes.hpp"

using namespace chebeatty;
using namespace chebeatty::galois;

namespace {

using Poly = std::vector<std::int64_t>;  // mod p, constant term first, monic

Poly trim(Poly f) {
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  return f;
}

// Remainder and quotient of f by monic g over F_p.
std::pair<Poly, Poly> divmod(Poly f, const Poly& g, std::int64_t p) {
  const std::size_t dg = g.size() - 1;
  if (f.size() <= dg) return {Poly{0}, f};
  Poly q(f.size() - dg, 0);
  for (std::size_t i = f.size(); i-- > dg;) {
    const std::int64_t c = f[i] % p;
    q[i - dg] = c;
    for (std::size_t j = 0; j <= dg; ++j) f[i - dg + j] = ((f[i - dg + j] - c * g[j]) % p + p) % p;
  }
  f.resize(dg == 0 ? 1 : dg);
  return {q, trim(f)};
}

// Factor degrees by trial division over every monic polynomial, smallest degree first.
std::vector<unsigned> brute_pattern(const Poly& f0, std::int64_t p) {
  Poly f = f0;
  for (auto& c : f) c = ((c % p) + p) % p;
  std::vector<unsigned> out;
  for (unsigned d = 1; 2 * d <= f.size() - 1;) {
    bool found = false;
    std::int64_t count = 1;
    for (unsigned i = 0; i < d; ++i) count *= p;
    for (std::int64_t code = 0; code < count && !found; ++code) {
      Poly g(d + 1, 0);
      std::int64_t c = code;
      for (unsigned i = 0; i < d; ++i) {
        g[i] = c % p;
        c /= p;
      }
      g[d] = 1;
      auto [q, r] = divmod(f, g, p);
      if (r.size() == 1 && r[0] == 0) {
        out.push_back(d);
        f = q;
        found = true;
      }
    }
    if (!found) ++d;
  }
  if (f.size() > 1) out.push_back(static_cast<unsigned>(f.size() - 1));
  std::sort(out.begin(), out.end());
  return out;
}

IntPoly to_int(const Poly& f) {
  IntPoly g;
  for (auto c : f) g.emplace_back(static_cast<long>(c));
  return g;
}

}  // namespace

TEST_CASE("discriminants") {
  CHECK(discriminant(to_int({-2, 0, 0, 1})) == -108);
  CHECK(discriminant(to_int({-1, -1, 0, 1})) == -23);
  CHECK(discriminant(to_int({-1, -1, 0, 0, 1})) == -283);
  // b^2 - 4c for a monic quadratic
  CHECK(discriminant(to_int({3, 5, 1})) == 13);
}

TEST_CASE("documented patterns for x^3 - 2") {
  const IntPoly f = to_int({-2, 0, 0, 1});
  CHECK(factorization_pattern(f, 5) == std::vector<unsigned>{1, 2});
  CHECK(factorization_pattern(f, 7) == std::vector<unsigned>{3});
  CHECK(factorization_pattern(f, 31) == std::vector<unsigned>{1, 1, 1});
  CHECK_THROWS_AS(factorization_pattern(f, 3), Error);
}

TEST_CASE("patterns agree with trial-division factorization") {
  const std::vector<Poly> polys = {{-2, 0, 0, 1}, {-1, -1, 0, 1}, {-1, -1, 0, 0, 1}, {1, 0, 0, 0, 1}};
  for (const auto& f : polys) {
    const IntPoly F = to_int(f);
    const mpz_class disc = discriminant(F);
    for (std::uint64_t p : primes::sieve_range(2, 200)) {
      if (disc % static_cast<unsigned long>(p) == 0) continue;
      CHECK(factorization_pattern(F, p) == brute_pattern(f, static_cast<std::int64_t>(p)));
    }
  }
}

TEST_CASE("S3 context") {
  const auto ctx = GaloisContext::s3_x3m2();
  CHECK(ctx.group_order() == 6);
  CHECK(ctx.disc_L() == -34992);  // -2^4 3^7
  CHECK(ctx.f_ab() == 3);
  CHECK(ctx.ramified() == std::vector<std::uint64_t>{2, 3});
  CHECK(ctx.classes().size() == 3);
  CHECK(ctx.classes()[ctx.class_index("(12)")].d == 3);
  CHECK(artin_label(2, ctx) == "ramified");
  CHECK(artin_label(3, ctx) == "ramified");
  CHECK(artin_label(5, ctx) == "(12)");
  CHECK(artin_label(7, ctx) == "(123)");
  CHECK(artin_label(31, ctx) == "e");
  // Roots of x^3 - 2 mod p decide the class for an irreducible cubic.
  for (std::uint64_t p : primes::sieve_range(5, 5000)) {
    unsigned roots = 0;
    for (std::uint64_t x = 0; x < p; ++x) roots += (x * x % p * x % p) == 2 % p;
    const std::string expect = roots == 3 ? "e" : roots == 1 ? "(12)" : "(123)";
    CHECK(artin_label(p, ctx) == expect);
  }
  CHECK(GaloisContext::resolve("s3_x3m2").to_json() == ctx.to_json());
  CHECK(GaloisContext::parse(ctx.to_json()).to_json() == ctx.to_json());
  CHECK_THROWS_AS(ctx.class_index("(1234)"), Error);
}

TEST_CASE("context validation") {
  const std::string good = GaloisContext::s3_x3m2().to_json();
  auto code_of = [](const std::string& text) {
    try {
      GaloisContext::parse(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of("{not json") == ErrorCode::InvalidContext);
  CHECK(code_of(R"j({"schema_version": 2})j") == ErrorCode::InvalidContext);
  // Sizes that do not sum to |G|.
  CHECK(code_of(R"j({"schema_version":1,"name":"x","polynomial":[-2,0,0,1],"group_order":6,
    "disc_L":-34992,"f_ab":3,"classes":[{"label":"e","size":1,"d":6,"patterns":[[1,1,1]]},
    {"label":"(12)","size":2,"d":3,"patterns":[[1,2]]},{"label":"(123)","size":2,"d":2,"patterns":[[3]]}]})j") ==
        ErrorCode::InvalidContext);
  // One pattern claimed by two classes.
  CHECK(code_of(R"j({"schema_version":1,"name":"x","polynomial":[-2,0,0,1],"group_order":6,
    "disc_L":-34992,"f_ab":3,"classes":[{"label":"e","size":1,"d":6,"patterns":[[1,1,1]]},
    {"label":"(12)","size":3,"d":3,"patterns":[[1,2]]},{"label":"(123)","size":2,"d":2,"patterns":[[1,2]]}]})j") ==
        ErrorCode::InvalidContext);
  // Unknown key.
  CHECK(code_of(R"j({"schema_version":1,"name":"x","colour":1})j") == ErrorCode::InvalidContext);
  CHECK_THROWS_AS(GaloisContext::resolve("no_such_context"), Error);
}

TEST_CASE("unlisted pattern") {
  // Only the split class is declared, so an inert prime has no class.
  const std::string text = R"j({"schema_version":1,"name":"x","polynomial":[-2,0,0,1],"group_order":1,
    "disc_L":-34992,"f_ab":3,"classes":[{"label":"e","size":1,"d":6,"patterns":[[1,1,1]]}]})j";
  const auto ctx = GaloisContext::parse(text);
  CHECK(artin_label(31, ctx) == "e");
  try {
    ctx.artin_class(7);
    FAIL("expected PatternNotClassified");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PatternNotClassified);
  }
}

TEST_CASE("character group sizes") {
  for (std::uint64_t q = 1; q <= 200; ++q) {
    std::uint64_t phi = 0;
    for (std::uint64_t a = 1; a <= q; ++a) phi += std::gcd(a, q) == 1;
    CHECK(CharacterGroup::make(q)->size() == phi);
    CHECK(character_group(q).size() == phi);
  }
}

TEST_CASE("characters mod 4 and 5") {
  const auto c4 = character_group(4);
  REQUIRE(c4.size() == 2);
  CHECK(std::abs(c4[1](3) - std::complex<double>(-1, 0)) < 1e-15);
  CHECK(std::abs(c4[1](1) - std::complex<double>(1, 0)) < 1e-15);
  CHECK(c4[1](2) == std::complex<double>(0, 0));
  const auto c5 = character_group(5);
  REQUIRE(c5.size() == 4);
  for (const auto& chi : c5) {
    for (std::uint64_t n = 1; n < 5; ++n) CHECK(std::abs(std::pow(chi(n), 4) - 1.0) < 1e-12);
  }
}

TEST_CASE("multiplicativity, vanishing and orthogonality") {
  for (std::uint64_t q = 1; q <= 60; ++q) {
    const auto chars = character_group(q);
    const double phi = static_cast<double>(chars.size());
    for (const auto& chi : chars) {
      for (std::uint64_t m = 0; m < q; ++m) {
        if (std::gcd(m, q) != 1) {
          if (q > 1) CHECK(chi(m) == std::complex<double>(0, 0));
          continue;
        }
        for (std::uint64_t n = 0; n < q; ++n) {
          CHECK(std::abs(chi(m * n % q) - chi(m) * chi(n)) < 1e-12);
        }
      }
      // Row orthogonality: sum over residues.
      std::complex<double> s = 0;
      for (std::uint64_t n = 0; n < q; ++n) s += chi(n);
      CHECK(std::abs(s - (chi.is_principal() ? phi : 0.0)) < 1e-9);
    }
    const auto group = CharacterGroup::make(q);
    for (std::uint64_t a = 1; a <= q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      for (std::uint64_t b = 1; b <= q; ++b) {
        if (std::gcd(b, q) != 1) continue;
        std::complex<double> s = 0;
        for (const auto& chi : chars) s += chi(a) * std::conj(chi(b));
        const double expect = (a % q == b % q) ? phi : 0.0;
        CHECK(std::abs(s - expect) < 1e-9);
        CHECK(group->orthogonality_sum(a, b) == static_cast<std::int64_t>(expect));
      }
    }
  }
}

TEST_CASE("distinct characters") {
  for (std::uint64_t q : {8ULL, 12ULL, 15ULL, 16ULL, 24ULL}) {
    const auto chars = character_group(q);
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = i + 1; j < chars.size(); ++j) {
        CHECK(chars[i].table() != chars[j].table());
      }
    }
  }
}
