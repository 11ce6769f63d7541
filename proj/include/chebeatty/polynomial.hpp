#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

namespace chebeatty::galois {

// Integer polynomial, coefficients from the constant term up.
using IntPoly = std::vector<mpz_class>;

int degree(const IntPoly& f);
std::string to_string(const IntPoly& f);

// Resultant of f and g by fraction-free elimination on the Sylvester matrix.
mpz_class resultant(const IntPoly& f, const IntPoly& g);

// (-1)^(n(n-1)/2) Res(f, f') / lc(f)
mpz_class discriminant(const IntPoly& f);

// Polynomials over F_p with coefficients in [0, p), constant term first.
using FpPoly = std::vector<std::uint64_t>;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
std::uint64_t invmod(std::uint64_t a, std::uint64_t p);

FpPoly reduce(const IntPoly& f, std::uint64_t p);

// Sorted degrees of the irreducible factors of f mod p, by distinct-degree
// factorization. Throws RamifiedPrime when p divides disc(f) or lc(f).
std::vector<unsigned> factorization_pattern(const IntPoly& f, std::uint64_t p);

// Same, given disc(f) already computed.
std::vector<unsigned> factorization_pattern(const IntPoly& f, const mpz_class& disc,
                                            std::uint64_t p);

}  // namespace chebeatty::galois
