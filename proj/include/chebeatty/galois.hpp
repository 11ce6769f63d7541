#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chebeatty/polynomial.hpp"

namespace chebeatty::galois {

struct ConjugacyClass {
  std::string label;
  std::uint64_t size = 0;
  // Degree over Q of the field fixed by a class representative.
  unsigned d = 1;
  std::vector<std::vector<unsigned>> patterns;  // each sorted ascending
};

// A Galois extension L/Q described by a defining polynomial and a class
// table keyed by factorization pattern.
class GaloisContext {
 public:
  static constexpr int kSchemaVersion = 1;

  // Parses and validates the JSON text of a context file.
  static GaloisContext parse(const std::string& text, const std::string& origin = "<string>");
  static GaloisContext load(const std::string& path);
  // Resolves a bare name such as "s3_x3m2" against the shipped contexts,
  // otherwise treats the argument as a path.
  static GaloisContext resolve(const std::string& name_or_path);
  // x^3 - 2 with Galois group S_3.
  static GaloisContext s3_x3m2();

  const std::string& name() const { return name_; }
  const IntPoly& polynomial() const { return poly_; }
  const mpz_class& poly_discriminant() const { return disc_f_; }
  std::uint64_t group_order() const { return group_order_; }
  const mpz_class& disc_L() const { return disc_L_; }
  std::uint64_t f_ab() const { return f_ab_; }
  const std::vector<ConjugacyClass>& classes() const { return classes_; }
  const std::vector<std::uint64_t>& ramified() const { return ramified_; }

  bool is_ramified(std::uint64_t p) const;
  // Index of the class with this label; throws InvalidArgument if unknown.
  std::size_t class_index(const std::string& label) const;

  // Class of Frobenius at p, or nullopt when p is ramified.
  std::optional<std::size_t> artin_class(std::uint64_t p) const;

  std::string to_json() const;

 private:
  void validate();

  std::string name_;
  IntPoly poly_;
  mpz_class disc_f_;
  std::uint64_t group_order_ = 0;
  mpz_class disc_L_;
  std::uint64_t f_ab_ = 1;
  std::vector<ConjugacyClass> classes_;
  std::vector<std::uint64_t> ramified_;
  std::vector<std::pair<std::vector<unsigned>, std::size_t>> lookup_;
};

// Label of artin_class(p, ctx) or "ramified".
std::string artin_label(std::uint64_t p, const GaloisContext& ctx);

// Distinct prime factors of |n| (trial division plus a primality check on
// the cofactor). Throws InvalidContext if the cofactor is composite and large.
std::vector<std::uint64_t> prime_divisors(const mpz_class& n);

class CharacterGroup;

// A Dirichlet character, stored as coordinates on the generators of (Z/q)*.
// Values are roots of unity e(k/N) with N the group exponent.
class DirichletCharacter {
 public:
  std::uint64_t modulus() const;
  std::size_t index() const { return index_; }
  // Multiplicative order of the character.
  std::uint64_t order() const;
  bool is_principal() const { return index_ == 0; }
  // k with chi(n) = e(k/N), or -1 when gcd(n, q) > 1.
  std::int64_t exponent(std::uint64_t n) const;
  std::uint64_t exponent_modulus() const;
  std::complex<double> operator()(std::uint64_t n) const;
  // Exponents for n = 0..q-1.
  std::vector<std::int64_t> table() const;
  const std::vector<std::uint64_t>& coordinates() const { return coords_; }

 private:
  friend class CharacterGroup;
  std::shared_ptr<const CharacterGroup> group_;
  std::size_t index_ = 0;
  std::vector<std::uint64_t> coords_;
};

class CharacterGroup : public std::enable_shared_from_this<CharacterGroup> {
 public:
  static constexpr std::uint64_t kMaxModulus = 100'000;

  static std::shared_ptr<const CharacterGroup> make(std::uint64_t q);

  std::uint64_t modulus() const { return q_; }
  std::size_t size() const { return size_; }
  std::uint64_t exponent_modulus() const { return N_; }
  DirichletCharacter character(std::size_t index) const;
  std::vector<DirichletCharacter> all() const;

  // Discrete logs of n on each generator, or nullopt when gcd(n, q) > 1.
  std::optional<std::vector<std::uint64_t>> logs(std::uint64_t n) const;
  std::int64_t exponent(const std::vector<std::uint64_t>& coords, std::uint64_t n) const;
  std::complex<double> root(std::uint64_t k) const;

  // sum over chi of chi(a) conj(chi(b)), evaluated exactly in root-of-unity
  // arithmetic. Requires gcd(ab, q) = 1.
  std::int64_t orthogonality_sum(std::uint64_t a, std::uint64_t b) const;

  struct Component {
    std::uint64_t modulus;    // prime power dividing q
    std::uint64_t order;      // order of the generator
    std::uint64_t generator;  // residue mod `modulus`; 0 marks the sign of 2^e
    std::vector<std::int64_t> log;  // log[n mod modulus], -1 off the subgroup
  };
  const std::vector<Component>& components() const { return comps_; }

 private:
  explicit CharacterGroup(std::uint64_t q);
  std::uint64_t q_;
  std::size_t size_ = 1;
  std::uint64_t N_ = 1;
  std::vector<Component> comps_;
  std::vector<std::complex<double>> roots_;
};

std::vector<DirichletCharacter> character_group(std::uint64_t q);

}  // namespace chebeatty::galois
