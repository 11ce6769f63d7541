#include <algorithm>
#include <numeric>

#include "chebeatty/error.hpp"
#include "chebeatty/galois.hpp"
#include "chebeatty/numeric.hpp"

namespace chebeatty::galois {
namespace {

std::vector<std::uint64_t> small_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t primitive_root_mod_prime(std::uint64_t p) {
  if (p == 2) return 1;
  const auto fac = small_prime_factors(p - 1);
  for (std::uint64_t g = 2;; ++g) {
    bool ok = true;
    for (std::uint64_t f : fac) ok = ok && powmod(g, (p - 1) / f, p) != 1;
    if (ok) return g;
  }
}

// Discrete logs of the cyclic subgroup generated by g mod m.
std::vector<std::int64_t> log_table(std::uint64_t m, std::uint64_t g, std::uint64_t order) {
  std::vector<std::int64_t> log(m, -1);
  std::uint64_t x = 1 % m;
  for (std::uint64_t i = 0; i < order; ++i) {
    log[x] = static_cast<std::int64_t>(i);
    x = x * g % m;
  }
  return log;
}

}  // namespace

CharacterGroup::CharacterGroup(std::uint64_t q) : q_(q) {
  std::uint64_t rest = q;
  unsigned e2 = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++e2;
  }
  if (e2 >= 2) {
    const std::uint64_t m = std::uint64_t{1} << e2;
    Component sign{m, 2, 0, std::vector<std::int64_t>(m, -1)};
    for (std::uint64_t n = 1; n < m; n += 2) sign.log[n] = (n % 4 == 1) ? 0 : 1;
    comps_.push_back(std::move(sign));
    if (e2 >= 3) {
      const std::uint64_t ord = m / 4;
      Component five{m, ord, 5, log_table(m, 5, ord)};
      for (std::uint64_t n = 3; n < m; n += 4) five.log[n] = five.log[m - n];
      comps_.push_back(std::move(five));
    }
  }
  for (std::uint64_t p : small_prime_factors(rest)) {
    std::uint64_t m = 1;
    while (rest % p == 0) {
      rest /= p;
      m *= p;
    }
    std::uint64_t g = primitive_root_mod_prime(p);
    if (m != p && powmod(g, p - 1, p * p) == 1) g += p;
    const std::uint64_t ord = m / p * (p - 1);
    comps_.push_back({m, ord, g, log_table(m, g, ord)});
  }
  for (const auto& c : comps_) {
    size_ *= c.order;
    N_ = std::lcm(N_, c.order);
  }
  roots_.resize(N_);
  for (std::uint64_t k = 0; k < N_; ++k) {
    roots_[k] = unit_phase(static_cast<double>(k) / static_cast<double>(N_));
  }
}

std::shared_ptr<const CharacterGroup> CharacterGroup::make(std::uint64_t q) {
  if (q < 1) raise(ErrorCode::InvalidArgument, "character modulus must be >= 1");
  if (q > kMaxModulus) {
    raise(ErrorCode::BudgetExceeded, "character modulus " + std::to_string(q) + " exceeds 10^5");
  }
  return std::shared_ptr<const CharacterGroup>(new CharacterGroup(q));
}

DirichletCharacter CharacterGroup::character(std::size_t index) const {
  if (index >= size_) raise(ErrorCode::InvalidArgument, "character index out of range");
  DirichletCharacter chi;
  chi.group_ = shared_from_this();
  chi.index_ = index;
  std::size_t rest = index;
  for (const auto& c : comps_) {
    chi.coords_.push_back(rest % c.order);
    rest /= c.order;
  }
  return chi;
}

std::vector<DirichletCharacter> CharacterGroup::all() const {
  std::vector<DirichletCharacter> out;
  out.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) out.push_back(character(i));
  return out;
}

std::optional<std::vector<std::uint64_t>> CharacterGroup::logs(std::uint64_t n) const {
  if (std::gcd(n % q_, q_) != 1) return std::nullopt;
  std::vector<std::uint64_t> out;
  out.reserve(comps_.size());
  for (const auto& c : comps_) out.push_back(static_cast<std::uint64_t>(c.log[n % c.modulus]));
  return out;
}

std::int64_t CharacterGroup::exponent(const std::vector<std::uint64_t>& coords,
                                      std::uint64_t n) const {
  if (std::gcd(n % q_, q_) != 1) return -1;
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    const auto l = static_cast<std::uint64_t>(c.log[n % c.modulus]);
    k = (k + coords[i] * l % c.order * (N_ / c.order)) % N_;
  }
  return static_cast<std::int64_t>(k);
}

std::complex<double> CharacterGroup::root(std::uint64_t k) const { return roots_[k % N_]; }

std::int64_t CharacterGroup::orthogonality_sum(std::uint64_t a, std::uint64_t b) const {
  const auto oa = logs(a);
  const auto ob = logs(b);
  if (!oa || !ob) raise(ErrorCode::InvalidArgument, "arguments must be coprime to q");
  const auto& la = *oa;
  const auto& lb = *ob;
  std::vector<std::uint64_t> hist(N_, 0);
  for (std::size_t idx = 0; idx < size_; ++idx) {
    std::size_t rest = idx;
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
      const auto& c = comps_[i];
      const std::uint64_t coord = rest % c.order;
      rest /= c.order;
      const std::uint64_t diff = (la[i] + c.order - lb[i]) % c.order;
      k = (k + coord * diff % c.order * (N_ / c.order)) % N_;
    }
    ++hist[k];
  }
  if (hist[0] == size_) return static_cast<std::int64_t>(size_);
  // Otherwise the differences fill a nontrivial subgroup sZ/NZ evenly, and
  // the roots of unity of a nontrivial subgroup sum to zero.
  std::uint64_t step = 0;
  for (std::uint64_t k = 1; k < N_; ++k) {
    if (hist[k]) {
      step = k;
      break;
    }
  }
  if (step == 0 || N_ % step != 0) raise(ErrorCode::InvalidArgument, "character table inconsistent");
  for (std::uint64_t k = 0; k < N_; ++k) {
    const bool in_subgroup = k % step == 0;
    if ((in_subgroup && hist[k] != hist[0]) || (!in_subgroup && hist[k] != 0)) {
      raise(ErrorCode::InvalidArgument, "character table inconsistent");
    }
  }
  return 0;
}

std::uint64_t DirichletCharacter::modulus() const { return group_->modulus(); }

std::uint64_t DirichletCharacter::order() const {
  std::uint64_t ord = 1;
  const auto& comps = group_->components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::uint64_t o = comps[i].order;
    ord = std::lcm(ord, o / std::gcd(coords_[i], o));
  }
  return ord;
}

std::int64_t DirichletCharacter::exponent(std::uint64_t n) const {
  return group_->exponent(coords_, n);
}

std::uint64_t DirichletCharacter::exponent_modulus() const { return group_->exponent_modulus(); }

std::complex<double> DirichletCharacter::operator()(std::uint64_t n) const {
  const std::int64_t k = exponent(n);
  if (k < 0) return {0.0, 0.0};
  return group_->root(static_cast<std::uint64_t>(k));
}

std::vector<std::int64_t> DirichletCharacter::table() const {
  std::vector<std::int64_t> t(modulus());
  for (std::uint64_t n = 0; n < t.size(); ++n) t[n] = exponent(n);
  return t;
}

std::vector<DirichletCharacter> character_group(std::uint64_t q) {
  return CharacterGroup::make(q)->all();
}

}  // namespace chebeatty::galois
