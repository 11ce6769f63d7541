#include "chebeatty/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chebeatty/error.hpp"
#include "chebeatty/numeric.hpp"
#include "chebeatty/primes.hpp"

namespace chebeatty::expsum {
namespace {

constexpr std::uint64_t kMaxX = 100'000'000;

void check_x(std::uint64_t X) {
  if (X > kMaxX) raise(ErrorCode::BudgetExceeded, "X = " + std::to_string(X) + " exceeds 10^8");
}

// 2^-40 of a turn on the 2^-128 grid.
constexpr u128 kPhaseTolerance = u128{1} << 88;

double turns_of(u128 v) {
  return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(v >> 75)), -53);
}

}  // namespace

Frequency Frequency::rational(const mpq_class& q) {
  Frequency f;
  f.q_ = q;
  f.q_.canonicalize();
  if (!f.q_.get_den().fits_ulong_p()) raise(ErrorCode::InvalidArgument, "denominator too large");
  f.den_ = f.q_.get_den().get_ui();
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), f.q_.get_num_mpz_t(), f.den_);
  f.num_mod_ = r.get_ui();
  return f;
}

Frequency Frequency::irrational(const IrrationalNumber& x, std::int64_t k) {
  if (k == 0) return rational(0);
  Frequency f;
  f.x_ = x;
  f.k_ = k;
  const FixedFrac fx = fixed_frac(RealValue(x));
  if (!fx.valid) raise(ErrorCode::PrecisionExhausted, "cannot fix frequency " + x.name());
  f.frac_ = fx.lo * static_cast<u128>(static_cast<__int128>(k));
  const u128 mag = static_cast<u128>(k < 0 ? -static_cast<__int128>(k) : k);
  f.err_ = fx.width >= (u128{1} << 80) ? ~u128{0} : (fx.width + 1) * mag;
  return f;
}

Frequency Frequency::from(const RealValue& v, std::int64_t k) {
  if (const auto* q = std::get_if<mpq_class>(&v)) return rational(*q * k);
  return irrational(std::get<IrrationalNumber>(v), k);
}

Frequency Frequency::negated() const {
  if (is_rational()) return rational(-q_);
  return irrational(*x_, -k_);
}

std::string Frequency::describe() const {
  if (is_rational()) return q_.get_str();
  if (k_ == 1) return x_->name();
  return std::to_string(k_) + "*" + x_->name();
}

double Frequency::phase(std::uint64_t p) const {
  if (is_rational()) {
    const auto r = static_cast<std::uint64_t>(static_cast<u128>(num_mod_) * p % den_);
    return static_cast<double>(r) / static_cast<double>(den_);
  }
  if (err_ < (u128{1} << 80) && err_ * p < kPhaseTolerance) return turns_of(frac_ * p);
  const mpz_class m = mpz_class(static_cast<unsigned long>(p)) * k_;
  const FracInterval f = frac_linear(*x_, m, RealValue(mpq_class(0)), 44);
  return f.high.mid_double();
}

std::vector<std::uint64_t> class_primes(std::uint64_t X, const galois::GaloisContext& ctx,
                                        std::size_t class_index, unsigned workers) {
  check_x(X);
  if (class_index >= ctx.classes().size()) raise(ErrorCode::InvalidArgument, "class index out of range");
  if (X < 2) return {};
  const std::uint64_t span = std::uint64_t{1} << 22;
  const std::size_t chunks = static_cast<std::size_t>((X - 1 + span - 1) / span);
  auto parts = primes::run_chunks(2, X + 1, chunks, workers, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    primes::for_each_prime(lo, hi, [&](std::uint64_t p) {
      const auto c = ctx.artin_class(p);
      if (c && *c == class_index) out.push_back(p);
    });
    return out;
  });
  std::vector<std::uint64_t> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

ExpSumResult g_sum(std::span<const std::uint64_t> ps, std::uint64_t q, std::uint64_t a,
                   const Frequency& theta) {
  if (q < 1 || std::gcd(a % q, q) != 1) raise(ErrorCode::InvalidArgument, "need gcd(a, q) = 1");
  ExpSumResult r;
  r.q = q;
  r.a = a % q;
  r.theta = theta.describe();
  r.X = ps.empty() ? 0 : ps.back();
  CompensatedComplexSum sum;
  CompensatedSum trivial;
  for (std::uint64_t p : ps) {
    if (p % q != r.a) continue;
    const double w = std::log(static_cast<double>(p));
    sum.add(w * unit_phase(theta.phase(p)));
    trivial.add(w);
    ++r.terms;
  }
  r.value = sum.value();
  r.trivial_bound = trivial.value();
  return r;
}

ExpSumResult g_sum(std::uint64_t X, const galois::GaloisContext& ctx, std::size_t class_index,
                   std::uint64_t q, std::uint64_t a, const Frequency& theta, unsigned workers) {
  const auto ps = class_primes(X, ctx, class_index, workers);
  ExpSumResult r = g_sum(ps, q, a, theta);
  r.X = X;
  return r;
}

ExpSumResult g_sum_twisted(std::span<const std::uint64_t> ps, const galois::DirichletCharacter& chi,
                           const Frequency& theta) {
  ExpSumResult r;
  r.q = chi.modulus();
  r.chi_index = chi.index();
  r.theta = theta.describe();
  r.X = ps.empty() ? 0 : ps.back();
  CompensatedComplexSum sum;
  CompensatedSum trivial;
  for (std::uint64_t p : ps) {
    const std::int64_t k = chi.exponent(p);
    if (k < 0) continue;
    const double w = std::log(static_cast<double>(p));
    sum.add(w * unit_phase(theta.phase(p)) * chi(p));
    trivial.add(w);
    ++r.terms;
  }
  r.value = sum.value();
  r.trivial_bound = trivial.value();
  return r;
}

ExpSumResult g_sum_twisted(std::uint64_t X, const galois::GaloisContext& ctx,
                           std::size_t class_index, const galois::DirichletCharacter& chi,
                           const Frequency& theta, unsigned workers) {
  const auto ps = class_primes(X, ctx, class_index, workers);
  ExpSumResult r = g_sum_twisted(ps, chi, theta);
  r.X = X;
  return r;
}

std::complex<double> orthogonality_combination(std::span<const std::uint64_t> ps, std::uint64_t q,
                                               std::uint64_t a, const Frequency& theta) {
  const auto group = galois::CharacterGroup::make(q);
  CompensatedComplexSum sum;
  for (const auto& chi : group->all()) {
    sum.add(std::conj(chi(a)) * g_sum_twisted(ps, chi, theta).value);
  }
  return sum.value() / static_cast<double>(group->size());
}

ErrorBudget error_budget(double X, double B, std::uint64_t q, unsigned d) {
  if (!(B > 1.0) || !(X > B)) raise(ErrorCode::InvalidArgument, "error_budget needs X > B > 1");
  if (d < 1) raise(ErrorCode::InvalidArgument, "d must be >= 1");
  const double L = std::log(X);
  const double eps = std::pow(10.0, -static_cast<double>(d));
  const double dd = static_cast<double>(d);
  ErrorBudget b;
  b.terms[0] = L * L * std::pow(B, -eps / 12.0);
  b.terms[1] = L * L * std::pow(X, -eps / 60.0);
  b.terms[2] = L * L * std::pow(X, -eps / 10.0);
  b.terms[3] = std::pow(L, 2.0 + dd * dd / 2.0) * std::pow(B, -1.0 / 12.0);
  b.E = b.terms[0] + b.terms[1] + b.terms[2] + b.terms[3];
  b.bound = std::pow(static_cast<double>(q), dd + 1.0) * X * b.E;
  return b;
}

double eta(unsigned d, double tau) {
  return std::pow(10.0, -static_cast<double>(d)) / std::max(125.0 * tau, 20.0 * d);
}

DecayReport decay_report(const galois::GaloisContext& ctx, std::size_t class_index,
                         const IrrationalNumber& theta_base, unsigned k_max,
                         const std::vector<std::uint64_t>& X_grid, unsigned workers) {
  if (k_max < 1 || k_max > 1000) raise(ErrorCode::InvalidArgument, "k_max must lie in [1, 1000]");
  if (X_grid.empty()) raise(ErrorCode::InvalidArgument, "empty X grid");
  std::vector<std::uint64_t> grid = X_grid;
  std::sort(grid.begin(), grid.end());
  const auto ps = class_primes(grid.back(), ctx, class_index, workers);
  DecayReport rep;
  rep.label = ctx.classes()[class_index].label;
  rep.note =
      "advisory: ratios and slopes are reported without pass/fail; the power saving is "
      "asymptotic and not observable at this scale";
  auto run = [&](const Frequency& f) {
    DecaySeries s;
    s.theta = f.describe();
    CompensatedComplexSum sum;
    CompensatedSum trivial;
    std::size_t i = 0;
    auto emit = [&](std::uint64_t X) {
      DecayRow row;
      row.theta = s.theta;
      row.X = X;
      row.abs_value = std::abs(sum.value());
      row.over_X = row.abs_value / static_cast<double>(X);
      const double t = trivial.value();
      row.over_trivial = t > 0 ? row.abs_value / t : 0.0;
      s.rows.push_back(row);
    };
    std::size_t g = 0;
    for (; i < ps.size(); ++i) {
      while (g < grid.size() && grid[g] < ps[i]) emit(grid[g++]);
      const double w = std::log(static_cast<double>(ps[i]));
      sum.add(w * unit_phase(f.phase(ps[i])));
      trivial.add(w);
    }
    while (g < grid.size()) emit(grid[g++]);
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : s.rows) {
      if (r.abs_value <= 0) continue;
      const double x = std::log(static_cast<double>(r.X));
      const double y = std::log(r.abs_value);
      n += 1;
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    if (n >= 2 && n * sxx - sx * sx > 0) s.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.series.push_back(std::move(s));
  };
  for (unsigned k = 1; k <= k_max; ++k) run(Frequency::irrational(theta_base, k));
  run(Frequency::rational(mpq_class(1, 3)));
  return rep;
}

}  // namespace chebeatty::expsum
