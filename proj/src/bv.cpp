#include "chebeatty/bv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chebeatty/error.hpp"
#include "chebeatty/numeric.hpp"
#include "chebeatty/primes.hpp"

namespace chebeatty::bv {
namespace {

struct Prime {
  std::uint64_t p;
  bool joint;
};

// Running state of one modulus. Between changes of its counters the error
// is monotone in pi(y), so it is enough to evaluate at the first and last
// prime of every stretch where the counters are constant.
struct Modulus {
  std::uint64_t q = 1;
  std::uint64_t phi = 1;
  double c = 0.0;
  std::vector<std::uint32_t> count;  // by residue, 0 for non-coprime residues
  std::vector<std::uint8_t> coprime;
  std::vector<std::uint32_t> hist;   // hist[v] = coprime residues with count v
  std::uint32_t min_count = 0;
  std::uint32_t max_count = 0;
  std::uint64_t last_eval = 0;       // prime index of the last evaluation
  BVRow best;
  double best_abs = 0.0;

  double error_at(std::uint32_t v, std::uint64_t pi) const {
    return static_cast<double>(v) - c * static_cast<double>(pi);
  }

  void evaluate(std::uint64_t y, std::uint64_t pi) {
    last_eval = pi;
    const double hi = std::abs(error_at(max_count, pi));
    const double lo = std::abs(error_at(min_count, pi));
    const double m = std::max(hi, lo);
    if (!(m > best_abs)) return;
    best_abs = m;
    best.y = y;
    best.error = m;
    for (std::uint64_t a = 0; a < q; ++a) {
      if (!coprime[a]) continue;
      if (std::abs(error_at(count[a], pi)) == m) {
        best.a = a;
        break;
      }
    }
  }

  void bump(std::uint64_t r) {
    const std::uint32_t v = count[r]++;
    --hist[v];
    if (hist.size() <= v + 1) hist.resize(v + 2, 0);
    ++hist[v + 1];
    if (v + 1 > max_count) max_count = v + 1;
    while (hist[min_count] == 0) ++min_count;
  }
};

Modulus make_modulus(std::uint64_t q, double c) {
  Modulus m;
  m.q = q;
  m.c = c;
  m.count.assign(q, 0);
  m.coprime.assign(q, 0);
  m.phi = 0;
  for (std::uint64_t a = 0; a < q; ++a) {
    if (std::gcd(a, q) == 1) {
      m.coprime[a] = 1;
      ++m.phi;
    }
  }
  m.hist.assign(2, 0);
  m.hist[0] = static_cast<std::uint32_t>(m.phi);
  m.best.q = q;
  m.best.phi = m.phi;
  m.best.y = 1;
  m.best.a = q == 1 ? 0 : 1;
  return m;
}

void run_moduli(std::vector<Modulus>& mods, const std::vector<Prime>& ps) {
  for (auto& m : mods) {
    std::uint64_t prev = 1;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const std::uint64_t idx = i + 1;
      const std::uint64_t p = ps[i].p;
      if (idx == 1) {
        // The stretch starting at the first prime.
      } else if (ps[i].joint && m.coprime[p % m.q] && m.last_eval < idx - 1) {
        m.evaluate(prev, idx - 1);
      }
      if (ps[i].joint && m.coprime[p % m.q]) {
        m.bump(p % m.q);
        m.evaluate(p, idx);
      } else if (idx == 1) {
        m.evaluate(p, idx);
      }
      prev = p;
    }
    if (!ps.empty() && m.last_eval < ps.size()) m.evaluate(prev, ps.size());
  }
}

}  // namespace

std::uint64_t modulus_limit(std::uint64_t x, double theta) {
  auto Q = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(x), theta)));
  auto pow_le = [&](std::uint64_t v) {
    return std::log(static_cast<double>(v)) <= theta * std::log(static_cast<double>(x)) + 1e-12;
  };
  while (Q > 1 && !pow_le(Q)) --Q;
  while (pow_le(Q + 1)) ++Q;
  return std::max<std::uint64_t>(Q, 1);
}

double expected_density(const galois::GaloisContext& ctx, std::size_t class_index,
                        const BeattyParams* beatty, std::uint64_t q) {
  const double alpha = beatty ? beatty->alpha().approx() : 1.0;
  return static_cast<double>(ctx.classes().at(class_index).size) /
         (alpha * static_cast<double>(euler_phi(q)) * static_cast<double>(ctx.group_order()));
}

BVReport bv_sum(std::uint64_t x, double theta, const galois::GaloisContext& ctx,
                std::size_t class_index, const BeattyParams* beatty, double A,
                const BVOptions& options) {
  if (x > options.max_x) {
    raise(ErrorCode::BudgetExceeded,
          "x = " + std::to_string(x) + " exceeds the exact-mode cap " + std::to_string(options.max_x));
  }
  if (x < 2) raise(ErrorCode::InvalidArgument, "x must be at least 2");
  if (!(theta > 0.0) || !(theta < 0.5)) raise(ErrorCode::InvalidArgument, "theta must lie in (0, 1/2)");
  if (class_index >= ctx.classes().size()) raise(ErrorCode::InvalidArgument, "class index out of range");

  BVReport rep;
  rep.x = x;
  rep.theta = theta;
  rep.Q = modulus_limit(x, theta);
  rep.A = A;
  rep.label = ctx.classes()[class_index].label;
  rep.mode = beatty ? "beatty" : "classical";
  rep.filter = "gcd(q, f_ab) = 1 with f_ab = " + std::to_string(ctx.f_ab());
  rep.note =
      "advisory: the (log x)^-A saving is asymptotic; normalized values are reported without "
      "pass/fail";

  std::vector<std::uint64_t> included;
  std::uint64_t counters = 0;
  for (std::uint64_t q = 1; q <= rep.Q; ++q) {
    if (std::gcd(q, ctx.f_ab()) != 1) {
      rep.skipped_moduli.push_back(q);
      continue;
    }
    included.push_back(q);
    counters += q;
  }
  if (counters > options.max_counters) {
    raise(ErrorCode::MemoryBudget, std::to_string(counters) + " counters exceed the limit " +
                                       std::to_string(options.max_counters));
  }

  const std::uint64_t span = std::uint64_t{1} << 22;
  const std::size_t chunks = static_cast<std::size_t>((x - 1 + span - 1) / span);
  auto parts = primes::run_chunks(2, x + 1, chunks, options.workers,
                                  [&](std::uint64_t lo, std::uint64_t hi) {
                                    std::vector<Prime> out;
                                    primes::for_each_prime(lo, hi, [&](std::uint64_t p) {
                                      bool joint = !beatty || beatty->is_member(p);
                                      if (joint) {
                                        const auto c = ctx.artin_class(p);
                                        joint = c && *c == class_index;
                                      }
                                      out.push_back({p, joint});
                                    });
                                    return out;
                                  });
  std::vector<Prime> ps;
  for (auto& part : parts) ps.insert(ps.end(), part.begin(), part.end());

  // Partition the moduli into contiguous groups; each group streams the
  // prime list independently.
  const unsigned workers = std::max(1u, options.workers);
  const std::size_t groups = std::min<std::size_t>(workers, included.size());
  auto results = primes::run_chunks(
      0, groups, groups, workers, [&](std::uint64_t g, std::uint64_t) {
        std::vector<Modulus> mods;
        for (std::size_t i = g; i < included.size(); i += groups) {
          mods.push_back(make_modulus(included[i],
                                      expected_density(ctx, class_index, beatty, included[i])));
        }
        run_moduli(mods, ps);
        std::vector<BVRow> rows;
        for (auto& m : mods) rows.push_back(m.best);
        return rows;
      });
  for (auto& r : results) rep.rows.insert(rep.rows.end(), r.begin(), r.end());
  std::sort(rep.rows.begin(), rep.rows.end(), [](const BVRow& a, const BVRow& b) { return a.q < b.q; });

  double total = 0.0;
  for (const auto& r : rep.rows) total += r.error;
  rep.total = total;
  const double L = std::log(static_cast<double>(x));
  rep.normalized = total * std::pow(L, A) / static_cast<double>(x);
  return rep;
}

LevelConstants level_constants(unsigned d, const mpq_class& tau, std::uint64_t group_order) {
  if (d < 1) raise(ErrorCode::InvalidArgument, "d must be >= 1");
  if (tau < 1) raise(ErrorCode::InvalidArgument, "tau must be >= 1");
  if (group_order < 1) raise(ErrorCode::InvalidArgument, "group order must be positive");
  mpz_class ten_d;
  mpz_ui_pow_ui(ten_d.get_mpz_t(), 10, d);
  LevelConstants c;
  c.theta_level = 1 / (mpq_class(125) * ten_d * d * (d + 1) * tau);
  c.theta_level.canonicalize();
  c.kappa = 1 / (mpq_class(125) * ten_d * d * tau);
  c.kappa.canonicalize();
  const mpq_class a = 125 * tau;
  const mpq_class b(20 * d);
  c.eta = 1 / (mpq_class(ten_d) * (a > b ? a : b));
  c.eta.canonicalize();
  const mpq_class two_over(2, group_order);
  mpq_class g = two_over;
  g.canonicalize();
  c.theta_MM = g < mpq_class(1, 2) ? g : mpq_class(1, 2);
  return c;
}

}  // namespace chebeatty::bv
