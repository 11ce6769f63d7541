// One PASS/FAIL line per acceptance criterion; indented lines carry details.
// Exit status 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "chebeatty/bv.hpp"
#include "chebeatty/density.hpp"
#include "chebeatty/error.hpp"
#include "chebeatty/expsum.hpp"
#include "chebeatty/primes.hpp"
#include "chebeatty/sieve.hpp"
#include "naive.hpp"

using namespace chebeatty;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::vector<std::string> details;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const galois::GaloisContext& ctx() {
  static const auto c = galois::GaloisContext::s3_x3m2();
  return c;
}

const BeattyParams& pi_beatty() {
  static const BeattyParams b(IrrationalNumber::pi(), mpq_class(0));
  return b;
}

constexpr double kPiD = 3.14159265358979323846;

Outcome table_rows() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto t = density::density_table(ctx(), pi_beatty(), {100, 1000, 10'000}, density::CountMode::FirstN);
  const double secs = seconds_since(t0);
  const std::vector<double> r100 = {0.35, 0.15, 0.52, 0.33, 0.10, 0.18, 0.07};
  const std::vector<double> r1000 = {0.328, 0.157, 0.508, 0.335, 0.052, 0.166, 0.110};
  double worst100 = 0, worst1000 = 0;
  for (std::size_t c = 0; c < 7; ++c) {
    worst100 = std::max(worst100, std::abs(t.rows[0].values[c] - r100[c]));
    worst1000 = std::max(worst1000, std::abs(t.rows[1].values[c] - r1000[c]));
  }
  const auto& row = t.rows[2];
  const std::size_t c123 = 1 + ctx().class_index("(123)");
  const double published = 0.3544;
  const double recomputed = row.values[c123];
  const double sum_with_published = row.class_sum - recomputed + published;
  const bool anomaly = sum_with_published > 1.0 + 1e-9 && row.class_sum <= 1.0 + 1e-12;
  o.details.push_back(fmt("n=100 max cell deviation %.5f (limit 0.01)", worst100));
  o.details.push_back(fmt("n=1000 max cell deviation %.5f (limit 0.005)", worst1000));
  o.details.push_back(fmt("n=10000 C_(123): recomputed %.4f, published %.4f", recomputed, published));
  o.details.push_back(fmt("n=10000 class sum: recomputed %.4f, with the published cell %.4f -> %s",
                          row.class_sum, sum_with_published,
                          anomaly ? "published cell flagged as inconsistent (sum exceeds 1)" : "no anomaly"));
  o.details.push_back(fmt("runtime %.2f s (limit 5 s)", secs));
  o.pass = worst100 <= 0.01 && worst1000 <= 0.005 && anomaly && secs < 5.0;
  return o;
}

Outcome limit_row() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto t = density::density_table(ctx(), pi_beatty(), {1'000'000}, density::CountMode::FirstN);
  const double secs = seconds_since(t0);
  const std::vector<double> lim = {1 / kPiD, 1.0 / 6, 0.5, 1.0 / 3, 1 / (6 * kPiD), 1 / (2 * kPiD),
                                   1 / (3 * kPiD)};
  double worst = 0;
  std::string cells;
  for (std::size_t c = 0; c < 7; ++c) {
    worst = std::max(worst, std::abs(t.rows[0].values[c] - lim[c]));
    cells += fmt(" %.5f", t.rows[0].values[c]);
  }
  o.details.push_back("n=10^6 row:" + cells);
  o.details.push_back(fmt("max deviation from limits %.5f (limit 0.01)", worst));
  o.details.push_back(fmt("runtime %.2f s (limit 180 s)", secs));
  o.pass = worst <= 0.01 && secs < 180.0;
  return o;
}

Outcome exactness() {
  Outcome o;
  const std::uint64_t X = 10'000;
  bool ok = true;

  // joint_count, with and without a residue restriction.
  const auto member = naive::pi_terms(X);
  for (auto [q, a] : {std::pair<std::uint64_t, std::uint64_t>{1, 0}, {4, 1}}) {
    const auto t = density::joint_count({X}, ctx(), pi_beatty(), density::CountMode::UptoX,
                                        q == 1 ? std::nullopt : std::optional<density::Restriction>({q, a}));
    std::uint64_t pi = 0, beatty = 0;
    std::uint64_t cls[3] = {0, 0, 0}, joint[3] = {0, 0, 0};
    for (std::uint64_t p = 2; p <= X; ++p) {
      if (!naive::is_prime(p) || p % q != a) continue;
      ++pi;
      beatty += member[p];
      if (p <= 3) continue;
      const int c = naive::s3_class(p);
      ++cls[c];
      joint[c] += member[p];
    }
    const auto& r = t.rows[0];
    bool same = r.pi == pi && r.pi_beatty == beatty;
    for (int c = 0; c < 3; ++c) same = same && r.pi_C[c] == cls[c] && r.pi_C_beatty[c] == joint[c];
    o.details.push_back(fmt("joint_count q=%llu a=%llu: %s", static_cast<unsigned long long>(q),
                            static_cast<unsigned long long>(a), same ? "exact" : "MISMATCH"));
    ok = ok && same;
  }

  // bv_sum at theta = 0.25 for the class (12).
  {
    const auto rep = bv::bv_sum(X, 0.25, ctx(), 1, &pi_beatty());
    bool same = true;
    std::size_t i = 0;
    for (std::uint64_t q = 1; q <= rep.Q; ++q) {
      if (std::gcd(q, ctx().f_ab()) != 1) continue;
      const auto want = naive::bv_row(X, q, 1, true, bv::expected_density(ctx(), 1, &pi_beatty(), q));
      const auto& got = rep.rows.at(i++);
      same = same && got.q == q && got.error == want.error && got.y == want.y && got.a == want.a;
    }
    same = same && i == rep.rows.size();
    o.details.push_back(fmt("bv_sum Q=%llu, %zu moduli: %s", static_cast<unsigned long long>(rep.Q),
                            rep.rows.size(), same ? "exact" : "MISMATCH"));
    ok = ok && same;
  }

  const auto flags = naive::joint_flags(X + 6, 1);
  const sieve::JointSet set{&ctx(), std::size_t{1}, &pi_beatty()};

  // gap_scan with m = 1.
  {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t n = 0; n <= X; ++n) {
      if (flags[n]) ps.push_back(n);
    }
    std::map<std::uint64_t, std::uint64_t> hist;
    std::uint64_t best = ~0ULL;
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      ++hist[ps[i + 1] - ps[i]];
      best = std::min(best, ps[i + 1] - ps[i]);
    }
    const auto g = sieve::gap_scan(X, set, 1);
    const bool same = g.count == ps.size() && g.min_gap == best && g.histogram == hist;
    o.details.push_back(fmt("gap_scan min gap %llu over %zu primes: %s",
                            static_cast<unsigned long long>(g.min_gap), ps.size(), same ? "exact" : "MISMATCH"));
    ok = ok && same;
  }

  // cluster_scan with H = {0, 2, 6}, m = 2.
  {
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= X; ++n) count += (flags[n] + flags[n + 2] + flags[n + 6]) >= 2;
    const auto c = sieve::cluster_scan(X, {0, 2, 6}, set, 2);
    const bool same = c.count == count;
    o.details.push_back(fmt("cluster_scan count %llu: %s", static_cast<unsigned long long>(c.count),
                            same ? "exact" : "MISMATCH"));
    ok = ok && same;
  }
  o.pass = ok;
  return o;
}

Outcome orthogonality() {
  Outcome o;
  const auto ps = expsum::class_primes(10'000, ctx(), 1);
  const std::vector<std::pair<const char*, expsum::Frequency>> thetas = {
      {"0", expsum::Frequency::rational(0)},
      {"pi", expsum::Frequency::irrational(IrrationalNumber::pi())},
      {"1/3", expsum::Frequency::rational(mpq_class(1, 3))}};
  double worst = 0;
  std::size_t triples = 0;
  for (const auto& [name, th] : thetas) {
    double w = 0;
    for (std::uint64_t q = 1; q <= 50; ++q) {
      for (std::uint64_t a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1) continue;
        const auto direct = expsum::g_sum(ps, q, a, th);
        const auto comb = expsum::orthogonality_combination(ps, q, a, th);
        w = std::max(w, std::abs(comb - direct.value));
        ++triples;
      }
    }
    o.details.push_back(fmt("theta=%s: max |combination - direct| = %.3e", name, w));
    worst = std::max(worst, w);
  }
  o.details.push_back(fmt("%zu (q, a, theta) triples, tolerance 1e-9", triples));
  o.pass = worst < 1e-9;
  return o;
}

Outcome psi_delta() {
  Outcome o;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  bool ok = true;
  std::size_t coeff_fail = 0, eval_fail = 0;
  double worst_ratio = 0;
  for (int i = 0; i < 10; ++i) {
    const double gamma = 0.05 + 0.9 * unit(rng);
    const double dmax = std::min(0.125, std::min(gamma, 1 - gamma) / 2);
    const double Delta = dmax * (0.05 + 0.95 * unit(rng));
    const auto psi = build_psi_delta(gamma, Delta, 10'000);
    for (std::size_t k = 1; k <= psi.K; ++k) {
      const double kd = static_cast<double>(k);
      const double bound = std::min(2 / (kPiD * kd), 2 / (kPiD * kPiD * kd * kd * Delta));
      coeff_fail += std::abs(psi.g[k - 1]) > bound || std::abs(psi.h[k - 1]) > bound;
    }
    // Interior points lie at distance >= Delta from 0 and gamma, where the
    // smoothed function equals the sharp indicator.
    const double inside = gamma - 2 * Delta, outside = 1 - gamma - 2 * Delta;
    for (int j = 0; j < 1000; ++j) {
      const double u = unit(rng) * (inside + outside);
      const double x = u < inside ? Delta + u : gamma + Delta + (u - inside);
      const double err = std::abs(eval_psi_delta(psi, x) - sharp_indicator(gamma, x));
      worst_ratio = std::max(worst_ratio, err / psi.truncation_error);
      eval_fail += err > psi.truncation_error;
    }
    o.details.push_back(fmt("gamma=%.4f Delta=%.5f truncation error %.3e", gamma, Delta, psi.truncation_error));
  }
  o.details.push_back(fmt("coefficient bound violations %zu of 200000", coeff_fail));
  o.details.push_back(fmt("interior evaluation violations %zu of 10000 (worst error / bound %.3f)", eval_fail,
                          worst_ratio));
  ok = coeff_fail == 0 && eval_fail == 0;
  o.pass = ok;
  return o;
}

double brute_star(const std::vector<double>& xs) {
  const double M = static_cast<double>(xs.size());
  std::vector<double> ts = xs;
  ts.push_back(1.0);
  double best = 0;
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

Outcome discrepancy_check() {
  Outcome o;
  std::mt19937_64 rng(2718);
  std::size_t same = 0, total = 0;
  while (total < 20) {
    const long D = 2 + static_cast<long>(rng() % 200);
    if (mpz_perfect_square_p(mpz_class(D).get_mpz_t())) continue;
    const RealValue gamma = reciprocal(IrrationalNumber::sqrt(D));
    const RealValue delta = mpq_class(static_cast<long>(rng() % 997), 997);
    const std::uint64_t M = 1 + rng() % 200;
    const auto pts = frac_points(gamma, delta, M);
    same += star_discrepancy(pts) == brute_star(pts);
    ++total;
  }
  const auto d3 = discrepancy(IrrationalNumber::sqrt(2), mpq_class(0), 1000);
  const auto d5 = discrepancy(IrrationalNumber::sqrt(2), mpq_class(0), 100'000);
  o.details.push_back(fmt("sorted formula equals brute force on %zu of %zu instances", same, total));
  o.details.push_back(fmt("sqrt2: D_upper(10^3) = %.6e, D_upper(10^5) = %.6e", d3.D_upper, d5.D_upper));
  o.pass = same == total && d5.D_upper < d3.D_upper;
  return o;
}

Outcome variational() {
  Outcome o;
  const auto k2 = sieve::optimize_Mk(2, 0);
  const auto k1 = sieve::optimize_Mk(1, 3);
  bool mono = true;
  for (unsigned k : {2u, 3u, 5u}) {
    double prev = -1;
    std::string vals;
    for (unsigned d = 0; d <= 4; ++d) {
      const double m = sieve::optimize_Mk(k, d).M;
      mono = mono && m >= prev - 1e-10;
      prev = m;
      vals += fmt(" %.9f", m);
    }
    o.details.push_back(fmt("k=%u, degree 0..4:", k) + vals);
  }
  double worst = 0;
  for (unsigned k : {1u, 2u, 3u, 5u}) {
    const auto r = sieve::optimize_Mk(k, 3);
    const auto ij = sieve::integrals(r.F);
    worst = std::max(worst, std::abs(mpq_class(ij.J_sum() / ij.I).get_d() - r.M));
  }
  const double e2 = std::abs(k2.M - 4.0 / 3);
  o.details.push_back(fmt("k=2 degree 0: M = %.15f, |M - 4/3| = %.2e", k2.M, e2));
  o.details.push_back(fmt("k=1: M = %.12f", k1.M));
  o.details.push_back(fmt("Rayleigh recomputation max difference %.2e", worst));
  o.pass = e2 <= 1e-12 && k1.M >= 1 - 1e-12 && mono && worst <= 1e-9;
  return o;
}

Outcome inequalities() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto pn = primes::check_pn_bounds(6, 100'000);
  const auto pi = primes::check_pi_bounds(primes::kPiBoundStart, 1'000'000);
  const auto gap = primes::check_shifted_prime_gap(primes::kShiftedGapStart, 10'000);
  const double secs = seconds_since(t0);
  o.details.push_back(fmt("p_n sandwich: %llu rows, %zu violations", static_cast<unsigned long long>(pn.checked),
                          pn.violations.size()));
  o.details.push_back(fmt("pi(n) sandwich: %llu rows, %zu violations",
                          static_cast<unsigned long long>(pi.checked), pi.violations.size()));
  o.details.push_back(fmt("shifted gap bound: %llu rows, %zu violations",
                          static_cast<unsigned long long>(gap.checked), gap.violations.size()));
  o.details.push_back(fmt("runtime %.2f s (limit 60 s)", secs));
  o.pass = pn.violations.empty() && pi.violations.empty() && gap.violations.empty() &&
           pn.checked == 100'000 - 5 && pi.checked == 1'000'000 - primes::kPiBoundStart + 1 &&
           gap.checked == 10'000 - primes::kShiftedGapStart + 1 && secs < 60.0;
  return o;
}

Outcome constants() {
  Outcome o;
  const auto c = bv::level_constants(3, mpq_class(1), 6);
  o.details.push_back("kappa = " + c.kappa.get_str() + ", theta = " + c.theta_level.get_str() +
                      ", eta = " + c.eta.get_str() + ", theta_MM = " + c.theta_MM.get_str());
  o.pass = c.kappa == mpq_class(1, 375'000) && c.theta_level == mpq_class(1, 1'500'000) &&
           c.eta == mpq_class(1, 125'000) && c.theta_MM == mpq_class(1, 3);
  return o;
}

Outcome advisory() {
  Outcome o;
  o.details.push_back("asymptotic savings are not checkable at this scale; trends below carry no verdict");
  const auto rep = expsum::decay_report(ctx(), 1, IrrationalNumber::pi(), 1, {10'000, 100'000, 1'000'000});
  for (const auto& s : rep.series) {
    std::string line = "decay theta=" + s.theta + ": |G|/sum log p =";
    for (const auto& r : s.rows) line += fmt(" %.4f", r.over_trivial);
    if (s.slope) line += fmt(", slope %.3f", *s.slope);
    o.details.push_back(line);
  }
  std::string bvline = "bv theta=0.25 normalized total (A=2):";
  bool shaped = true;
  for (std::uint64_t x : {10'000ULL, 100'000ULL, 1'000'000ULL}) {
    const auto b = bv::bv_sum(x, 0.25, ctx(), 1, &pi_beatty());
    bvline += fmt(" x=%llu: %.4f", static_cast<unsigned long long>(x), b.normalized);
    shaped = shaped && !b.note.empty();
  }
  o.details.push_back(bvline);
  o.details.push_back("note: " + rep.note);
  // The contract is that the reports exist and are labelled advisory.
  o.pass = shaped && rep.note.find("advisory") != std::string::npos && rep.series.size() == 2;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"first-n density rows at 100, 1000, 10000", table_rows},
      {"density row at 10^6 against the limits", limit_row},
      {"exact naive oracles at 10^4", exactness},
      {"character orthogonality, q <= 50", orthogonality},
      {"smoothed indicator coefficients and values", psi_delta},
      {"star discrepancy brute force and trend", discrepancy_check},
      {"M_k optimizer suite", variational},
      {"explicit prime inequalities", inequalities},
      {"level-of-distribution constants", constants},
      {"advisory asymptotic reports (report contract)", advisory},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.details.push_back(std::string("exception: ") + e.what());
    }
    std::printf("%s %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first);
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
