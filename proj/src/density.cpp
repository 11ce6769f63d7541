#include "chebeatty/density.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "chebeatty/error.hpp"
#include "chebeatty/primes.hpp"

namespace chebeatty::density {
namespace {

struct Counts {
  std::uint64_t pi = 0;
  std::uint64_t ramified = 0;
  std::uint64_t last_prime = 0;
  std::vector<std::uint64_t> pi_C;
  std::uint64_t pi_beatty = 0;
  std::vector<std::uint64_t> pi_C_beatty;

  explicit Counts(std::size_t classes = 0) : pi_C(classes, 0), pi_C_beatty(classes, 0) {}

  void add(const Counts& o) {
    pi += o.pi;
    ramified += o.ramified;
    last_prime = std::max(last_prime, o.last_prime);
    pi_beatty += o.pi_beatty;
    for (std::size_t i = 0; i < pi_C.size(); ++i) {
      pi_C[i] += o.pi_C[i];
      pi_C_beatty[i] += o.pi_C_beatty[i];
    }
  }
};

void validate_restriction(const std::optional<Restriction>& r) {
  if (!r) return;
  if (r->q < 1) raise(ErrorCode::InvalidArgument, "modulus q must be >= 1");
  if (std::gcd(r->a % r->q, r->q) != 1) {
    raise(ErrorCode::InvalidArgument, "residue a must be coprime to q");
  }
}

bool admitted(std::uint64_t p, const std::optional<Restriction>& r) {
  return !r || p % r->q == r->a % r->q;
}

// Folds one prime into c. Returns false for ramified primes skipped in
// FirstN mode.
bool tally(Counts& c, std::uint64_t p, const galois::GaloisContext& ctx,
           const BeattyParams& beatty, bool skip_ramified) {
  const auto cls = ctx.artin_class(p);
  if (!cls && skip_ramified) return false;
  const bool in_b = beatty.is_member(p);
  ++c.pi;
  c.last_prime = p;
  if (in_b) ++c.pi_beatty;
  if (cls) {
    ++c.pi_C[*cls];
    if (in_b) ++c.pi_C_beatty[*cls];
  } else {
    ++c.ramified;
  }
  return true;
}

CountRow to_row(std::uint64_t checkpoint, const Counts& c) {
  CountRow row;
  row.checkpoint = checkpoint;
  row.last_prime = c.last_prime;
  row.pi = c.pi;
  row.ramified = c.ramified;
  row.pi_C = c.pi_C;
  row.pi_beatty = c.pi_beatty;
  row.pi_C_beatty = c.pi_C_beatty;
  return row;
}

void check_checkpoints(const std::vector<std::uint64_t>& cps) {
  if (cps.empty()) raise(ErrorCode::InvalidArgument, "no checkpoints given");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] < 1) raise(ErrorCode::InvalidArgument, "checkpoints must be positive");
    if (i > 0 && cps[i] <= cps[i - 1]) {
      raise(ErrorCode::InvalidArgument, "checkpoints must be strictly increasing");
    }
  }
}

JointCountTable count_upto(const std::vector<std::uint64_t>& cps, const galois::GaloisContext& ctx,
                           const BeattyParams& beatty, const std::optional<Restriction>& r,
                           const CountOptions& opt) {
  const std::size_t nc = ctx.classes().size();
  const std::uint64_t x_max = cps.back();
  if (x_max > opt.max_x) {
    raise(ErrorCode::BudgetExceeded, "X = " + std::to_string(x_max) + " exceeds the budget of " +
                                         std::to_string(opt.max_x));
  }
  const std::uint64_t span = std::max<std::uint64_t>(opt.chunk_span, 1024);
  const std::size_t chunks = static_cast<std::size_t>((x_max + 1 + span - 1) / span);
  // Each chunk tallies primes into buckets (cps[j-1], cps[j]].
  auto parts = primes::run_chunks(
      2, x_max + 1, chunks, opt.workers, [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<Counts> buckets(cps.size(), Counts(nc));
        std::size_t j = static_cast<std::size_t>(
            std::lower_bound(cps.begin(), cps.end(), lo) - cps.begin());
        primes::for_each_prime(lo, hi, [&](std::uint64_t p) {
          while (cps[j] < p) ++j;
          if (admitted(p, r)) tally(buckets[j], p, ctx, beatty, false);
        });
        return buckets;
      });
  JointCountTable t;
  Counts running(nc);
  for (std::size_t j = 0; j < cps.size(); ++j) {
    for (const auto& part : parts) running.add(part[j]);
    t.rows.push_back(to_row(cps[j], running));
  }
  return t;
}

JointCountTable count_first(const std::vector<std::uint64_t>& cps, const galois::GaloisContext& ctx,
                            const BeattyParams& beatty, const std::optional<Restriction>& r,
                            const CountOptions& opt) {
  const std::size_t nc = ctx.classes().size();
  const std::uint64_t n_max = cps.back();
  if (n_max > opt.max_n) {
    raise(ErrorCode::BudgetExceeded, "N = " + std::to_string(n_max) + " exceeds the budget of " +
                                         std::to_string(opt.max_n));
  }
  // Per-prime codes, produced chunk by chunk and consumed in order:
  // bit 7 = Beatty member, low bits = class index.
  const std::uint64_t span = std::max<std::uint64_t>(opt.chunk_span, 1024);
  const unsigned batch = std::max(1u, opt.workers);
  JointCountTable t;
  Counts running(nc);
  std::size_t j = 0;
  std::uint64_t start = 2;
  while (j < cps.size()) {
    if (start > (std::uint64_t{1} << 62)) raise(ErrorCode::BudgetExceeded, "prime search overflow");
    const std::uint64_t stop = start + span * batch;
    auto parts = primes::run_chunks(
        start, stop, batch, opt.workers, [&](std::uint64_t lo, std::uint64_t hi) {
          std::vector<std::pair<std::uint64_t, std::uint8_t>> codes;
          primes::for_each_prime(lo, hi, [&](std::uint64_t p) {
            if (!admitted(p, r)) return;
            const auto cls = ctx.artin_class(p);
            if (!cls) return;
            const bool in_b = beatty.is_member(p);
            codes.emplace_back(p, static_cast<std::uint8_t>(*cls | (in_b ? 0x80 : 0)));
          });
          return codes;
        });
    for (const auto& part : parts) {
      for (const auto& [p, code] : part) {
        if (j >= cps.size()) break;
        const std::size_t cls = code & 0x7f;
        const bool in_b = (code & 0x80) != 0;
        ++running.pi;
        running.last_prime = p;
        ++running.pi_C[cls];
        if (in_b) {
          ++running.pi_beatty;
          ++running.pi_C_beatty[cls];
        }
        if (running.pi == cps[j]) t.rows.push_back(to_row(cps[j++], running));
      }
    }
    start = stop;
  }
  return t;
}

}  // namespace

std::string to_string(CountMode mode) { return mode == CountMode::UptoX ? "upto-x" : "first-n"; }

CountMode parse_mode(const std::string& text) {
  if (text == "upto-x" || text == "upto" || text == "UPTO_X") return CountMode::UptoX;
  if (text == "first-n" || text == "first" || text == "FIRST_N") return CountMode::FirstN;
  raise(ErrorCode::InvalidArgument, "unknown mode '" + text + "' (use upto-x or first-n)");
}

JointCountTable joint_count(const std::vector<std::uint64_t>& checkpoints,
                            const galois::GaloisContext& ctx, const BeattyParams& beatty,
                            CountMode mode, std::optional<Restriction> restriction,
                            const CountOptions& options) {
  check_checkpoints(checkpoints);
  validate_restriction(restriction);
  if (ctx.classes().size() > 127) raise(ErrorCode::InvalidContext, "too many classes");
  JointCountTable t = mode == CountMode::UptoX
                          ? count_upto(checkpoints, ctx, beatty, restriction, options)
                          : count_first(checkpoints, ctx, beatty, restriction, options);
  t.mode = mode;
  t.restriction = restriction;
  for (const auto& c : ctx.classes()) t.labels.push_back(c.label);
  return t;
}

DensityTable density_table(const galois::GaloisContext& ctx, const BeattyParams& beatty,
                           const std::vector<std::uint64_t>& checkpoints, CountMode mode,
                           const CountOptions& options) {
  DensityTable out;
  out.mode = mode;
  out.counts = joint_count(checkpoints, ctx, beatty, mode, std::nullopt, options);
  const auto& cls = ctx.classes();
  out.columns.push_back("B");
  for (const auto& c : cls) out.columns.push_back("C_" + c.label);
  for (const auto& c : cls) out.columns.push_back("C_" + c.label + "&B");
  for (const auto& row : out.counts.rows) {
    DensityRow d;
    d.checkpoint = row.checkpoint;
    const double n = static_cast<double>(row.pi);
    d.values.push_back(static_cast<double>(row.pi_beatty) / n);
    for (std::size_t i = 0; i < cls.size(); ++i) {
      const double v = static_cast<double>(row.pi_C[i]) / n;
      d.values.push_back(v);
      d.class_sum += v;
    }
    for (std::size_t i = 0; i < cls.size(); ++i) {
      d.values.push_back(static_cast<double>(row.pi_C_beatty[i]) / n);
    }
    out.rows.push_back(d);
  }
  const double inv_alpha = beatty.gamma().approx();
  const double G = static_cast<double>(ctx.group_order());
  out.limit.values.push_back(inv_alpha);
  for (const auto& c : cls) {
    out.limit.values.push_back(static_cast<double>(c.size) / G);
    out.limit.class_sum += static_cast<double>(c.size) / G;
  }
  for (const auto& c : cls) out.limit.values.push_back(static_cast<double>(c.size) * inv_alpha / G);
  return out;
}

double pnt_kappa(unsigned d, double tau) {
  return std::pow(10.0, -static_cast<double>(d)) / (125.0 * d * tau);
}

PntReport pnt_ratio(const std::vector<std::uint64_t>& X_grid, const galois::GaloisContext& ctx,
                    std::size_t class_index, const BeattyParams& beatty, std::uint64_t q,
                    std::uint64_t a, double tau, const CountOptions& options) {
  if (class_index >= ctx.classes().size()) raise(ErrorCode::InvalidArgument, "class index out of range");
  if (!(tau >= 1.0)) raise(ErrorCode::InvalidArgument, "tau must be >= 1");
  if (q < 1 || std::gcd(a % q, q) != 1) raise(ErrorCode::InvalidArgument, "need gcd(a, q) = 1");
  for (std::uint64_t p : ctx.ramified()) {
    if (q % p == 0) raise(ErrorCode::InvalidArgument, "need gcd(q, disc_L) = 1");
  }
  const auto& cls = ctx.classes()[class_index];
  PntReport rep;
  rep.label = cls.label;
  rep.q = q;
  rep.a = a % q;
  rep.d = cls.d;
  rep.tau = tau;
  rep.kappa = pnt_kappa(cls.d, tau);
  const auto t = joint_count(X_grid, ctx, beatty, CountMode::UptoX, Restriction{q, a}, options);
  const double inv_alpha = beatty.gamma().approx();
  for (const auto& row : t.rows) {
    PntPoint pt;
    pt.X = row.checkpoint;
    pt.joint = row.pi_C_beatty[class_index];
    pt.class_count = row.pi_C[class_index];
    if (pt.class_count > 0) {
      pt.R = static_cast<double>(pt.joint) / (inv_alpha * static_cast<double>(pt.class_count));
    }
    pt.envelope = std::pow(static_cast<double>(q), cls.d + 1.0) *
                  std::pow(static_cast<double>(row.checkpoint), 1.0 - rep.kappa);
    rep.points.push_back(pt);
  }
  return rep;
}

bool in_joint_set(std::uint64_t n, const galois::GaloisContext& ctx,
                  std::optional<std::size_t> class_index, const BeattyParams& beatty) {
  if (n < 2 || !primes::is_prime(n)) return false;
  if (!beatty.is_member(n)) return false;
  if (!class_index) return true;
  const auto c = ctx.artin_class(n);
  return c && *c == *class_index;
}

std::vector<std::uint64_t> joint_primes(std::uint64_t lo, std::uint64_t hi,
                                        const galois::GaloisContext& ctx,
                                        std::optional<std::size_t> class_index,
                                        const BeattyParams& beatty, unsigned workers) {
  lo = std::max<std::uint64_t>(lo, 2);
  if (hi <= lo) return {};
  const std::uint64_t span = std::uint64_t{1} << 22;
  const std::size_t chunks = static_cast<std::size_t>((hi - lo + span - 1) / span);
  auto parts = primes::run_chunks(lo, hi, chunks, workers, [&](std::uint64_t a, std::uint64_t b) {
    std::vector<std::uint64_t> out;
    primes::for_each_prime(a, b, [&](std::uint64_t p) {
      if (!beatty.is_member(p)) return;
      if (class_index) {
        const auto c = ctx.artin_class(p);
        if (!c || *c != *class_index) return;
      }
      out.push_back(p);
    });
    return out;
  });
  std::vector<std::uint64_t> all;
  for (auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return all;
}

}  // namespace chebeatty::density
