// chebeatty: command-line frontend.
//
// Exit status: 0 on success, 2 on invalid input, 3 when a budget or
// precision cap is hit. Diagnostics go to standard error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "chebeatty/beatty.hpp"
#include "chebeatty/bv.hpp"
#include "chebeatty/density.hpp"
#include "chebeatty/error.hpp"
#include "chebeatty/expsum.hpp"
#include "chebeatty/galois.hpp"
#include "chebeatty/irrational.hpp"
#include "chebeatty/primes.hpp"
#include "chebeatty/report.hpp"
#include "chebeatty/sieve.hpp"

using namespace chebeatty;
using nlohmann::ordered_json;
using report::RunConfig;
using report::Table;

namespace {

// Integer arguments accept plain digits or scientific notation ("1e6").
std::uint64_t parse_count(const std::string& s) {
  if (s.empty()) raise(ErrorCode::InvalidArgument, "empty number");
  if (s.find_first_not_of("0123456789") == std::string::npos) {
    try {
      return std::stoull(s);
    } catch (...) {
      raise(ErrorCode::InvalidArgument, "number out of range: " + s);
    }
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (...) {
    raise(ErrorCode::InvalidArgument, "not a number: " + s);
  }
  if (used != s.size() || !(v >= 0) || v != std::floor(v) || v > 9.2e18) {
    raise(ErrorCode::InvalidArgument, "not a nonnegative integer: " + s);
  }
  return static_cast<std::uint64_t>(v);
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (...) {
  }
  return approx(parse_real(s));
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(parse_count(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::int64_t> parse_tuple(const std::string& s) {
  std::vector<std::int64_t> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (...) {
      raise(ErrorCode::InvalidArgument, "bad tuple entry '" + item + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string u(std::uint64_t v) { return std::to_string(v); }

struct Globals {
  std::string config_path;
  std::string ctx;
  std::string alpha;
  std::string beta;
  std::string tau;
  std::string out;
  std::string format;
  unsigned workers = 0;
  long max_precision = 0;
};

class Runner {
 public:
  Runner(RunConfig cfg) : cfg_(std::move(cfg)) {}

  RunConfig& cfg() { return cfg_; }

  const galois::GaloisContext& ctx() {
    if (!ctx_) ctx_ = galois::GaloisContext::resolve(cfg_.ctx);
    return *ctx_;
  }

  IrrationalNumber alpha() { return IrrationalNumber::parse(cfg_.alpha, cfg_.max_precision); }

  const BeattyParams& beatty() {
    if (!beatty_) beatty_.emplace(alpha(), parse_real(cfg_.beta, cfg_.max_precision));
    return *beatty_;
  }

  double tau() {
    const double t = parse_double(cfg_.tau);
    if (!(t >= 1.0)) raise(ErrorCode::InvalidArgument, "tau must be >= 1");
    return t;
  }

  std::size_t class_index(const std::string& spec) {
    const auto& c = ctx();
    if (!spec.empty() && spec.find_first_not_of("0123456789") == std::string::npos) {
      const std::size_t i = std::stoul(spec);
      if (i >= c.classes().size()) raise(ErrorCode::InvalidArgument, "class index out of range");
      return i;
    }
    return c.class_index(spec);
  }

  void table(const std::string& name, const Table& t, const ordered_json& result) {
    if (cfg_.format == report::Format::Csv) {
      report::emit(cfg_, name + ".csv", report::to_csv(t, cfg_));
    } else {
      report::emit(cfg_, name + ".json", report::to_json(result, cfg_));
    }
  }

 private:
  RunConfig cfg_;
  std::optional<galois::GaloisContext> ctx_;
  std::optional<BeattyParams> beatty_;
};

ordered_json rows_json(const Table& t) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    ordered_json o;
    for (std::size_t i = 0; i < t.header.size() && i < r.size(); ++i) o[t.header[i]] = r[i];
    rows.push_back(o);
  }
  return rows;
}

ordered_json with_rows(const Table& t) {
  ordered_json j;
  j["columns"] = t.header;
  j["rows"] = rows_json(t);
  if (!t.notes.empty()) j["notes"] = t.notes;
  return j;
}

void bound_rows(Table& t, const primes::BoundReport& r) {
  for (const auto& row : r.rows) {
    t.rows.push_back({row.check, u(row.n), report::number(row.lhs), report::number(row.value),
                      report::number(row.rhs), row.pass ? "true" : "false"});
  }
  for (const auto& row : r.violations) {
    t.rows.push_back({row.check, u(row.n), report::number(row.lhs), report::number(row.value),
                      report::number(row.rhs), "false"});
  }
  t.notes.push_back(r.check + ": checked " + u(r.checked) + " values in [" + u(r.first) + ", " +
                    u(r.last) + "], violations " + u(r.violations.size()));
}

std::string pattern_string(const std::vector<unsigned>& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i]);
  return s + "]";
}

std::string density_mode_name(density::CountMode m) {
  return m == density::CountMode::FirstN ? "first-n" : "upto-x";
}

density::CountMode density_mode(const std::string& s) {
  if (s == "first-n" || s == "first_n" || s == "FIRST_N") return density::CountMode::FirstN;
  if (s == "upto-x" || s == "upto_x" || s == "UPTO_X") return density::CountMode::UptoX;
  raise(ErrorCode::InvalidArgument, "unknown mode '" + s + "' (expected first-n or upto-x)");
}

Table density_csv(const density::DensityTable& t) {
  Table out;
  out.header.push_back("n");
  for (const auto& c : t.columns) out.header.push_back(c);
  out.header.push_back("class_sum");
  auto add = [&](const std::string& label, const density::DensityRow& r) {
    std::vector<std::string> row{label};
    for (double v : r.values) row.push_back(report::density(v));
    row.push_back(report::density(r.class_sum));
    out.rows.push_back(row);
  };
  for (const auto& r : t.rows) add(u(r.checkpoint), r);
  add("inf", t.limit);
  out.notes.push_back("mode: " + density_mode_name(t.mode) +
                      (t.mode == density::CountMode::FirstN ? " (ramified primes excluded)" : ""));
  for (const auto& r : t.rows) {
    if (r.class_sum > 1.0 + 1e-12) {
      out.notes.push_back("row " + u(r.checkpoint) + ": class densities sum to " +
                          report::density(r.class_sum) + " > 1");
    }
  }
  return out;
}

ordered_json density_json(const density::DensityTable& t) {
  ordered_json j;
  j["mode"] = density_mode_name(t.mode);
  j["columns"] = t.columns;
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    ordered_json o;
    o["n"] = r.checkpoint;
    std::vector<std::string> v;
    for (double x : r.values) v.push_back(report::density(x));
    o["values"] = v;
    o["class_sum"] = report::density(r.class_sum);
    rows.push_back(o);
  }
  j["rows"] = rows;
  std::vector<std::string> lim;
  for (double x : t.limit.values) lim.push_back(report::density(x));
  j["limit"] = lim;
  return j;
}

ordered_json expsum_json(const expsum::ExpSumResult& r) {
  ordered_json j;
  j["X"] = r.X;
  j["q"] = r.q;
  if (r.chi_index) {
    j["chi"] = *r.chi_index;
  } else {
    j["a"] = r.a;
  }
  j["theta"] = r.theta;
  j["value"] = report::complex_json(r.value);
  j["abs"] = std::stod(report::number(std::abs(r.value)));
  j["trivial_bound"] = std::stod(report::number(r.trivial_bound));
  j["terms"] = r.terms;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primes in Beatty sequences and Chebotarev classes"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config_path, "JSON run configuration");
  app.add_option("--ctx", g.ctx, "Galois context name or path (default s3_x3m2)");
  app.add_option("--alpha", g.alpha, "pi | e | phi | sqrtD | surd:a,b,c,D | file:PATH (default pi)");
  app.add_option("--beta", g.beta, "Beatty shift, rational or irrational spec (default 0)");
  app.add_option("--tau", g.tau, "declared type of alpha (default 1)");
  app.add_option("--out", g.out, "output directory (default standard output)");
  app.add_option("--workers", g.workers, "worker threads (default: available cores)");
  app.add_option("--format", g.format, "csv | json");
  app.add_option("--max-precision", g.max_precision, "precision cap in bits (default 4096)");

  std::function<void(Runner&)> action;
  ordered_json args = ordered_json::object();
  std::string command;

  auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help) {
    CLI::App* s = parent->add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  auto group = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->require_subcommand(1);
    return s;
  };

  // primes
  CLI::App* primes_cmd = group("primes", "prime counting and explicit bounds");
  std::string upto, from = "2", nth_n;
  {
    auto* c = sub(primes_cmd, "count", "count primes in [from, upto]");
    c->add_option("--upto", upto, "largest value counted")->required();
    c->add_option("--from", from, "smallest value counted (default 2)");
    c->callback([&] {
      command = "primes count";
      args = {{"from", from}, {"upto", upto}};
      action = [&](Runner& r) {
        const std::uint64_t lo = parse_count(from), hi = parse_count(upto);
        primes::SieveConfig sc;
        sc.workers = r.cfg().workers;
        sc.range_budget = r.cfg().max_x;
        const std::uint64_t n = hi < lo ? 0 : primes::count_primes(lo, hi + 1, sc);
        Table t{{"from", "upto", "count"}, {{u(lo), u(hi), u(n)}}, {}};
        r.table("primes_count", t, with_rows(t));
      };
    });
    auto* n = sub(primes_cmd, "nth", "the n-th prime");
    n->add_option("n", nth_n, "index n, p_1 = 2")->required();
    n->callback([&] {
      command = "primes nth";
      args = {{"n", nth_n}};
      action = [&](Runner& r) {
        primes::SieveConfig sc;
        sc.workers = r.cfg().workers;
        const std::uint64_t k = parse_count(nth_n);
        Table t{{"n", "p_n"}, {{u(k), u(primes::nth_prime(k, sc))}}, {}};
        r.table("primes_nth", t, with_rows(t));
      };
    });
  }
  bool chk_pn = false, chk_pi = false, chk_gap = false, keep_rows = false;
  std::string pn_upto = "1e5", pi_upto = "1e6", gap_upto = "1e4";
  {
    auto* c = sub(primes_cmd, "check-bounds", "explicit inequalities for p_n, pi(n) and shifted gaps");
    c->add_flag("--pn", chk_pn, "p_n sandwich for 6 <= n <= --pn-upto");
    c->add_flag("--pi", chk_pi, "pi(n) sandwich for 355991 <= n <= --pi-upto");
    c->add_flag("--gap213", chk_gap, "1.6 k log k bound for 213 <= k <= --gap-upto");
    c->add_option("--pn-upto", pn_upto, "last n for --pn (default 1e5)");
    c->add_option("--pi-upto", pi_upto, "last n for --pi (default 1e6)");
    c->add_option("--gap-upto", gap_upto, "last k for --gap213 (default 1e4)");
    c->add_flag("--rows", keep_rows, "emit every evaluated row");
    c->callback([&] {
      command = "primes check-bounds";
      if (!chk_pn && !chk_pi && !chk_gap) chk_pn = chk_pi = chk_gap = true;
      args = {{"pn", chk_pn}, {"pi", chk_pi}, {"gap213", chk_gap}, {"pn_upto", pn_upto},
              {"pi_upto", pi_upto}, {"gap_upto", gap_upto}, {"rows", keep_rows}};
      action = [&](Runner& r) {
        primes::SieveConfig sc;
        sc.workers = r.cfg().workers;
        Table t{{"check", "n", "lhs", "value", "rhs", "pass"}, {}, {}};
        if (chk_pn) bound_rows(t, primes::check_pn_bounds(6, parse_count(pn_upto), sc, keep_rows));
        if (chk_pi) {
          bound_rows(t, primes::check_pi_bounds(primes::kPiBoundStart, parse_count(pi_upto), sc, keep_rows));
        }
        if (chk_gap) {
          bound_rows(t, primes::check_shifted_prime_gap(primes::kShiftedGapStart, parse_count(gap_upto),
                                                        sc, keep_rows));
        }
        r.table("bounds", t, with_rows(t));
      };
    });
  }

  // irr
  CLI::App* irr_cmd = group("irr", "irrational numbers: convergents, type, good approximations");
  std::string konst = "pi", conv_n = "10", type_upto = "1e6", B_str, X_str;
  {
    auto* c = sub(irr_cmd, "convergents", "certified continued-fraction convergents");
    c->add_option("--const", konst, "the number, in --alpha syntax (default pi)");
    c->add_option("-n", conv_n, "number of convergents (default 10)");
    c->callback([&] {
      command = "irr convergents";
      args = {{"const", konst}, {"n", conv_n}};
      action = [&](Runner& r) {
        const auto x = IrrationalNumber::parse(konst, r.cfg().max_precision);
        const auto cs = convergents(x, parse_count(conv_n));
        Table t{{"index", "r", "s", "gap"}, {}, {}};
        for (std::size_t i = 0; i < cs.size(); ++i) {
          t.rows.push_back({u(i), cs[i].r.get_str(), cs[i].s.get_str(), report::number(cs[i].gap.get_d())});
        }
        r.table("convergents", t, with_rows(t));
      };
    });
    auto* ty = sub(irr_cmd, "type", "lower-bound estimate of the type");
    ty->add_option("--const", konst, "the number, in --alpha syntax (default pi)");
    ty->add_option("--upto", type_upto, "largest denominator Q (default 1e6)");
    ty->callback([&] {
      command = "irr type";
      args = {{"const", konst}, {"upto", type_upto}};
      action = [&](Runner& r) {
        const auto x = IrrationalNumber::parse(konst, r.cfg().max_precision);
        const auto e = estimate_type(x, mpz_class(std::to_string(parse_count(type_upto))));
        Table t{{"const", "tau_hat", "slope", "max_ratio", "points"},
                {{x.name(), report::number(e.tau_hat), report::number(e.slope),
                  report::number(e.max_ratio), u(e.points)}},
                {"a lower-bound estimate; the type itself is not computable from finitely many convergents"}};
        r.table("type", t, with_rows(t));
      };
    });
    auto* ga = sub(irr_cmd, "approx", "convergent r/s with s in (B, X/B)");
    ga->add_option("--const", konst, "the number, in --alpha syntax (default pi)");
    ga->add_option("-B", B_str, "lower end B of the denominator window")->required();
    ga->add_option("-X", X_str, "X, the window is (B, X/B)")->required();
    ga->callback([&] {
      command = "irr approx";
      args = {{"const", konst}, {"B", B_str}, {"X", X_str}};
      action = [&](Runner& r) {
        const auto x = IrrationalNumber::parse(konst, r.cfg().max_precision);
        const auto a = good_approx(x, parse_double(B_str), parse_double(X_str));
        Table t{{"const", "r", "s", "gap"}, {}, {}};
        if (a) {
          t.rows.push_back({x.name(), a->r.get_str(), a->s.get_str(), report::number(a->gap.get_d())});
        } else {
          t.notes.push_back("no convergent denominator in (B, X/B)");
        }
        r.table("approx", t, with_rows(t));
      };
    });
  }

  // beatty
  CLI::App* beatty_cmd = group("beatty", "Beatty sequences floor(alpha n + beta)");
  std::string terms_n = "20", gamma_spec = "sqrt2", delta_spec = "0", M_str = "1e5";
  std::vector<std::string> members;
  {
    auto* c = sub(beatty_cmd, "terms", "the first n terms");
    c->add_option("-n", terms_n, "number of terms (default 20)");
    c->callback([&] {
      command = "beatty terms";
      args = {{"n", terms_n}};
      action = [&](Runner& r) {
        const auto& b = r.beatty();
        Table t{{"n", "term"}, {}, {b.describe()}};
        const std::uint64_t n = parse_count(terms_n);
        for (std::uint64_t i = 1; i <= n; ++i) t.rows.push_back({u(i), std::to_string(b.term(static_cast<std::int64_t>(i)))});
        r.table("beatty_terms", t, with_rows(t));
      };
    });
    auto* m = sub(beatty_cmd, "member", "membership of each m");
    m->add_option("m", members, "integers to test")->required();
    m->callback([&] {
      command = "beatty member";
      args = {{"m", members}};
      action = [&](Runner& r) {
        const auto& b = r.beatty();
        Table t{{"m", "member"}, {}, {b.describe()}};
        for (const auto& s : members) {
          const std::uint64_t v = parse_count(s);
          t.rows.push_back({u(v), b.is_member(v) ? "true" : "false"});
        }
        r.table("beatty_member", t, with_rows(t));
      };
    });
    auto* d = sub(beatty_cmd, "discrepancy", "star discrepancy of {gamma m + delta}");
    d->add_option("--gamma", gamma_spec, "gamma (default sqrt2)");
    d->add_option("--delta", delta_spec, "delta (default 0)");
    d->add_option("-M", M_str, "number of points (default 1e5)");
    d->callback([&] {
      command = "beatty discrepancy";
      args = {{"gamma", gamma_spec}, {"delta", delta_spec}, {"M", M_str}};
      action = [&](Runner& r) {
        const RealValue gm = parse_real(gamma_spec, r.cfg().max_precision);
        const RealValue dl = parse_real(delta_spec, r.cfg().max_precision);
        const std::uint64_t M = parse_count(M_str);
        const auto D = discrepancy(gm, dl, M);
        Table t{{"M", "D_star", "D_lower", "D_upper"},
                {{u(M), report::number(D.D_star), report::number(D.D_lower), report::number(D.D_upper)}},
                {"D over all subintervals lies in [D_lower, D_upper] = [D*, 2 D*]"}};
        r.table("discrepancy", t, with_rows(t));
      };
    });
  }

  // artin
  CLI::App* artin_cmd = group("artin", "Frobenius classes");
  std::string artin_upto = "1000";
  {
    auto* c = sub(artin_cmd, "classify", "class of Frobenius for every prime up to a bound");
    c->add_option("--upto", artin_upto, "largest prime (default 1000)");
    c->callback([&] {
      command = "artin classify";
      args = {{"upto", artin_upto}};
      action = [&](Runner& r) {
        const auto& ctx = r.ctx();
        const std::uint64_t X = parse_count(artin_upto);
        if (X > 100'000'000) raise(ErrorCode::BudgetExceeded, "artin classify is capped at 10^8");
        Table t{{"p", "pattern", "class"}, {}, {}};
        primes::for_each_prime(2, X + 1, [&](std::uint64_t p) {
          if (ctx.is_ramified(p)) {
            t.rows.push_back({u(p), "", "ramified"});
            return;
          }
          const auto pat = galois::factorization_pattern(ctx.polynomial(), ctx.poly_discriminant(), p);
          t.rows.push_back({u(p), pattern_string(pat), galois::artin_label(p, ctx)});
        });
        r.table("artin", t, with_rows(t));
      };
    });
    auto* v = sub(artin_cmd, "context", "validate and print a context file");
    v->callback([&] {
      command = "artin context";
      action = [&](Runner& r) {
        const auto& ctx = r.ctx();
        report::emit(r.cfg(), "context.json",
                     report::to_json(ordered_json::parse(ctx.to_json()), r.cfg()));
      };
    });
  }

  // density
  CLI::App* density_cmd = group("density", "joint counts and density tables");
  std::string rows_str = "100,1000,10000", mode_str = "first-n", q_str, a_str, class_str = "(12)",
              grid_str = "1e4,1e5,1e6";
  {
    auto* c = sub(density_cmd, "table", "densities of the seven column sets plus the limit row");
    c->add_option("--rows", rows_str, "checkpoints (default 100,1000,10000)");
    c->add_option("--mode", mode_str, "first-n | upto-x (default first-n)");
    c->callback([&] {
      command = "density table";
      args = {{"rows", rows_str}, {"mode", mode_str}};
      action = [&](Runner& r) {
        density::CountOptions opt;
        opt.workers = r.cfg().workers;
        opt.max_x = r.cfg().max_x;
        opt.max_n = r.cfg().max_n;
        const auto rows = parse_list(rows_str);
        const auto mode = density_mode(mode_str);
        const auto t = density::density_table(r.ctx(), r.beatty(), rows, mode, opt);
        if (r.cfg().format == report::Format::Csv) {
          report::emit(r.cfg(), "density.csv", report::to_csv(density_csv(t), r.cfg()));
        } else {
          const auto other_mode = mode == density::CountMode::FirstN ? density::CountMode::UptoX
                                                                     : density::CountMode::FirstN;
          const auto t2 = density::density_table(r.ctx(), r.beatty(), rows, other_mode, opt);
          ordered_json j;
          j[density_mode_name(mode)] = density_json(t);
          j[density_mode_name(other_mode)] = density_json(t2);
          report::emit(r.cfg(), "density.json", report::to_json(j, r.cfg()));
        }
      };
    });
    auto* k = sub(density_cmd, "count", "exact joint counts");
    k->add_option("--rows", rows_str, "checkpoints (default 100,1000,10000)");
    k->add_option("--mode", mode_str, "first-n | upto-x (default first-n)");
    k->add_option("--mod", q_str, "modulus q of the restriction");
    k->add_option("--res", a_str, "residue a, coprime to q");
    k->callback([&] {
      command = "density count";
      args = {{"rows", rows_str}, {"mode", mode_str}, {"mod", q_str}, {"res", a_str}};
      action = [&](Runner& r) {
        density::CountOptions opt;
        opt.workers = r.cfg().workers;
        opt.max_x = r.cfg().max_x;
        opt.max_n = r.cfg().max_n;
        std::optional<density::Restriction> res;
        if (!q_str.empty()) res = density::Restriction{parse_count(q_str), a_str.empty() ? 1 : parse_count(a_str)};
        const auto jt = density::joint_count(parse_list(rows_str), r.ctx(), r.beatty(),
                                             density_mode(mode_str), res, opt);
        Table t;
        t.header = {"checkpoint", "last_prime", "pi", "ramified"};
        for (const auto& l : jt.labels) t.header.push_back("pi_C" + l);
        t.header.push_back("pi_B");
        for (const auto& l : jt.labels) t.header.push_back("pi_C" + l + "&B");
        for (const auto& row : jt.rows) {
          std::vector<std::string> cells{u(row.checkpoint), u(row.last_prime), u(row.pi), u(row.ramified)};
          for (auto v : row.pi_C) cells.push_back(u(v));
          cells.push_back(u(row.pi_beatty));
          for (auto v : row.pi_C_beatty) cells.push_back(u(v));
          t.rows.push_back(cells);
        }
        t.notes.push_back("mode: " + density_mode_name(jt.mode));
        r.table("joint_count", t, with_rows(t));
      };
    });
    auto* p = sub(density_cmd, "pnt", "ratio of joint to class counts against 1/alpha");
    p->add_option("--class", class_str, "class label or index (default (12))");
    p->add_option("--grid", grid_str, "X grid (default 1e4,1e5,1e6)");
    p->add_option("--mod", q_str, "modulus q of the restriction");
    p->add_option("--res", a_str, "residue a, coprime to q");
    p->callback([&] {
      command = "density pnt";
      args = {{"class", class_str}, {"grid", grid_str}, {"mod", q_str}, {"res", a_str}};
      action = [&](Runner& r) {
        density::CountOptions opt;
        opt.workers = r.cfg().workers;
        opt.max_x = r.cfg().max_x;
        const std::uint64_t q = q_str.empty() ? 1 : parse_count(q_str);
        const std::uint64_t a = a_str.empty() ? (q == 1 ? 0 : 1) : parse_count(a_str);
        const auto rep = density::pnt_ratio(parse_list(grid_str), r.ctx(), r.class_index(class_str),
                                            r.beatty(), q, a, r.tau(), opt);
        Table t{{"X", "joint", "class_count", "R", "envelope"}, {}, {}};
        for (const auto& pt : rep.points) {
          t.rows.push_back({u(pt.X), u(pt.joint), u(pt.class_count), pt.R ? report::number(*pt.R) : "",
                            report::number(pt.envelope)});
        }
        t.notes.push_back("class " + rep.label + ", q = " + u(q) + ", a = " + u(a) + ", d = " +
                          std::to_string(rep.d) + ", tau = " + report::number(rep.tau) +
                          ", kappa = " + report::number(rep.kappa));
        r.table("pnt", t, with_rows(t));
      };
    });
  }

  // expsum
  CLI::App* expsum_cmd = group("expsum", "exponential sums over Chebotarev primes");
  std::string theta_spec = "pi", k_str = "1", chi_str, d_str = "3", bX = "1e6", bB = "1e3", bq = "1",
              kmax_str = "3";
  {
    auto* c = sub(expsum_cmd, "g", "sum of log p e(theta k p) over the class");
    c->add_option("--class", class_str, "class label or index (default (12))");
    c->add_option("--theta", theta_spec, "frequency base, rational or --alpha syntax (default pi)");
    c->add_option("--k", k_str, "integer multiplier of theta (default 1)");
    c->add_option("--upto", upto, "largest value counted")->required();
    auto* mod = c->add_option("--mod", q_str, "modulus q of the restriction");
    auto* resid = c->add_option("--res", a_str, "residue a, coprime to q");
    auto* chi = c->add_option("--chi", chi_str, "q:index");
    chi->excludes(mod)->excludes(resid);
    c->callback([&] {
      command = "expsum g";
      args = {{"class", class_str}, {"theta", theta_spec}, {"k", k_str}, {"upto", upto},
              {"mod", q_str}, {"res", a_str}, {"chi", chi_str}};
      action = [&](Runner& r) {
        const auto theta = expsum::Frequency::from(parse_real(theta_spec, r.cfg().max_precision),
                                                   static_cast<std::int64_t>(parse_count(k_str)));
        const std::uint64_t X = parse_count(upto);
        const std::size_t ci = r.class_index(class_str);
        expsum::ExpSumResult res;
        if (!chi_str.empty()) {
          const auto colon = chi_str.find(':');
          if (colon == std::string::npos) raise(ErrorCode::InvalidArgument, "--chi expects q:index");
          const auto grp = galois::CharacterGroup::make(parse_count(chi_str.substr(0, colon)));
          const auto idx = parse_count(chi_str.substr(colon + 1));
          if (idx >= grp->size()) raise(ErrorCode::InvalidArgument, "character index out of range");
          res = expsum::g_sum_twisted(X, r.ctx(), ci, grp->character(idx), theta, r.cfg().workers);
        } else {
          const std::uint64_t q = q_str.empty() ? 1 : parse_count(q_str);
          const std::uint64_t a = a_str.empty() ? (q == 1 ? 0 : 1) : parse_count(a_str);
          res = expsum::g_sum(X, r.ctx(), ci, q, a, theta, r.cfg().workers);
        }
        Table t{{"X", "q", res.chi_index ? "chi" : "a", "theta", "value", "trivial_bound", "terms"},
                {{u(res.X), u(res.q), u(res.chi_index ? *res.chi_index : res.a), res.theta,
                  report::complex(res.value), report::number(res.trivial_bound), u(res.terms)}},
                {}};
        r.table("expsum", t, expsum_json(res));
      };
    });
    auto* b = sub(expsum_cmd, "budget", "the error budget E(X, B) and q^(d+1) X E");
    b->add_option("--d", d_str, "degree d of the fixed field (default 3)");
    b->add_option("--X", bX, "X (default 1e6)");
    b->add_option("--B", bB, "B with 1 < B < X (default 1e3)");
    b->add_option("--q", bq, "modulus q (default 1)");
    b->callback([&] {
      command = "expsum budget";
      args = {{"d", d_str}, {"X", bX}, {"B", bB}, {"q", bq}};
      action = [&](Runner& r) {
        const unsigned d = static_cast<unsigned>(parse_count(d_str));
        const auto eb = expsum::error_budget(parse_double(bX), parse_double(bB), parse_count(bq), d);
        const double eta = expsum::eta(d, r.tau());
        Table t{{"E", "bound", "term1", "term2", "term3", "term4", "eta"},
                {{report::number(eb.E), report::number(eb.bound), report::number(eb.terms[0]),
                  report::number(eb.terms[1]), report::number(eb.terms[2]), report::number(eb.terms[3]),
                  report::number(eta)}},
                {}};
        r.table("budget", t, with_rows(t));
      };
    });
    auto* dr = sub(expsum_cmd, "decay", "advisory decay of |G| over an X grid");
    dr->add_option("--class", class_str, "class label or index (default (12))");
    dr->add_option("--theta", theta_spec, "frequency base, rational or --alpha syntax (default pi)");
    dr->add_option("--kmax", kmax_str, "multipliers k = 1..kmax (default 3)");
    dr->add_option("--grid", grid_str, "X grid (default 1e4,1e5,1e6)");
    dr->callback([&] {
      command = "expsum decay";
      args = {{"class", class_str}, {"theta", theta_spec}, {"kmax", kmax_str}, {"grid", grid_str}};
      action = [&](Runner& r) {
        const auto rep = expsum::decay_report(
            r.ctx(), r.class_index(class_str), IrrationalNumber::parse(theta_spec, r.cfg().max_precision),
            static_cast<unsigned>(parse_count(kmax_str)), parse_list(grid_str), r.cfg().workers);
        Table t{{"theta", "X", "abs", "over_X", "over_trivial"}, {}, {rep.note}};
        for (const auto& s : rep.series) {
          for (const auto& row : s.rows) {
            t.rows.push_back({row.theta, u(row.X), report::number(row.abs_value),
                              report::number(row.over_X), report::number(row.over_trivial)});
          }
          if (s.slope) t.notes.push_back("slope of log|G| against log X for " + s.theta + ": " + report::number(*s.slope));
        }
        r.table("decay", t, with_rows(t));
      };
    });
  }

  // bv
  CLI::App* bv_cmd = group("bv", "Bombieri-Vinogradov sums");
  std::string bv_x = "1e6", bv_theta = "0.2", bv_A;
  bool classical = false;
  std::string lc_G;
  {
    auto* c = sub(bv_cmd, "run", "exact sum over q <= x^theta of the maximal error");
    c->add_option("--class", class_str, "class label or index (default (12))");
    c->add_option("--x", bv_x, "x (default 1e6, budget 1e7)");
    c->add_option("--theta", bv_theta, "level theta in (0, 1/2) (default 0.2)");
    c->add_option("-A", bv_A, "display exponent for the normalized column");
    c->add_flag("--classical", classical, "drop the Beatty condition");
    c->callback([&] {
      command = "bv run";
      args = {{"class", class_str}, {"x", bv_x}, {"theta", bv_theta}, {"A", bv_A}, {"classical", classical}};
      action = [&](Runner& r) {
        if (!bv_A.empty()) r.cfg().A = parse_double(bv_A);
        bv::BVOptions opt;
        opt.max_x = r.cfg().bv_max_x;
        opt.max_counters = r.cfg().max_counters;
        opt.workers = r.cfg().workers;
        const std::uint64_t x = parse_count(bv_x);
        if (x > opt.max_x) {
          raise(ErrorCode::BudgetExceeded, "x = " + bv_x + " exceeds the exact-mode cap " + u(opt.max_x));
        }
        const BeattyParams* bp = classical ? nullptr : &r.beatty();
        const auto rep = bv::bv_sum(x, parse_double(bv_theta), r.ctx(), r.class_index(class_str), bp,
                                    r.cfg().A, opt);
        Table t{{"q", "phi", "a", "y", "error"}, {}, {}};
        for (const auto& row : rep.rows) {
          t.rows.push_back({u(row.q), u(row.phi), u(row.a), u(row.y), report::number(row.error)});
        }
        std::string skipped;
        for (auto q : rep.skipped_moduli) skipped += (skipped.empty() ? "" : " ") + u(q);
        t.notes = {"class " + rep.label + ", mode " + rep.mode + ", Q = " + u(rep.Q),
                   "filter: " + rep.filter, "skipped moduli: " + (skipped.empty() ? "none" : skipped),
                   "total = " + report::number(rep.total) + ", normalized = " + report::number(rep.normalized),
                   rep.note};
        ordered_json j;
        j["x"] = rep.x;
        j["theta"] = rep.theta;
        j["Q"] = rep.Q;
        j["A"] = rep.A;
        j["class"] = rep.label;
        j["mode"] = rep.mode;
        j["filter"] = rep.filter;
        j["skipped_moduli"] = rep.skipped_moduli;
        j["total"] = std::stod(report::number(rep.total));
        j["normalized"] = std::stod(report::number(rep.normalized));
        j["note"] = rep.note;
        if (r.cfg().out_dir.empty()) {
          if (r.cfg().format == report::Format::Csv) {
            report::emit(r.cfg(), "", report::to_csv(t, r.cfg()));
          } else {
            j["rows"] = rows_json(t);
            report::emit(r.cfg(), "", report::to_json(j, r.cfg()));
          }
        } else {
          report::emit(r.cfg(), "bv_rows.csv", report::to_csv(t, r.cfg()));
          report::emit(r.cfg(), "bv_summary.json", report::to_json(j, r.cfg()));
        }
      };
    });
    auto* k = sub(bv_cmd, "constants", "level-of-distribution constants as exact rationals");
    k->add_option("--d", d_str, "degree d of the fixed field (default 3)");
    k->add_option("--G", lc_G, "group order (default from the context)");
    k->callback([&] {
      command = "bv constants";
      args = {{"d", d_str}, {"G", lc_G}};
      action = [&](Runner& r) {
        const RealValue tau = parse_real(r.cfg().tau);
        if (!std::holds_alternative<mpq_class>(tau)) raise(ErrorCode::InvalidArgument, "tau must be rational here");
        const std::uint64_t G = lc_G.empty() ? r.ctx().group_order() : parse_count(lc_G);
        const auto lc = bv::level_constants(static_cast<unsigned>(parse_count(d_str)),
                                            std::get<mpq_class>(tau), G);
        Table t{{"theta_level", "kappa", "eta", "theta_MM"},
                {{lc.theta_level.get_str(), lc.kappa.get_str(), lc.eta.get_str(), lc.theta_MM.get_str()}},
                {}};
        r.table("constants", t, with_rows(t));
      };
    });
  }

  // sieve
  CLI::App* sieve_cmd = group("sieve", "Maynard-Tao integrals, admissible tuples and scanners");
  std::string sk = "5", sdeg = "3", sx = "1e6", sm = "1", sH = "0,2,6", st = "3", sN, sR, sW, sD,
              s_theta = "1/3";
  {
    auto* c = sub(sieve_cmd, "mk", "maximize sum_m J^(m) / I over symmetric polynomials");
    c->add_option("-k", sk, "dimension k (default 5)");
    c->add_option("--degree", sdeg, "total degree of F (default 3)");
    c->callback([&] {
      command = "sieve mk";
      args = {{"k", sk}, {"degree", sdeg}};
      action = [&](Runner& r) {
        const auto res = sieve::optimize_Mk(static_cast<unsigned>(parse_count(sk)),
                                            static_cast<unsigned>(parse_count(sdeg)));
        ordered_json j;
        j["k"] = res.k;
        j["degree"] = res.degree;
        j["M"] = std::stod(report::number(res.M));
        j["iterations"] = res.iterations;
        ordered_json basis = ordered_json::array();
        for (std::size_t i = 0; i < res.basis.size(); ++i) {
          basis.push_back({{"partition", res.basis[i]}, {"coefficient", mpq_class(res.coefficients[i]).get_str()}});
        }
        j["basis"] = basis;
        Table t{{"k", "degree", "M"}, {{u(res.k), u(res.degree), report::number(res.M)}}, {}};
        for (std::size_t i = 0; i < res.basis.size(); ++i) {
          std::string p = "m[";
          for (std::size_t m = 0; m < res.basis[i].size(); ++m) p += (m ? " " : "") + std::to_string(res.basis[i][m]);
          t.notes.push_back(p + "] " + mpq_class(res.coefficients[i]).get_str());
        }
        r.table("mk", t, j);
      };
    });
    auto* a = sub(sieve_cmd, "admissible", "the tuple (p_{pi(k)+1}, ..., p_{pi(k)+k})");
    a->add_option("-k", sk, "dimension k (default 5)");
    a->callback([&] {
      command = "sieve admissible";
      args = {{"k", sk}};
      action = [&](Runner& r) {
        const auto t = sieve::make_admissible(static_cast<unsigned>(parse_count(sk)));
        ordered_json j;
        j["k"] = t.H.size();
        j["H"] = t.H;
        j["width"] = t.width;
        j["gap_bound"] = std::stod(report::number(t.gap_bound));
        if (t.within_gap_bound) j["within_gap_bound"] = *t.within_gap_bound;
        Table tb{{"k", "first", "last", "width", "gap_bound", "within_gap_bound"},
                 {{u(t.H.size()), std::to_string(t.H.front()), std::to_string(t.H.back()),
                   std::to_string(t.width), report::number(t.gap_bound),
                   t.within_gap_bound ? (*t.within_gap_bound ? "true" : "false") : ""}},
                 {}};
        r.table("admissible", tb, j);
      };
    });
    auto* ch = sub(sieve_cmd, "check", "admissibility of a tuple");
    ch->add_option("--H", sH, "comma-separated shifts (default 0,2,6)");
    ch->callback([&] {
      command = "sieve check";
      args = {{"H", sH}};
      action = [&](Runner& r) {
        const auto res = sieve::is_admissible(parse_tuple(sH));
        Table t{{"H", "admissible", "covering_prime"},
                {{sH, res.admissible ? "true" : "false", res.covering_prime ? u(*res.covering_prime) : ""}},
                {}};
        r.table("check", t, with_rows(t));
      };
    });
    auto* mt = sub(sieve_cmd, "main-terms", "S1 and S2 main terms for the optimal F");
    mt->add_option("-k", sk, "dimension k (default 5)");
    mt->add_option("--degree", sdeg, "total degree of F (default 3)");
    mt->add_option("--class", class_str, "class label or index (default (12))");
    mt->add_option("--N", sN, "N")->required();
    mt->add_option("--R", sR, "R")->required();
    mt->add_option("--W", sW, "explicit W (default U)");
    mt->callback([&] {
      command = "sieve main-terms";
      args = {{"k", sk}, {"degree", sdeg}, {"class", class_str}, {"N", sN}, {"R", sR}, {"W", sW}};
      action = [&](Runner& r) {
        const unsigned k = static_cast<unsigned>(parse_count(sk));
        const auto opt = sieve::optimize_Mk(k, static_cast<unsigned>(parse_count(sdeg)));
        const auto H = sieve::make_admissible(k).H;
        const std::size_t ci = r.class_index(class_str);
        const double N = parse_double(sN), R = parse_double(sR);
        const auto m = sW.empty() ? sieve::s1_s2_main_terms(N, R, r.ctx(), ci, r.alpha(), opt.F, H)
                                  : sieve::s1_s2_main_terms(N, R, parse_count(sW), r.ctx(), ci, r.alpha(), opt.F, H);
        ordered_json j;
        j["U"] = m.U;
        j["W"] = m.W;
        j["k"] = m.k;
        j["I"] = m.I.get_str();
        j["J_sum"] = m.J_sum.get_str();
        j["delta"] = std::stod(report::number(m.delta));
        j["phi_rad_disc"] = m.phi_rad;
        j["S1"] = std::stod(report::number(m.S1));
        j["S2"] = std::stod(report::number(m.S2));
        j["rho"] = std::stod(report::number(m.rho));
        j["note"] = m.note;
        Table t{{"U", "W", "k", "I", "J_sum", "delta", "S1", "S2", "rho"},
                {{u(m.U), u(m.W), u(m.k), m.I.get_str(), m.J_sum.get_str(), report::number(m.delta),
                  report::number(m.S1), report::number(m.S2), report::number(m.rho)}},
                {m.note}};
        r.table("main_terms", t, j);
      };
    });
    auto* gp = sub(sieve_cmd, "gaps", "minimal q_{n+m} - q_n and the gap histogram");
    gp->add_option("--class", class_str, "class label or index (default (12))");
    gp->add_option("--x", sx, "largest n (default 1e6)");
    gp->add_option("-m", sm, "m (default 1)");
    gp->callback([&] {
      command = "sieve gaps";
      args = {{"class", class_str}, {"x", sx}, {"m", sm}};
      action = [&](Runner& r) {
        const sieve::JointSet set{&r.ctx(), r.class_index(class_str), &r.beatty()};
        const auto g = sieve::gap_scan(parse_count(sx), set, parse_count(sm), r.cfg().workers);
        Table t{{"gap", "count"}, {}, {}};
        for (const auto& [gap, c] : g.histogram) t.rows.push_back({u(gap), u(c)});
        t.notes.push_back("primes " + u(g.count) + ", min gap " + u(g.min_gap) + " first at " + u(g.witness));
        ordered_json j;
        j["m"] = g.m;
        j["count"] = g.count;
        j["min_gap"] = g.min_gap;
        j["witness"] = g.witness;
        ordered_json h = ordered_json::object();
        for (const auto& [gap, c] : g.histogram) h[u(gap)] = c;
        j["histogram"] = h;
        r.table("gaps", t, j);
      };
    });
    auto* cl = sub(sieve_cmd, "clusters", "n <= x with at least m of n + h_i in the set");
    cl->add_option("--class", class_str, "class label or index (default (12))");
    cl->add_option("--x", sx, "largest n (default 1e6)");
    cl->add_option("--H", sH, "comma-separated shifts (default 0,2,6)");
    cl->add_option("-m", sm, "m (default 1)");
    cl->callback([&] {
      command = "sieve clusters";
      args = {{"class", class_str}, {"x", sx}, {"H", sH}, {"m", sm}};
      action = [&](Runner& r) {
        const sieve::JointSet set{&r.ctx(), r.class_index(class_str), &r.beatty()};
        const auto c = sieve::cluster_scan(parse_count(sx), parse_tuple(sH), set, parse_count(sm), r.cfg().workers);
        Table t{{"count", "witnesses"}, {}, {}};
        std::string w;
        for (auto n : c.witnesses) w += (w.empty() ? "" : " ") + u(n);
        t.rows.push_back({u(c.count), w});
        ordered_json j;
        j["count"] = c.count;
        j["witnesses"] = c.witnesses;
        r.table("clusters", t, j);
      };
    });
    auto* ap = sub(sieve_cmd, "aps", "t-term progressions with every shift in the set");
    ap->add_option("--class", class_str, "class label or index (default (12))");
    ap->add_option("--x", sx, "largest n (default 1e6)");
    ap->add_option("--H", sH, "comma-separated shifts (default 0,2,6)");
    ap->add_option("-t", st, "progression length, 3 or 4 (default 3)");
    ap->callback([&] {
      command = "sieve aps";
      args = {{"class", class_str}, {"x", sx}, {"H", sH}, {"t", st}};
      action = [&](Runner& r) {
        const sieve::JointSet set{&r.ctx(), r.class_index(class_str), &r.beatty()};
        const auto aps = sieve::ap_scan(parse_count(sx), parse_tuple(sH), set,
                                        static_cast<unsigned>(parse_count(st)), 100, r.cfg().workers);
        Table t{{"a", "d", "t"}, {}, {}};
        ordered_json arr = ordered_json::array();
        for (const auto& p : aps) {
          t.rows.push_back({u(p.a), u(p.d), u(p.t)});
          arr.push_back({{"a", p.a}, {"d", p.d}, {"t", p.t}});
        }
        r.table("aps", t, ordered_json{{"progressions", arr}});
      };
    });
    auto* th = sub(sieve_cmd, "threshold", "scale of the k threshold and the bounded-gap bound");
    th->add_option("--class", class_str, "class label or index (default (12))");
    th->add_option("-m", sm, "m (default 1)");
    th->add_option("--theta", s_theta, "level of distribution theta (default 1/3)");
    th->add_option("--D", sD, "constant D for the bounded-gap bound");
    th->callback([&] {
      command = "sieve threshold";
      args = {{"class", class_str}, {"m", sm}, {"theta", s_theta}, {"D", sD}};
      action = [&](Runner& r) {
        std::optional<double> D;
        if (!sD.empty()) D = parse_double(sD);
        const auto t = sieve::gt_threshold(parse_count(sm), r.ctx(), r.class_index(class_str), r.alpha(),
                                           parse_double(s_theta), D);
        Table tb{{"log_threshold", "threshold", "phi_disc", "log_gap_bound"},
                 {{report::number(t.log_threshold), report::number(t.threshold), u(t.phi_disc),
                   t.log_gap_bound ? report::number(*t.log_gap_bound) : ""}},
                 {t.note}};
        r.table("threshold", tb, with_rows(tb));
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    RunConfig cfg;
    if (!g.config_path.empty()) cfg = RunConfig::load(g.config_path);
    cfg.command = command;
    if (!g.ctx.empty()) cfg.ctx = g.ctx;
    if (!g.alpha.empty()) cfg.alpha = g.alpha;
    if (!g.beta.empty()) cfg.beta = g.beta;
    if (!g.tau.empty()) cfg.tau = g.tau;
    if (!g.out.empty()) cfg.out_dir = g.out;
    if (!g.format.empty()) cfg.format = report::parse_format(g.format);
    if (g.max_precision != 0) cfg.max_precision = g.max_precision;
    if (g.workers != 0) {
      cfg.workers = g.workers;
    } else if (g.config_path.empty()) {
      cfg.workers = std::max(1u, std::thread::hardware_concurrency());
    }
    cfg.args = args;
    cfg.validate();
    Runner runner(cfg);
    runner.tau();
    if (cfg.tau == "1" && (cfg.alpha == "pi" || cfg.alpha == "e") &&
        (command == "density pnt" || command == "expsum budget")) {
      std::cerr << "warning: the type of " << cfg.alpha
                << " is not known; tau = 1 is a declared assumption\n";
    }
    action(runner);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_budget_error(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
