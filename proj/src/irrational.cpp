#include "chebeatty/irrational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>

#include "chebeatty/error.hpp"

namespace chebeatty {

struct IrrationalNumber::State {
  Kind kind = Kind::Derived;
  std::string name;
  long max_precision = kDefaultMaxPrecision;
  std::optional<Surd> surd;
  // Digit streams: |value| lies within 10^-n of int_part.digits[0..n).
  bool negative = false;
  std::string int_part;
  std::string frac_digits;
  Evaluator eval;

  mutable std::mutex mutex;
  mutable std::optional<DyadicInterval> cache;
};

namespace {

long bit_length(const mpz_class& z) {
  if (sgn(z) == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2));
}

mpz_class pow2(long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(e));
  return r;
}

// Sum of (-1)^k / ((2k+1) x^(2k+1)) times 2^N, with its absolute error bound.
std::pair<mpz_class, mpz_class> atan_inv(unsigned long x, long N) {
  mpz_class power = pow2(N) / x;
  const unsigned long x2 = x * x;
  mpz_class sum = 0;
  unsigned long k = 0;
  while (sgn(power) != 0) {
    mpz_class term = power / (2 * k + 1);
    if (k % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
    power /= x2;
    ++k;
  }
  return {sum, mpz_class(3 * k + 2)};
}

DyadicInterval compute_pi(long t) {
  for (long guard = 16 + bit_length(mpz_class(t)); ; guard += 16) {
    const long N = t + guard;
    auto [a, ea] = atan_inv(5, N);
    auto [b, eb] = atan_inv(239, N);
    mpz_class v = 16 * a - 4 * b;
    mpz_class err = 16 * ea + 4 * eb;
    DyadicInterval r(v - err, v + err, N);
    if (r.width_at_most(t)) return r;
  }
}

DyadicInterval compute_e(long t) {
  for (long guard = 16 + bit_length(mpz_class(t)); ; guard += 16) {
    const long N = t + guard;
    mpz_class term = pow2(N);
    mpz_class sum = term;
    unsigned long k = 1;
    for (;; ++k) {
      term /= k;
      if (sgn(term) == 0) break;
      sum += term;
    }
    DyadicInterval r(sum, sum + 2 * k + 4, N);
    if (r.width_at_most(t)) return r;
  }
}

DyadicInterval compute_surd(const IrrationalNumber::Surd& s, long t) {
  const long N = t + bit_length(abs(s.b)) + 3;
  mpz_class scaled = s.D;
  mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), static_cast<mp_bitcnt_t>(2 * N));
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
  mpz_class base = s.a;
  mpz_mul_2exp(base.get_mpz_t(), base.get_mpz_t(), static_cast<mp_bitcnt_t>(N));
  mpz_class n1 = base + s.b * root;
  mpz_class n2 = base + s.b * (root + 1);
  mpz_class lo_num = std::min(n1, n2);
  mpz_class hi_num = std::max(n1, n2);
  mpz_class lo, hi;
  if (sgn(s.c) > 0) {
    mpz_fdiv_q(lo.get_mpz_t(), lo_num.get_mpz_t(), s.c.get_mpz_t());
    mpz_cdiv_q(hi.get_mpz_t(), hi_num.get_mpz_t(), s.c.get_mpz_t());
  } else {
    mpz_fdiv_q(lo.get_mpz_t(), hi_num.get_mpz_t(), s.c.get_mpz_t());
    mpz_cdiv_q(hi.get_mpz_t(), lo_num.get_mpz_t(), s.c.get_mpz_t());
  }
  return {lo, hi, N};
}

DyadicInterval divide_exact(const DyadicInterval& x, const mpz_class& den) {
  mpz_class lo, hi;
  mpz_fdiv_q(lo.get_mpz_t(), x.lo().get_mpz_t(), den.get_mpz_t());
  mpz_cdiv_q(hi.get_mpz_t(), x.hi().get_mpz_t(), den.get_mpz_t());
  return {lo, hi, x.scale()};
}

// Smallest e with |v| <= 2^e for every v in the interval.
long magnitude_bits(const DyadicInterval& x) {
  mpz_class m = std::max(abs(x.lo()), abs(x.hi()));
  return bit_length(m) - x.scale() + 1;
}

IrrationalNumber::Surd normalized(IrrationalNumber::Surd s) {
  if (sgn(s.c) < 0) {
    s.a = -s.a;
    s.b = -s.b;
    s.c = -s.c;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), s.a.get_mpz_t(), s.b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.c.get_mpz_t());
  if (g > 1) {
    s.a /= g;
    s.b /= g;
    s.c /= g;
  }
  return s;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

mpz_class parse_integer(const std::string& s) {
  mpz_class z;
  if (s.empty() || z.set_str(s, 10) != 0) raise(ErrorCode::ParseError, "not an integer: '" + s + "'");
  return z;
}

std::optional<mpq_class> parse_rational(const std::string& text) {
  const std::string s = trimmed(text);
  if (s.empty()) return std::nullopt;
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0) return std::nullopt;
    if (den.set_str(s.substr(slash + 1), 10) != 0) return std::nullopt;
    if (sgn(den) == 0) raise(ErrorCode::ParseError, "zero denominator in '" + s + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '-' || s[i] == '+') neg = s[i++] == '-';
  std::string digits;
  long frac = -1;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i];
      if (frac >= 0) ++frac;
    } else if (s[i] == '.' && frac < 0) {
      frac = 0;
    } else {
      return std::nullopt;
    }
  }
  if (digits.empty()) return std::nullopt;
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(std::max(frac, 0L)));
  mpq_class q(neg ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

}  // namespace

IrrationalNumber::IrrationalNumber(std::shared_ptr<State> state) : state_(std::move(state)) {}

IrrationalNumber IrrationalNumber::pi(long max_precision) {
  auto s = std::make_shared<State>();
  s->kind = Kind::Pi;
  s->name = "pi";
  s->max_precision = max_precision;
  return IrrationalNumber(s);
}

IrrationalNumber IrrationalNumber::e(long max_precision) {
  auto s = std::make_shared<State>();
  s->kind = Kind::E;
  s->name = "e";
  s->max_precision = max_precision;
  return IrrationalNumber(s);
}

IrrationalNumber IrrationalNumber::surd(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                                        const mpz_class& D, long max_precision) {
  if (sgn(D) <= 0) raise(ErrorCode::InvalidSurd, "D must be positive");
  if (mpz_perfect_square_p(D.get_mpz_t())) {
    raise(ErrorCode::InvalidSurd, "D = " + D.get_str() + " is a perfect square");
  }
  if (sgn(c) == 0) raise(ErrorCode::InvalidSurd, "c must be nonzero");
  if (sgn(b) == 0) raise(ErrorCode::InvalidSurd, "b = 0 gives a rational value");
  auto s = std::make_shared<State>();
  s->kind = Kind::Surd;
  s->surd = normalized(Surd{a, b, c, D});
  const Surd& n = *s->surd;
  if (n.a == 0 && n.b == 1 && n.c == 1) {
    s->name = "sqrt" + n.D.get_str();
  } else {
    s->name = "surd:" + n.a.get_str() + "," + n.b.get_str() + "," + n.c.get_str() + "," +
              n.D.get_str();
  }
  s->max_precision = max_precision;
  return IrrationalNumber(s);
}

IrrationalNumber IrrationalNumber::sqrt(const mpz_class& D, long max_precision) {
  return surd(0, 1, 1, D, max_precision);
}

IrrationalNumber IrrationalNumber::golden_ratio(long max_precision) {
  return surd(1, 1, 2, 5, max_precision);
}

IrrationalNumber IrrationalNumber::from_digits(const std::string& text, const std::string& name,
                                               long max_precision) {
  auto s = std::make_shared<State>();
  s->kind = Kind::Digits;
  s->name = name;
  s->max_precision = max_precision;
  std::size_t i = 0;
  std::string compact;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
  }
  if (!compact.empty() && (compact[0] == '-' || compact[0] == '+')) {
    s->negative = compact[0] == '-';
    ++i;
  }
  for (; i < compact.size() && std::isdigit(static_cast<unsigned char>(compact[i])); ++i) {
    s->int_part += compact[i];
  }
  if (s->int_part.empty()) raise(ErrorCode::ParseError, name + ": missing integer part");
  if (i >= compact.size() || compact[i] != '.') raise(ErrorCode::ParseError, name + ": missing '.'");
  for (++i; i < compact.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(compact[i]))) {
      raise(ErrorCode::ParseError, name + ": unexpected character '" + std::string(1, compact[i]) +
                                       "' at offset " + std::to_string(i));
    }
    s->frac_digits += compact[i];
  }
  if (s->frac_digits.empty()) raise(ErrorCode::ParseError, name + ": no digits after '.'");
  return IrrationalNumber(s);
}

IrrationalNumber IrrationalNumber::from_digit_file(const std::string& path, long max_precision) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::ParseError, "cannot open digit file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_digits(buf.str(), "file:" + path, max_precision);
}

IrrationalNumber IrrationalNumber::derived(std::string name, Evaluator eval, long max_precision) {
  auto s = std::make_shared<State>();
  s->kind = Kind::Derived;
  s->name = std::move(name);
  s->eval = std::move(eval);
  s->max_precision = max_precision;
  return IrrationalNumber(s);
}

IrrationalNumber IrrationalNumber::parse(const std::string& spec_text, long max_precision) {
  const std::string spec = trimmed(spec_text);
  if (spec == "pi") return pi(max_precision);
  if (spec == "e") return e(max_precision);
  if (spec == "phi") return golden_ratio(max_precision);
  if (spec.rfind("sqrt", 0) == 0) return sqrt(parse_integer(spec.substr(4)), max_precision);
  if (spec.rfind("surd:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(trimmed(item));
    if (parts.size() != 4) raise(ErrorCode::ParseError, "surd needs a,b,c,D: '" + spec + "'");
    return surd(parse_integer(parts[0]), parse_integer(parts[1]), parse_integer(parts[2]),
                parse_integer(parts[3]), max_precision);
  }
  if (spec.rfind("file:", 0) == 0) return from_digit_file(spec.substr(5), max_precision);
  raise(ErrorCode::ParseError, "unknown constant '" + spec + "'");
}

IrrationalNumber::Kind IrrationalNumber::kind() const { return state_->kind; }
const std::string& IrrationalNumber::name() const { return state_->name; }
long IrrationalNumber::max_precision() const { return state_->max_precision; }

const IrrationalNumber::Surd* IrrationalNumber::as_surd() const {
  return state_->surd ? &*state_->surd : nullptr;
}

DyadicInterval IrrationalNumber::enclose(long g) const {
  if (g > state_->max_precision) {
    raise(ErrorCode::PrecisionExhausted, name() + ": requested " + std::to_string(g) +
                                             " bits exceeds the cap of " +
                                             std::to_string(state_->max_precision));
  }
  return enclose_raw(g);
}

DyadicInterval IrrationalNumber::enclose_raw(long g) const {
  const State& s = *state_;
  std::lock_guard<std::mutex> lock(s.mutex);
  if (s.cache && s.cache->width_at_most(g + 1)) return s.cache->rescaled(g + 2);
  const long t = g + 3;
  DyadicInterval raw;
  switch (s.kind) {
    case Kind::Pi:
      raw = compute_pi(t);
      break;
    case Kind::E:
      raw = compute_e(t);
      break;
    case Kind::Surd:
      raw = compute_surd(*s.surd, t);
      break;
    case Kind::Digits: {
      const long n = static_cast<long>(std::ceil((t + 1) * 0.30102999566398120)) + 1;
      if (n > static_cast<long>(s.frac_digits.size())) {
        raise(ErrorCode::PrecisionExhausted,
              s.name + ": " + std::to_string(t) + " bits need " + std::to_string(n) +
                  " digits, stream has " + std::to_string(s.frac_digits.size()));
      }
      mpz_class v(s.int_part + s.frac_digits.substr(0, static_cast<std::size_t>(n)), 10);
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(n));
      mpq_class lo(v - 1, den);
      mpq_class hi(v + 1, den);
      lo.canonicalize();
      hi.canonicalize();
      if (s.negative) {
        std::swap(lo, hi);
        lo = -lo;
        hi = -hi;
      }
      raw = DyadicInterval(floor_scaled(lo, t + 1), ceil_scaled(hi, t + 1), t + 1);
      break;
    }
    case Kind::Derived:
      raw = s.eval(t);
      break;
  }
  s.cache = s.cache ? s.cache->intersect(raw) : raw;
  return s.cache->rescaled(g + 2);
}

double IrrationalNumber::approx() const { return enclose_raw(60).mid_double(); }

IrrationalNumber reciprocal(const IrrationalNumber& x) {
  if (const auto* s = x.as_surd()) {
    return IrrationalNumber::surd(s->c * s->a, -s->c * s->b, s->a * s->a - s->b * s->b * s->D, s->D,
                                  x.max_precision());
  }
  return IrrationalNumber::derived(
      "1/" + x.name(),
      [x](long t) {
        long p = t + 8;
        for (int iter = 0; iter < 64; ++iter) {
          const DyadicInterval xi = x.enclose_raw(p);
          if (!xi.strictly_positive() && !xi.strictly_negative()) {
            p *= 2;
            continue;
          }
          DyadicInterval r = xi.reciprocal(t + 2);
          if (r.width_at_most(t)) return r;
          p += std::max(8L, r.width_log2() + t + 2);
        }
        raise(ErrorCode::PrecisionExhausted, "reciprocal of " + x.name() + " did not resolve");
      },
      x.max_precision());
}

IrrationalNumber affine(const IrrationalNumber& x, const mpq_class& mul, const mpq_class& add) {
  if (sgn(mul) == 0) raise(ErrorCode::InvalidArgument, "affine map with zero slope is rational");
  if (const auto* s = x.as_surd()) {
    const mpz_class& mn = mul.get_num();
    const mpz_class& md = mul.get_den();
    const mpz_class& an = add.get_num();
    const mpz_class& ad = add.get_den();
    return IrrationalNumber::surd(s->a * mn * ad + an * s->c * md, s->b * mn * ad, s->c * md * ad,
                                  s->D, x.max_precision());
  }
  std::string name = x.name();
  if (mul != 1) name = mul.get_str() + "*" + name;
  if (sgn(add) != 0) name += (sgn(add) > 0 ? "+" : "") + add.get_str();
  return IrrationalNumber::derived(
      name,
      [x, mul, add](long t) {
        const mpz_class& num = mul.get_num();
        DyadicInterval y = x.enclose_raw(t + bit_length(abs(num)) + 3) * num;
        y = divide_exact(y, mul.get_den());
        return y + DyadicInterval::from_rational(add, t + 3);
      },
      x.max_precision());
}

IrrationalNumber product(const IrrationalNumber& x, const IrrationalNumber& y) {
  const auto* sx = x.as_surd();
  const auto* sy = y.as_surd();
  if (sx && sy && sx->D == sy->D) {
    mpz_class b = sx->a * sy->b + sx->b * sy->a;
    if (sgn(b) == 0) raise(ErrorCode::InvalidArgument, "product is rational");
    return IrrationalNumber::surd(sx->a * sy->a + sx->b * sy->b * sx->D, b, sx->c * sy->c, sx->D,
                                  std::min(x.max_precision(), y.max_precision()));
  }
  return IrrationalNumber::derived(
      "(" + x.name() + ")*(" + y.name() + ")",
      [x, y](long t) {
        const long ex = magnitude_bits(x.enclose_raw(8)) + 1;
        const long ey = magnitude_bits(y.enclose_raw(8)) + 1;
        const DyadicInterval xi = x.enclose_raw(t + std::max(ey, 0L) + 3);
        const DyadicInterval yi = y.enclose_raw(t + std::max(ex, 0L) + 3);
        return DyadicInterval::multiply(xi, yi, t + 3);
      },
      std::min(x.max_precision(), y.max_precision()));
}

DyadicInterval enclose(const IrrationalNumber& x, long g) { return x.enclose(g); }

DyadicInterval enclose(const RealValue& x, long g) {
  if (const auto* q = std::get_if<mpq_class>(&x)) return DyadicInterval::from_rational(*q, g + 2);
  return std::get<IrrationalNumber>(x).enclose(g);
}

double approx(const RealValue& x) {
  if (const auto* q = std::get_if<mpq_class>(&x)) return q->get_d();
  return std::get<IrrationalNumber>(x).approx();
}

std::string describe(const RealValue& x) {
  if (const auto* q = std::get_if<mpq_class>(&x)) return q->get_str();
  return std::get<IrrationalNumber>(x).name();
}

RealValue parse_real(const std::string& spec, long max_precision) {
  if (auto q = parse_rational(spec)) return *q;
  return IrrationalNumber::parse(spec, max_precision);
}

DyadicInterval linear_enclosure(const IrrationalNumber& x, const mpz_class& m,
                                const RealValue& shift, long g) {
  DyadicInterval xm = sgn(m) == 0 ? DyadicInterval::point(0)
                                  : x.enclose(g + bit_length(abs(m)) + 2) * m;
  return xm + enclose(shift, g + 2);
}

FracInterval frac_linear(const IrrationalNumber& x, const mpz_class& m, const RealValue& shift,
                         long g) {
  if (g < 1) raise(ErrorCode::InvalidArgument, "frac_linear needs g >= 1");
  const DyadicInterval y = linear_enclosure(x, m, shift, g);
  if (auto f = y.certain_floor()) return {y - DyadicInterval::point(*f), std::nullopt};
  mpz_class n;
  mpz_fdiv_q_2exp(n.get_mpz_t(), y.hi().get_mpz_t(), static_cast<mp_bitcnt_t>(y.scale()));
  mpz_class one = pow2(y.scale());
  mpz_class shift_n = n * one;
  DyadicInterval high(y.lo() - shift_n + one, one, y.scale());
  DyadicInterval low(0, y.hi() - shift_n, y.scale());
  return {high, low};
}

namespace {

struct CfTerm {
  mpz_class a;
  mpz_class p;
  mpz_class q;
  mpq_class gap;
  double log_next = 0.0;  // log of the next complete quotient
};

class ConvergentBuilder {
 public:
  void push(const mpz_class& a) {
    mpz_class p = a * p1_ + p2_;
    mpz_class q = a * q1_ + q2_;
    p2_ = p1_;
    q2_ = q1_;
    p1_ = p;
    q1_ = q;
    terms.push_back({a, p, q, 0, 0.0});
  }
  const mpz_class& prev_q(std::size_t i) const { return i == 0 ? zero_ : terms[i - 1].q; }

  std::vector<CfTerm> terms;

 private:
  mpz_class p1_ = 1, q1_ = 0, p2_ = 0, q2_ = 1;
  mpz_class zero_ = 0;
};

using StopRule = std::function<bool(const std::vector<CfTerm>&)>;

// Exact expansion of (P + sqrt(D)) / Q using the periodic algorithm.
std::vector<CfTerm> surd_expansion(const IrrationalNumber::Surd& s, const StopRule& done,
                                   std::size_t hard_cap) {
  mpz_class D = s.b * s.b * s.D;
  mpz_class P = sgn(s.b) > 0 ? s.a : mpz_class(-s.a);
  mpz_class Q = sgn(s.b) > 0 ? s.c : mpz_class(-s.c);
  if (mpz_class((D - P * P) % Q) != 0) {
    const mpz_class aq = abs(Q);
    P *= aq;
    D *= Q * Q;
    Q *= aq;
  }
  mpz_class root;
  mpz_sqrt(root.get_mpz_t(), D.get_mpz_t());
  mpz_class fine_scaled = D;
  mpz_mul_2exp(fine_scaled.get_mpz_t(), fine_scaled.get_mpz_t(), 128);
  mpz_class fine;
  mpz_sqrt(fine.get_mpz_t(), fine_scaled.get_mpz_t());
  const mpz_class unit = pow2(64);

  ConvergentBuilder b;
  while (!done(b.terms)) {
    if (b.terms.size() >= hard_cap) raise(ErrorCode::BudgetExceeded, "too many partial quotients");
    mpz_class a;
    mpz_class num = sgn(Q) > 0 ? mpz_class(P + root) : mpz_class(P + root + 1);
    mpz_fdiv_q(a.get_mpz_t(), num.get_mpz_t(), Q.get_mpz_t());
    b.push(a);
    P = a * Q - P;
    Q = (D - P * P) / Q;
    // Rational lower bound L on the next complete quotient (P + sqrt D)/Q.
    mpq_class L(P * unit + (sgn(Q) > 0 ? fine : mpz_class(fine + 1)), Q * unit);
    L.canonicalize();
    CfTerm& t = b.terms.back();
    const mpz_class& qp = b.prev_q(b.terms.size() - 1);
    mpq_class denom = t.q * (L * t.q + qp);
    if (sgn(denom) <= 0 || denom <= mpq_class(t.q * t.q)) {
      raise(ErrorCode::PrecisionExhausted, "convergent gap bound not certified");
    }
    t.gap = 1 / denom;
    t.log_next = log_abs(L);
  }
  return std::move(b.terms);
}

// Quotients certified from the two rational endpoints of one enclosure.
std::vector<CfTerm> interval_expansion(const DyadicInterval& enc, std::size_t hard_cap) {
  const mpq_class e_lo = enc.lower();
  const mpq_class e_hi = enc.upper();
  mpq_class lo = e_lo;
  mpq_class hi = e_hi;
  ConvergentBuilder b;
  while (b.terms.size() < hard_cap) {
    mpz_class fl, fh;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(fh.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (fl != fh) break;
    b.push(fl);
    CfTerm& t = b.terms.back();
    mpq_class approx(t.p, t.q);
    mpq_class gap = std::max(abs(mpq_class(e_lo - approx)), abs(mpq_class(e_hi - approx)));
    if (gap >= mpq_class(1, t.q * t.q)) {
      b.terms.pop_back();
      break;
    }
    t.gap = gap;
    mpq_class rl = lo - fl;
    mpq_class rh = hi - fh;
    if (sgn(rl) == 0 || sgn(rh) == 0) {
      b.terms.pop_back();
      break;
    }
    lo = 1 / rl;
    hi = 1 / rh;
    t.log_next = log_abs(lo);
  }
  return std::move(b.terms);
}

std::vector<CfTerm> expansion(const IrrationalNumber& x, const StopRule& done,
                              std::size_t hard_cap) {
  if (const auto* s = x.as_surd()) return surd_expansion(*s, done, hard_cap);
  for (long g = kStartPrecision;; g *= 2) {
    const long use = std::min(g, x.max_precision());
    auto terms = interval_expansion(x.enclose(use), hard_cap);
    if (done(terms)) return terms;
    if (terms.size() >= hard_cap) raise(ErrorCode::BudgetExceeded, "too many partial quotients");
    if (use >= x.max_precision()) {
      raise(ErrorCode::PrecisionExhausted,
            x.name() + ": only " + std::to_string(terms.size()) + " partial quotients certified at " +
                std::to_string(use) + " bits");
    }
  }
}

constexpr std::size_t kMaxConvergents = 10000;

std::vector<CfTerm> terms_upto(const IrrationalNumber& x, const mpz_class& Q) {
  auto done = [&Q](const std::vector<CfTerm>& t) {
    // The first convergent past Q plus one more certified quotient.
    return t.size() >= 2 && t[t.size() - 2].q > Q;
  };
  auto terms = expansion(x, done, kMaxConvergents + 1);
  terms.pop_back();
  return terms;
}

RationalApprox to_approx(const CfTerm& t) { return {t.p, t.q, t.gap}; }

}  // namespace

std::vector<RationalApprox> convergents(const IrrationalNumber& x, std::size_t n) {
  if (n > kMaxConvergents) {
    raise(ErrorCode::BudgetExceeded, "at most " + std::to_string(kMaxConvergents) + " convergents");
  }
  auto done = [n](const std::vector<CfTerm>& t) { return t.size() >= n + 1; };
  auto terms = expansion(x, done, n + 1);
  std::vector<RationalApprox> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(to_approx(terms[i]));
  return out;
}

std::vector<RationalApprox> convergents_upto(const IrrationalNumber& x, const mpz_class& Q) {
  std::vector<RationalApprox> out;
  for (const auto& t : terms_upto(x, Q)) out.push_back(to_approx(t));
  return out;
}

std::optional<RationalApprox> good_approx(const IrrationalNumber& x, double B, double X) {
  if (!(B > 1.0) || !std::isfinite(B) || !std::isfinite(X)) {
    raise(ErrorCode::InvalidArgument, "good_approx needs finite B > 1");
  }
  const mpq_class lo(B);
  const mpq_class hi = mpq_class(X) / lo;
  if (hi <= lo) return std::nullopt;
  mpz_class cap;
  mpz_fdiv_q(cap.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
  std::optional<RationalApprox> best;
  for (const auto& t : terms_upto(x, cap)) {
    const mpq_class s(t.q);
    if (s > lo && s < hi) best = to_approx(t);
  }
  return best;
}

TypeEstimate estimate_type(const IrrationalNumber& x, const mpz_class& Q) {
  if (Q < 10) raise(ErrorCode::InvalidArgument, "estimate_type needs Q >= 10");
  const auto terms = terms_upto(x, Q);
  struct Point {
    double lq, lv;
    bool tail;
  };
  std::vector<Point> pts;
  TypeEstimate est;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const CfTerm& t = terms[i];
    if (t.q < 2 || t.q > Q) continue;
    const double lq = log_abs(t.q);
    // ||q x|| = 1 / (x' q + q_prev) with x' the next complete quotient.
    const mpz_class& qp = i == 0 ? mpz_class(0) : terms[i - 1].q;
    const double ratio = mpq_class(qp, t.q).get_d();
    const double lv = lq + t.log_next + std::log1p(ratio * std::exp(-t.log_next));
    pts.push_back({lq, lv, t.q * t.q >= Q});
    est.max_ratio = std::max(est.max_ratio, lv / lq);
  }
  std::size_t tail = 0;
  for (const auto& p : pts) tail += p.tail ? 1 : 0;
  const bool use_all = tail < 3;
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : pts) {
    if (!use_all && !p.tail) continue;
    n += 1;
    sx += p.lq;
    sy += p.lv;
    sxx += p.lq * p.lq;
    sxy += p.lq * p.lv;
  }
  est.points = static_cast<std::size_t>(n);
  const double det = n * sxx - sx * sx;
  if (n >= 2 && det > 0) {
    est.slope = (n * sxy - sx * sy) / det;
  } else {
    est.slope = est.max_ratio;
  }
  est.tau_hat = std::max(1.0, est.slope);
  return est;
}

}  // namespace chebeatty
