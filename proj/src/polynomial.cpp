#include "chebeatty/polynomial.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "chebeatty/error.hpp"

namespace chebeatty::galois {

int degree(const IntPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    if (sgn(f[static_cast<std::size_t>(i)]) != 0) return i;
  }
  return -1;
}

std::string to_string(const IntPoly& f) {
  std::string out;
  for (int i = degree(f); i >= 0; --i) {
    const mpz_class& c = f[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    const bool neg = sgn(c) < 0;
    const mpz_class mag = abs(c);
    if (!out.empty()) {
      out += neg ? " - " : " + ";
    } else if (neg) {
      out += "-";
    }
    if (mag != 1 || i == 0) out += mag.get_str();
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

mpz_class resultant(const IntPoly& f, const IntPoly& g) {
  const int m = degree(f);
  const int n = degree(g);
  if (m < 0 || n < 0) return 0;
  const int size = m + n;
  if (size == 0) return 1;
  std::vector<std::vector<mpz_class>> a(static_cast<std::size_t>(size),
                                        std::vector<mpz_class>(static_cast<std::size_t>(size), 0));
  for (int r = 0; r < n; ++r) {
    for (int j = 0; j <= m; ++j) a[r][r + j] = f[static_cast<std::size_t>(m - j)];
  }
  for (int r = 0; r < m; ++r) {
    for (int j = 0; j <= n; ++j) a[n + r][r + j] = g[static_cast<std::size_t>(n - j)];
  }
  // Bareiss elimination; every division is exact.
  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < size - 1; ++k) {
    if (sgn(a[k][k]) == 0) {
      int swap = -1;
      for (int r = k + 1; r < size; ++r) {
        if (sgn(a[r][k]) != 0) {
          swap = r;
          break;
        }
      }
      if (swap < 0) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (int i = k + 1; i < size; ++i) {
      for (int j = k + 1; j < size; ++j) {
        mpz_class v = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = v;
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  mpz_class det = a[size - 1][size - 1];
  return sign > 0 ? det : mpz_class(-det);
}

mpz_class discriminant(const IntPoly& f) {
  const int n = degree(f);
  if (n < 1) raise(ErrorCode::InvalidArgument, "discriminant needs degree >= 1");
  IntPoly df(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) df[i - 1] = f[static_cast<std::size_t>(i)] * i;
  mpz_class r = resultant(f, df);
  mpz_divexact(r.get_mpz_t(), r.get_mpz_t(), f[static_cast<std::size_t>(n)].get_mpz_t());
  if ((n * (n - 1) / 2) % 2 == 1) r = -r;
  return r;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  __int128 r0 = p, r1 = a % p, s0 = 0, s1 = 1;
  while (r1 != 0) {
    const __int128 q = r0 / r1;
    const __int128 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    const __int128 s2 = s0 - q * s1;
    s0 = s1;
    s1 = s2;
  }
  if (r0 != 1) raise(ErrorCode::InvalidArgument, "element is not invertible");
  if (s0 < 0) s0 += p;
  return static_cast<std::uint64_t>(s0);
}

FpPoly reduce(const IntPoly& f, std::uint64_t p) {
  FpPoly out(f.size());
  const mpz_class mp(static_cast<unsigned long>(p));
  for (std::size_t i = 0; i < f.size(); ++i) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), f[i].get_mpz_t(), mp.get_mpz_t());
    out[i] = r.get_ui();
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

namespace {

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const FpPoly& a) { return static_cast<int>(a.size()) - 1; }

// a mod b, b nonzero.
FpPoly rem(FpPoly a, const FpPoly& b, std::uint64_t p) {
  const std::uint64_t inv = invmod(b.back(), p);
  while (deg(a) >= deg(b)) {
    const std::uint64_t c = mulmod(a.back(), inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(c, b[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

FpPoly quot(FpPoly a, const FpPoly& b, std::uint64_t p) {
  const std::uint64_t inv = invmod(b.back(), p);
  if (deg(a) < deg(b)) return {};
  FpPoly q(a.size() - b.size() + 1, 0);
  while (deg(a) >= deg(b)) {
    const std::uint64_t c = mulmod(a.back(), inv, p);
    const std::size_t shift = a.size() - b.size();
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(c, b[i], p)) % p;
    }
    trim(a);
  }
  return q;
}

FpPoly mulmod_poly(const FpPoly& a, const FpPoly& b, const FpPoly& f, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  trim(c);
  return rem(std::move(c), f, p);
}

FpPoly powmod_poly(FpPoly base, std::uint64_t e, const FpPoly& f, std::uint64_t p) {
  FpPoly r{1};
  base = rem(std::move(base), f, p);
  while (e) {
    if (e & 1) r = mulmod_poly(r, base, f, p);
    e >>= 1;
    if (e) base = mulmod_poly(base, base, f, p);
  }
  return r;
}

FpPoly gcd_poly(FpPoly a, FpPoly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    FpPoly r = rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    const std::uint64_t inv = invmod(a.back(), p);
    for (auto& c : a) c = mulmod(c, inv, p);
  }
  return a;
}

// Arithmetic in F_p[x]/(f) for monic f of small degree, with coefficients in
// Montgomery form.
class SmallQuotientRing {
 public:
  static constexpr int kMaxDegree = 16;
  using Elem = std::array<std::uint64_t, kMaxDegree>;

  SmallQuotientRing(const FpPoly& f, std::uint64_t p) : p_(p), n_(deg(f)) {
    std::uint64_t inv = p;  // Newton iteration for p^-1 mod 2^64
    for (int i = 0; i < 6; ++i) inv *= 2 - p * inv;
    neg_inv_ = ~inv + 1;
    const auto r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) % p);
    r2_ = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * r % p);
    for (int i = 0; i < n_; ++i) fneg_[i] = to_mont((p - f[i]) % p);
  }

  std::uint64_t to_mont(std::uint64_t a) const {
    return redc(static_cast<unsigned __int128>(a) * r2_);
  }
  std::uint64_t from_mont(std::uint64_t a) const { return redc(a); }

  Elem mul(const Elem& a, const Elem& b) const {
    std::uint64_t r[2 * kMaxDegree] = {};
    for (int k = 0; k <= 2 * n_ - 2; ++k) {
      unsigned __int128 acc = 0;
      const int lo = std::max(0, k - n_ + 1);
      const int hi = std::min(k, n_ - 1);
      for (int i = lo; i <= hi; ++i) acc += static_cast<unsigned __int128>(a[i]) * b[k - i];
      r[k] = reduce_once(redc(acc));
    }
    for (int k = 2 * n_ - 2; k >= n_; --k) {
      const std::uint64_t c = r[k];
      if (c == 0) continue;
      for (int i = 0; i < n_; ++i) {
        r[k - n_ + i] = add(r[k - n_ + i], reduce_once(redc(static_cast<unsigned __int128>(c) * fneg_[i])));
      }
    }
    Elem out{};
    for (int i = 0; i < n_; ++i) out[i] = r[i];
    return out;
  }

  Elem times_x(const Elem& a) const {
    Elem out{};
    const std::uint64_t c = a[n_ - 1];
    for (int i = n_ - 1; i > 0; --i) out[i] = a[i - 1];
    if (c != 0) {
      for (int i = 0; i < n_; ++i) {
        out[i] = add(out[i], reduce_once(redc(static_cast<unsigned __int128>(c) * fneg_[i])));
      }
    }
    return out;
  }

  // x^e
  Elem x_power(std::uint64_t e) const {
    Elem r{};
    r[0] = to_mont(1);
    for (int bit = 63 - __builtin_clzll(e | 1); bit >= 0; --bit) {
      r = mul(r, r);
      if ((e >> bit) & 1) r = times_x(r);
    }
    return r;
  }

  Elem power(Elem base, std::uint64_t e) const {
    Elem r{};
    r[0] = to_mont(1);
    while (e) {
      if (e & 1) r = mul(r, base);
      e >>= 1;
      if (e) base = mul(base, base);
    }
    return r;
  }

  FpPoly to_poly(const Elem& a) const {
    FpPoly out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) out[i] = from_mont(a[i]);
    trim(out);
    return out;
  }

 private:
  std::uint64_t redc(unsigned __int128 t) const {
    const std::uint64_t m = static_cast<std::uint64_t>(t) * neg_inv_;
    const unsigned __int128 u = (t + static_cast<unsigned __int128>(m) * p_) >> 64;
    return static_cast<std::uint64_t>(u);
  }
  std::uint64_t reduce_once(std::uint64_t a) const { return a >= p_ ? a - p_ : a; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }

  std::uint64_t p_;
  int n_;
  std::uint64_t neg_inv_ = 0;
  std::uint64_t r2_ = 0;
  std::uint64_t fneg_[kMaxDegree] = {};
};

std::vector<unsigned> small_pattern(FpPoly g, std::uint64_t p) {
  const SmallQuotientRing ring(g, p);
  std::vector<unsigned> pattern;
  auto h = ring.x_power(p);
  for (unsigned i = 1; deg(g) >= 2 * static_cast<int>(i); ++i) {
    if (i > 1) h = ring.power(h, p);
    FpPoly hx = ring.to_poly(h);
    if (hx.size() < 2) hx.resize(2, 0);
    hx[1] = (hx[1] + p - 1) % p;
    trim(hx);
    FpPoly d = gcd_poly(g, hx, p);
    if (deg(d) > 0) {
      for (int k = 0; k < deg(d) / static_cast<int>(i); ++k) pattern.push_back(i);
      g = quot(g, d, p);
    }
  }
  if (deg(g) > 0) pattern.push_back(static_cast<unsigned>(deg(g)));
  std::sort(pattern.begin(), pattern.end());
  return pattern;
}

}  // namespace

std::vector<unsigned> factorization_pattern(const IntPoly& f, const mpz_class& disc,
                                            std::uint64_t p) {
  const int n = degree(f);
  if (n < 1) raise(ErrorCode::InvalidArgument, "factorization_pattern needs degree >= 1");
  if (p < 2) raise(ErrorCode::InvalidArgument, "modulus must be prime");
  const mpz_class mp(static_cast<unsigned long>(p));
  if (mpz_divisible_p(disc.get_mpz_t(), mp.get_mpz_t()) ||
      mpz_divisible_p(f[static_cast<std::size_t>(n)].get_mpz_t(), mp.get_mpz_t())) {
    raise(ErrorCode::RamifiedPrime, std::to_string(p) + " divides the discriminant of " +
                                        to_string(f));
  }
  FpPoly g = reduce(f, p);
  if (p > 2 && p < (std::uint64_t{1} << 58) && n <= SmallQuotientRing::kMaxDegree && f[static_cast<std::size_t>(n)] == 1) {
    return small_pattern(std::move(g), p);
  }
  std::vector<unsigned> pattern;
  const FpPoly x{0, 1};
  FpPoly h = rem(x, g, p);
  for (unsigned i = 1; deg(g) >= 2 * static_cast<int>(i); ++i) {
    h = powmod_poly(h, p, g, p);
    FpPoly hx = h;
    if (hx.size() < 2) hx.resize(2, 0);
    hx[1] = (hx[1] + p - 1) % p;
    trim(hx);
    FpPoly d = gcd_poly(g, hx, p);
    if (deg(d) > 0) {
      for (int k = 0; k < deg(d) / static_cast<int>(i); ++k) pattern.push_back(i);
      g = quot(g, d, p);
      h = rem(h, g, p);
    }
  }
  if (deg(g) > 0) pattern.push_back(static_cast<unsigned>(deg(g)));
  std::sort(pattern.begin(), pattern.end());
  return pattern;
}

std::vector<unsigned> factorization_pattern(const IntPoly& f, std::uint64_t p) {
  return factorization_pattern(f, discriminant(f), p);
}

}  // namespace chebeatty::galois
