#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "chebeatty/error.hpp"
#include "chebeatty/sieve.hpp"

namespace chebeatty::sieve {
namespace {

const mpz_class& factorial(unsigned n) {
  static std::mutex mu;
  static std::vector<mpz_class> cache{mpz_class(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (cache.size() <= n) cache.push_back(cache.back() * static_cast<unsigned long>(cache.size()));
  return cache[n];
}

void check_exponent(unsigned e) {
  if (e > kMaxExponent) {
    raise(ErrorCode::ExponentBudget, "exponent " + std::to_string(e) + " exceeds 30");
  }
}

using Partition = std::vector<unsigned>;  // nonincreasing, positive parts

std::map<unsigned, unsigned> multiplicities(const std::vector<unsigned>& parts) {
  std::map<unsigned, unsigned> m;
  for (unsigned v : parts) {
    if (v > 0) ++m[v];
  }
  return m;
}

unsigned total(const std::vector<unsigned>& v) { return std::accumulate(v.begin(), v.end(), 0u); }

// Distinct arrangements of the parts of lambda among k slots.
mpz_class orbit_size(unsigned k, const Partition& lambda) {
  if (lambda.size() > k) return 0;
  mpz_class n = factorial(k) / factorial(k - static_cast<unsigned>(lambda.size()));
  for (const auto& [v, c] : multiplicities(lambda)) n /= factorial(c);
  return n;
}

// sum over distinct arrangements b of mu among k slots of the simplex moment
// of t^(a+b) (1 - sum t)^a0, where a occupies the first a.size() slots.
mpq_class orbit_moment(unsigned k, const std::vector<unsigned>& a, const Partition& mu, unsigned a0) {
  check_exponent(a0);
  const unsigned s = static_cast<unsigned>(a.size());
  if (s > k || mu.size() > k) return 0;
  std::vector<std::pair<unsigned, unsigned>> rem;
  for (const auto& [v, c] : multiplicities(mu)) rem.emplace_back(v, c);
  mpz_class numerator = 0;
  std::vector<unsigned> chosen(s, 0);
  auto finish = [&] {
    unsigned r = 0;
    for (const auto& [v, c] : rem) r += c;
    if (r > k - s) return;
    mpz_class term = factorial(k - s) / factorial(k - s - r);
    for (const auto& [v, c] : rem) {
      term /= factorial(c);
      for (unsigned i = 0; i < c; ++i) term *= factorial(v);
    }
    for (unsigned i = 0; i < s; ++i) {
      check_exponent(a[i] + chosen[i]);
      term *= factorial(a[i] + chosen[i]);
    }
    numerator += term;
  };
  auto rec = [&](auto&& self, unsigned i) -> void {
    if (i == s) {
      finish();
      return;
    }
    chosen[i] = 0;
    self(self, i + 1);
    for (auto& [v, c] : rem) {
      if (c == 0) continue;
      --c;
      chosen[i] = v;
      self(self, i + 1);
      ++c;
    }
    chosen[i] = 0;
  };
  rec(rec, 0);
  for (unsigned v : mu) check_exponent(v);
  mpq_class out(numerator * factorial(a0), factorial(k + a0 + total(a) + total(mu)));
  out.canonicalize();
  return out;
}

std::vector<Partition> partitions_upto(unsigned degree, unsigned max_parts) {
  std::vector<Partition> out;
  for (unsigned n = 0; n <= degree; ++n) {
    Partition cur;
    auto rec = [&](auto&& self, unsigned left, unsigned max_part) -> void {
      if (left == 0) {
        if (cur.size() <= max_parts) out.push_back(cur);
        return;
      }
      for (unsigned p = std::min(left, max_part); p >= 1; --p) {
        cur.push_back(p);
        self(self, left - p, p);
        cur.pop_back();
      }
    };
    rec(rec, n, n);
  }
  return out;
}

// Distinct values that can sit in one fixed slot of an arrangement of lambda
// among k slots, and the partition left for the other k - 1 slots.
std::vector<std::pair<unsigned, Partition>> slot_choices(unsigned k, const Partition& lambda) {
  std::vector<std::pair<unsigned, Partition>> out;
  if (lambda.size() <= k - 1) out.emplace_back(0, lambda);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (i > 0 && lambda[i] == lambda[i - 1]) continue;
    Partition rest = lambda;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    out.emplace_back(lambda[i], rest);
  }
  return out;
}

using Matrix = std::vector<std::vector<mpq_class>>;

}  // namespace

SievePolynomial SievePolynomial::constant(unsigned k, const mpq_class& c) {
  SievePolynomial p;
  p.k = k;
  p.add_term(std::vector<unsigned>(k, 0), c);
  return p;
}

SievePolynomial SievePolynomial::monomial(const std::vector<unsigned>& exponents, const mpq_class& c) {
  SievePolynomial p;
  p.k = static_cast<unsigned>(exponents.size());
  p.add_term(exponents, c);
  return p;
}

unsigned SievePolynomial::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms) d = std::max(d, total(e));
  return d;
}

void SievePolynomial::add_term(const std::vector<unsigned>& exponents, const mpq_class& c) {
  if (exponents.size() != k) raise(ErrorCode::InvalidArgument, "exponent vector has the wrong length");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms.emplace(exponents, c);
  if (inserted) {
    it->second.canonicalize();
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms.erase(it);
  }
}

double SievePolynomial::eval(const std::vector<double>& t) const {
  double s = 0.0;
  for (const auto& [e, c] : terms) {
    double m = c.get_d();
    for (unsigned i = 0; i < k; ++i) {
      if (e[i] != 0) m *= std::pow(t[i], static_cast<double>(e[i]));
    }
    s += m;
  }
  return s;
}

std::string SievePolynomial::to_string() const {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms) {
    if (!out.empty()) out += " + ";
    out += c.get_str();
    for (unsigned i = 0; i < k; ++i) {
      if (e[i] == 0) continue;
      out += "*t" + std::to_string(i + 1);
      if (e[i] > 1) out += "^" + std::to_string(e[i]);
    }
  }
  return out;
}

SievePolynomial operator+(const SievePolynomial& a, const SievePolynomial& b) {
  if (a.k != b.k) raise(ErrorCode::InvalidArgument, "dimension mismatch");
  SievePolynomial r = a;
  for (const auto& [e, c] : b.terms) r.add_term(e, c);
  return r;
}

SievePolynomial operator*(const SievePolynomial& a, const SievePolynomial& b) {
  if (a.k != b.k) raise(ErrorCode::InvalidArgument, "dimension mismatch");
  SievePolynomial r;
  r.k = a.k;
  std::vector<unsigned> e(a.k);
  for (const auto& [ea, ca] : a.terms) {
    for (const auto& [eb, cb] : b.terms) {
      for (unsigned i = 0; i < a.k; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

mpq_class simplex_moment(unsigned k, const std::vector<unsigned>& a, unsigned a0) {
  if (a.size() != k) raise(ErrorCode::InvalidArgument, "exponent vector has the wrong length");
  check_exponent(a0);
  mpz_class num = factorial(a0);
  for (unsigned e : a) {
    check_exponent(e);
    num *= factorial(e);
  }
  mpq_class out(num, factorial(k + a0 + total(a)));
  out.canonicalize();
  return out;
}

mpq_class Integrals::J_sum() const {
  mpq_class s = 0;
  for (const auto& j : J) s += j;
  return s;
}

Integrals integrals(const SievePolynomial& F) {
  const unsigned k = F.k;
  if (k < 1) raise(ErrorCode::InvalidArgument, "k must be >= 1");
  for (const auto& [e, c] : F.terms) {
    for (unsigned x : e) check_exponent(x);
  }
  std::vector<std::pair<const std::vector<unsigned>*, const mpq_class*>> ts;
  for (const auto& [e, c] : F.terms) ts.emplace_back(&e, &c);

  Integrals out;
  out.I = 0;
  std::vector<unsigned> sum(k);
  for (const auto& [ea, ca] : ts) {
    for (const auto& [eb, cb] : ts) {
      for (unsigned i = 0; i < k; ++i) sum[i] = (*ea)[i] + (*eb)[i];
      out.I += *ca * *cb * simplex_moment(k, sum, 0);
    }
  }
  // int_0^s t_m^a dt_m = s^(a+1)/(a+1) with s = 1 - sum of the other t_i.
  std::vector<unsigned> rest(k - 1);
  for (unsigned m = 0; m < k; ++m) {
    mpq_class J = 0;
    for (const auto& [ea, ca] : ts) {
      for (const auto& [eb, cb] : ts) {
        unsigned j = 0;
        for (unsigned i = 0; i < k; ++i) {
          if (i != m) rest[j++] = (*ea)[i] + (*eb)[i];
        }
        const unsigned am = (*ea)[m];
        const unsigned bm = (*eb)[m];
        J += *ca * *cb * simplex_moment(k - 1, rest, am + bm + 2) / ((am + 1) * (bm + 1));
      }
    }
    out.J.push_back(J);
  }
  return out;
}

SievePolynomial monomial_symmetric(unsigned k, const std::vector<unsigned>& lambda) {
  if (lambda.size() > k) raise(ErrorCode::InvalidArgument, "partition longer than k");
  std::vector<unsigned> e(k, 0);
  std::copy(lambda.begin(), lambda.end(), e.begin());
  std::sort(e.begin(), e.end());
  SievePolynomial p;
  p.k = k;
  do {
    p.add_term(e, 1);
  } while (std::next_permutation(e.begin(), e.end()));
  return p;
}

MkResult optimize_Mk(unsigned k, unsigned degree, const MkOptions& options) {
  if (k < 1 || k > 20) raise(ErrorCode::InvalidArgument, "k must lie in [1, 20]");
  if (degree > 6) raise(ErrorCode::InvalidArgument, "degree must be at most 6");
  MkResult res;
  res.k = k;
  res.degree = degree;
  res.basis = partitions_upto(degree, k);
  const std::size_t n = res.basis.size();

  // Gram matrices: B from I, A from sum_m J^(m) = k J^(1) by symmetry.
  Matrix A(n, std::vector<mpq_class>(n)), B(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      B[i][j] = orbit_size(k, res.basis[i]) * orbit_moment(k, res.basis[i], res.basis[j], 0);
      mpq_class a = 0;
      for (const auto& [v, li] : slot_choices(k, res.basis[i])) {
        for (const auto& [w, lj] : slot_choices(k, res.basis[j])) {
          a += orbit_size(k - 1, li) * orbit_moment(k - 1, li, lj, v + w + 2) /
               mpq_class((v + 1) * (w + 1));
        }
      }
      A[i][j] = a * k;
      B[j][i] = B[i][j];
      A[j][i] = A[i][j];
    }
  }

  // Exact B = L D L^T.
  Matrix L(n, std::vector<mpq_class>(n));
  std::vector<mpq_class> D(n);
  for (std::size_t j = 0; j < n; ++j) {
    mpq_class d = B[j][j];
    for (std::size_t m = 0; m < j; ++m) d -= L[j][m] * L[j][m] * D[m];
    if (sgn(d) <= 0) {
      raise(ErrorCode::SingularGram, "Gram matrix is singular at degree " + std::to_string(degree) +
                                         "; reduce the degree");
    }
    D[j] = d;
    L[j][j] = 1;
    for (std::size_t i = j + 1; i < n; ++i) {
      mpq_class s = B[i][j];
      for (std::size_t m = 0; m < j; ++m) s -= L[i][m] * L[j][m] * D[m];
      L[i][j] = s / d;
    }
  }
  // C' = L^-1 A L^-T exactly.
  auto forward = [&](Matrix M) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < i; ++m) M[i][c] -= L[i][m] * M[m][c];
      }
    }
    return M;
  };
  Matrix X = forward(A);
  Matrix Xt(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) Xt[i][j] = X[j][i];
  }
  const Matrix Cq = forward(Xt);

  Eigen::MatrixXd C(n, n);
  std::vector<double> sqrtD(n);
  for (std::size_t i = 0; i < n; ++i) sqrtD[i] = std::sqrt(D[i].get_d());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          Cq[i][j].get_d() / (sqrtD[i] * sqrtD[j]);
    }
  }
  C = (C + C.transpose()) / 2.0;

  // Power iteration from the all-ones vector, then shifted-inverse iteration.
  Eigen::VectorXd y = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)).normalized();
  double lambda = y.dot(C * y);
  unsigned it = 0;
  for (; it < std::min(200u, options.max_iterations); ++it) {
    Eigen::VectorXd z = C * y;
    const double nz = z.norm();
    if (nz == 0.0) break;
    z /= nz;
    const double next = z.dot(C * z);
    y = z;
    const bool done = std::abs(next - lambda) <= 1e-8 * std::abs(next);
    lambda = next;
    if (done) break;
  }
  const double scale = std::max(1.0, std::abs(lambda));
  auto residual = [&](const Eigen::VectorXd& v, double l) { return (C * v - l * v).norm(); };
  if (residual(y, lambda) > options.tolerance * scale) {
    const double sigma = lambda + 1e-9 * scale;
    Eigen::MatrixXd shifted = C - sigma * Eigen::MatrixXd::Identity(C.rows(), C.cols());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
    bool converged = false;
    for (; it < options.max_iterations; ++it) {
      Eigen::VectorXd z = lu.solve(y);
      const double nz = z.norm();
      if (!(nz > 0.0) || !std::isfinite(nz)) break;
      y = z / nz;
      lambda = y.dot(C * y);
      if (residual(y, lambda) <= options.tolerance * scale) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      raise(ErrorCode::ConvergenceFailure,
            "eigen-iteration did not converge for k = " + std::to_string(k) +
                ", degree = " + std::to_string(degree));
    }
  }
  res.iterations = it;

  // c = L^-T D^-1/2 y
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = y(static_cast<Eigen::Index>(i)) / sqrtD[i];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t m = i + 1; m < n; ++m) c[i] -= L[m][i].get_d() * c[m];
  }
  double big = 0.0;
  for (double v : c) big = std::max(big, std::abs(v));
  const double sign = c[0] < 0 ? -1.0 : 1.0;
  for (double& v : c) v = sign * v / big;
  res.coefficients = c;

  // Rayleigh quotient of the returned coefficients, from the exact Gram matrices.
  mpq_class num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const mpq_class cc = mpq_class(c[i]) * mpq_class(c[j]);
      num += cc * A[i][j];
      den += cc * B[i][j];
    }
  }
  res.M = mpq_class(num / den).get_d();

  res.F.k = k;
  for (std::size_t i = 0; i < n; ++i) {
    const SievePolynomial m = monomial_symmetric(k, res.basis[i]);
    const mpq_class ci(c[i]);
    for (const auto& [e, one] : m.terms) res.F.add_term(e, ci);
  }
  return res;
}

}  // namespace chebeatty::sieve
