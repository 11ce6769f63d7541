#include "chebeatty/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <mutex>

#include "chebeatty/error.hpp"

namespace chebeatty::primes {
namespace {

// Base primes beyond this bound are not sieved with; survivors above
// kBaseCap^2 are confirmed with Miller-Rabin instead.
constexpr std::uint64_t kBaseCap = std::uint64_t{1} << 25;

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::uint32_t> simple_odd_sieve(std::uint64_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 3) return out;
  const std::uint64_t n = (limit - 1) / 2;  // index i <-> 2i+1, i in [1, n]
  std::vector<char> composite(n + 1, 0);
  for (std::uint64_t i = 1; i <= n; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t j = (p * p - 1) / 2; j <= n; j += p) composite[j] = 1;
  }
  return out;
}

// Odd primes <= limit, cached and shared between streams.
const std::vector<std::uint32_t>* base_primes(std::uint64_t limit) {
  static std::mutex mutex;
  static std::vector<std::pair<std::uint64_t, std::unique_ptr<std::vector<std::uint32_t>>>> cache;
  std::lock_guard lock(mutex);
  for (const auto& [cached_limit, primes] : cache) {
    if (cached_limit >= limit) return primes.get();
  }
  // Round up so that nearby requests share one table.
  std::uint64_t rounded = 1024;
  while (rounded < limit) rounded *= 2;
  rounded = std::min(rounded, kBaseCap);
  if (rounded < limit) rounded = limit;
  cache.emplace_back(rounded,
                     std::make_unique<std::vector<std::uint32_t>>(simple_odd_sieve(rounded)));
  return cache.back().second.get();
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

double pn_upper_estimate(std::uint64_t n) {
  const double x = static_cast<double>(n);
  return x * (std::log(x) + std::log(std::log(x)));
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kSmall[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kSmall) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kSmall) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeStream::PrimeStream(std::uint64_t lo, std::uint64_t hi, std::size_t segment_bytes)
    : hi_(hi) {
  if (segment_bytes < 8) segment_bytes = 8;
  bits_per_segment_ = static_cast<std::uint64_t>(segment_bytes / 8) * 64;
  lo = std::max<std::uint64_t>(lo, 2);
  emit_two_ = lo <= 2 && hi > 2;
  cursor_ = std::max<std::uint64_t>(lo, 3) | 1;
  const std::uint64_t root = hi > 1 ? isqrt(hi - 1) : 0;
  base_limit_ = std::min(root, kBaseCap);
  verify_large_ = root > kBaseCap;
  base_ = base_primes(base_limit_);
  words_.resize(bits_per_segment_ / 64);
}

bool PrimeStream::next(std::vector<std::uint64_t>& out) {
  out.clear();
  if (emit_two_) {
    out.push_back(2);
    emit_two_ = false;
  }
  if (cursor_ >= hi_) return !out.empty();

  const std::uint64_t seg_lo = cursor_;
  const std::uint64_t nbits = std::min(bits_per_segment_, (hi_ - seg_lo + 1) / 2);
  const std::uint64_t seg_end = seg_lo + 2 * nbits;  // exclusive, odd numbers seg_lo + 2i
  const std::size_t nwords = static_cast<std::size_t>((nbits + 63) / 64);
  std::fill(words_.begin(), words_.begin() + nwords, ~std::uint64_t{0});
  if (nbits % 64) words_[nwords - 1] = (std::uint64_t{1} << (nbits % 64)) - 1;

  for (std::uint32_t p32 : *base_) {
    const std::uint64_t p = p32;
    if (p > base_limit_) break;
    const std::uint64_t sq = p * p;
    if (sq >= seg_end) break;
    std::uint64_t start;
    if (sq >= seg_lo) {
      start = sq;
    } else {
      start = (seg_lo + p - 1) / p * p;
      if ((start & 1) == 0) start += p;
    }
    for (std::uint64_t i = (start - seg_lo) / 2; i < nbits; i += p) {
      words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }
  }

  const std::uint64_t verify_from =
      verify_large_ ? base_limit_ * base_limit_ : ~std::uint64_t{0};
  for (std::size_t w = 0; w < nwords; ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const int tz = std::countr_zero(bits);
      bits &= bits - 1;
      const std::uint64_t n = seg_lo + 2 * (64 * static_cast<std::uint64_t>(w) + tz);
      if (n == 1) continue;
      if (n > verify_from && !is_prime(n)) continue;
      out.push_back(n);
    }
  }
  cursor_ = seg_end;
  return true;
}

namespace {

void validate_range(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config) {
  if (lo >= hi) raise(ErrorCode::InvalidRange, "need lo < hi");
  if (lo < 2) raise(ErrorCode::InvalidRange, "need lo >= 2");
  if (hi > (std::uint64_t{1} << 63) - 1) raise(ErrorCode::InvalidRange, "hi must be < 2^63");
  if (hi - lo > config.range_budget) {
    raise(ErrorCode::RangeTooLarge, "hi - lo = " + std::to_string(hi - lo) + " exceeds budget " +
                                        std::to_string(config.range_budget));
  }
}

std::size_t chunk_count(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config) {
  if (config.workers <= 1) return 1;
  const std::uint64_t min_chunk = 1 << 20;
  const std::uint64_t by_size = (hi - lo) / min_chunk + 1;
  return static_cast<std::size_t>(std::min<std::uint64_t>(by_size, config.workers * 4));
}

}  // namespace

PrimeRange sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config) {
  validate_range(lo, hi, config);
  auto parts = run_chunks(lo, hi, chunk_count(lo, hi, config), config.workers,
                          [&](std::uint64_t a, std::uint64_t b) {
                            std::vector<std::uint64_t> v;
                            for_each_prime(a, b, [&](std::uint64_t p) { v.push_back(p); },
                                           config.segment_bytes);
                            return v;
                          });
  std::vector<std::uint64_t> all;
  std::size_t total = 0;
  for (const auto& part : parts) total += part.size();
  all.reserve(total);
  for (const auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  return PrimeRange(lo, hi, std::move(all));
}

std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config) {
  validate_range(lo, hi, config);
  auto parts = run_chunks(lo, hi, chunk_count(lo, hi, config), config.workers,
                          [&](std::uint64_t a, std::uint64_t b) {
                            PrimeStream stream(a, b, config.segment_bytes);
                            std::vector<std::uint64_t> buf;
                            std::uint64_t c = 0;
                            while (stream.next(buf)) c += buf.size();
                            return c;
                          });
  std::uint64_t total = 0;
  for (auto c : parts) total += c;
  return total;
}

std::uint64_t prime_pi(std::uint64_t x, const SieveConfig& config) {
  if (x < 2) return 0;
  return count_primes(2, x + 1, config);
}

std::uint64_t nth_prime(std::uint64_t n, const SieveConfig& config) {
  if (n == 0) raise(ErrorCode::InvalidArgument, "nth_prime: n must be >= 1");
  if (n > config.max_nth) {
    raise(ErrorCode::BudgetExceeded,
          "nth_prime: n = " + std::to_string(n) + " exceeds budget " +
              std::to_string(config.max_nth));
  }
  static constexpr std::uint64_t kFirst[] = {2, 3, 5, 7, 11};
  if (n <= 5) return kFirst[n - 1];
  // p_n < n log n + n log log n for n >= 6.
  const auto hi = static_cast<std::uint64_t>(pn_upper_estimate(n)) + 2;
  const std::size_t chunks = std::max<std::size_t>(1, config.workers) * 8;
  SieveConfig local = config;
  auto counts = run_chunks(2, hi, chunks, config.workers, [&](std::uint64_t a, std::uint64_t b) {
    PrimeStream stream(a, b, local.segment_bytes);
    std::vector<std::uint64_t> buf;
    std::uint64_t c = 0;
    while (stream.next(buf)) c += buf.size();
    return std::pair{c, std::pair{a, b}};
  });
  std::uint64_t seen = 0;
  for (const auto& [c, bounds] : counts) {
    if (seen + c >= n) {
      std::uint64_t result = 0;
      for_each_prime(bounds.first, bounds.second, [&](std::uint64_t p) {
        if (++seen == n) {
          result = p;
          return false;
        }
        return true;
      });
      return result;
    }
    seen += c;
  }
  raise(ErrorCode::BudgetExceeded, "nth_prime: upper bound failed");  // unreachable
}

std::vector<std::uint64_t> first_primes(std::uint64_t count, const SieveConfig& config) {
  if (count == 0) return {};
  if (count > config.max_nth) raise(ErrorCode::BudgetExceeded, "first_primes: count over budget");
  const std::uint64_t hi =
      count < 6 ? 12 : static_cast<std::uint64_t>(pn_upper_estimate(count)) + 2;
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for_each_prime(2, hi, [&](std::uint64_t p) {
    out.push_back(p);
    return out.size() < count;
  }, config.segment_bytes);
  return out;
}

BoundRow pn_bound_row(std::uint64_t n, std::uint64_t p_n) {
  const double x = static_cast<double>(n);
  const double l = std::log(x);
  const double ll = std::log(l);
  BoundRow row{"pn", n, x * l + x * ll - x, static_cast<double>(p_n), x * l + x * ll, false};
  row.pass = row.lhs < row.value && row.value < row.rhs;
  return row;
}

BoundRow pi_bound_row(std::uint64_t n, std::uint64_t pi_n) {
  const double x = static_cast<double>(n);
  const double l = std::log(x);
  BoundRow row{"pi", n, x / l * (1.0 + 1.0 / l), static_cast<double>(pi_n),
               x / l * (1.0 + 1.0 / l + 2.51 / (l * l)), false};
  row.pass = row.lhs <= row.value && row.value <= row.rhs;
  return row;
}

BoundRow shifted_gap_row(std::uint64_t k, std::uint64_t width) {
  const double x = static_cast<double>(k);
  BoundRow row{"gap213", k, 0.0, static_cast<double>(width), 1.6 * x * std::log(x), false};
  row.pass = row.value <= row.rhs;
  return row;
}

namespace {

void record(BoundReport& report, BoundRow row, bool keep_rows, bool endpoint) {
  ++report.checked;
  if (!row.pass) report.violations.push_back(row);
  if (keep_rows || endpoint) report.rows.push_back(std::move(row));
}

}  // namespace

BoundReport check_pn_bounds(std::uint64_t n_lo, std::uint64_t n_hi, const SieveConfig& config,
                            bool keep_rows) {
  if (n_lo < 6) raise(ErrorCode::InvalidArgument, "p_n sandwich needs n >= 6");
  if (n_hi < n_lo) raise(ErrorCode::InvalidRange, "n_hi < n_lo");
  BoundReport report{"pn", n_lo, n_hi, 0, {}, {}};
  const auto ps = first_primes(n_hi, config);
  for (std::uint64_t n = n_lo; n <= n_hi; ++n) {
    record(report, pn_bound_row(n, ps[n - 1]), keep_rows, n == n_lo || n == n_hi);
  }
  return report;
}

BoundReport check_pi_bounds(std::uint64_t n_lo, std::uint64_t n_hi, const SieveConfig& config,
                            bool keep_rows) {
  const std::uint64_t start = std::max(n_lo, kPiBoundStart);
  BoundReport report{"pi", start, n_hi, 0, {}, {}};
  if (n_hi < start) return report;
  const auto range = sieve_range(2, n_hi + 1, config);
  const auto& ps = range.primes();
  std::size_t idx = static_cast<std::size_t>(
      std::upper_bound(ps.begin(), ps.end(), start) - ps.begin());
  for (std::uint64_t n = start; n <= n_hi; ++n) {
    while (idx < ps.size() && ps[idx] <= n) ++idx;
    record(report, pi_bound_row(n, idx), keep_rows, n == start || n == n_hi);
  }
  return report;
}

BoundReport check_shifted_prime_gap(std::uint64_t k_lo, std::uint64_t k_hi,
                                    const SieveConfig& config, bool keep_rows) {
  if (k_lo < kShiftedGapStart) raise(ErrorCode::InvalidArgument, "gap bound needs k >= 213");
  if (k_hi < k_lo) raise(ErrorCode::InvalidRange, "k_hi < k_lo");
  if (k_hi > config.max_nth / 2) raise(ErrorCode::BudgetExceeded, "k_hi over budget");
  BoundReport report{"gap213", k_lo, k_hi, 0, {}, {}};
  const std::uint64_t need = prime_pi(k_hi, config) + k_hi;
  const auto ps = first_primes(need, config);
  std::uint64_t pi_k = 0;
  for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
    if (k == k_lo) {
      pi_k = static_cast<std::uint64_t>(std::upper_bound(ps.begin(), ps.end(), k) - ps.begin());
    } else {
      while (pi_k < ps.size() && ps[pi_k] <= k) ++pi_k;
    }
    // p_{pi(k)+j} is ps[pi(k)+j-1].
    const std::uint64_t width = ps[pi_k + k - 1] - ps[pi_k];
    record(report, shifted_gap_row(k, width), keep_rows, k == k_lo || k == k_hi);
  }
  return report;
}

}  // namespace chebeatty::primes
