#pragma once

// Prime generation and counting. Everything else in the library consumes
// primes through PrimeStream or for_each_prime.

#include <atomic>
#include <exception>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace chebeatty::primes {

inline constexpr std::size_t kDefaultSegmentBytes = 256 * 1024;

struct SieveConfig {
  // Bytes of bitset per segment. Each byte covers 16 consecutive integers.
  std::size_t segment_bytes = kDefaultSegmentBytes;
  // Largest hi - lo accepted by sieve_range and count_primes.
  std::uint64_t range_budget = 1'000'000'000;
  // Largest index accepted by nth_prime.
  std::uint64_t max_nth = 100'000'000;
  unsigned workers = 1;
};

// The primes in [lo, hi), ascending.
class PrimeRange {
 public:
  PrimeRange(std::uint64_t lo, std::uint64_t hi, std::vector<std::uint64_t> primes)
      : lo_(lo), hi_(hi), primes_(std::move(primes)) {}

  std::uint64_t lo() const { return lo_; }
  std::uint64_t hi() const { return hi_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }
  std::size_t size() const { return primes_.size(); }
  auto begin() const { return primes_.begin(); }
  auto end() const { return primes_.end(); }

 private:
  std::uint64_t lo_;
  std::uint64_t hi_;
  std::vector<std::uint64_t> primes_;
};

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

// Segment-at-a-time generator over [lo, hi) using an odd-only bitset.
class PrimeStream {
 public:
  PrimeStream(std::uint64_t lo, std::uint64_t hi,
              std::size_t segment_bytes = kDefaultSegmentBytes);

  // Replaces the contents of `out` with the primes of the next segment.
  // Returns false once the range is exhausted.
  bool next(std::vector<std::uint64_t>& out);

 private:
  std::uint64_t hi_;
  std::uint64_t cursor_;  // odd, start of the next segment
  std::uint64_t bits_per_segment_;
  bool emit_two_;
  bool verify_large_;
  std::uint64_t base_limit_;
  const std::vector<std::uint32_t>* base_;
  std::vector<std::uint64_t> words_;
};

// Calls f(p) for each prime p in [lo, hi) in increasing order. If f returns
// bool, returning false stops the walk.
template <class F>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f,
                    std::size_t segment_bytes = kDefaultSegmentBytes) {
  PrimeStream stream(lo, hi, segment_bytes);
  std::vector<std::uint64_t> buf;
  while (stream.next(buf)) {
    for (std::uint64_t p : buf) {
      if constexpr (std::is_same_v<std::invoke_result_t<F&, std::uint64_t>, bool>) {
        if (!f(p)) return;
      } else {
        f(p);
      }
    }
  }
}

// Splits [lo, hi) into contiguous chunks, runs fn(chunk_lo, chunk_hi) for each
// on up to `workers` threads, and returns the results in chunk order. The
// chunk layout depends only on (lo, hi, chunks), never on the worker count.
template <class Fn>
auto run_chunks(std::uint64_t lo, std::uint64_t hi, std::size_t chunks, unsigned workers, Fn fn)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>> {
  using R = std::invoke_result_t<Fn&, std::uint64_t, std::uint64_t>;
  if (hi <= lo) return {};
  if (chunks == 0) chunks = 1;
  const std::uint64_t span = hi - lo;
  if (chunks > span) chunks = static_cast<std::size_t>(span);
  std::vector<std::uint64_t> cuts(chunks + 1);
  for (std::size_t i = 0; i <= chunks; ++i) {
    cuts[i] = lo + static_cast<std::uint64_t>(
                       (static_cast<unsigned __int128>(span) * i) / chunks);
  }
  std::vector<R> results(chunks);
  if (workers <= 1 || chunks == 1) {
    for (std::size_t i = 0; i < chunks; ++i) results[i] = fn(cuts[i], cuts[i + 1]);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(chunks);
  auto work = [&] {
    for (std::size_t i = next++; i < chunks; i = next++) {
      try {
        results[i] = fn(cuts[i], cuts[i + 1]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = workers < chunks ? workers : static_cast<unsigned>(chunks);
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

// Exactly the primes in [lo, hi). Requires 2 <= lo < hi < 2^63.
PrimeRange sieve_range(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config = {});

std::uint64_t count_primes(std::uint64_t lo, std::uint64_t hi, const SieveConfig& config = {});

// pi(x): number of primes <= x.
std::uint64_t prime_pi(std::uint64_t x, const SieveConfig& config = {});

// p_n with p_1 = 2.
std::uint64_t nth_prime(std::uint64_t n, const SieveConfig& config = {});

// The first `count` primes.
std::vector<std::uint64_t> first_primes(std::uint64_t count, const SieveConfig& config = {});

// One evaluated inequality lhs < value < rhs (or <= where the bound says so).
struct BoundRow {
  std::string check;
  std::uint64_t n = 0;
  double lhs = 0.0;
  double value = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct BoundReport {
  std::string check;
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  std::uint64_t checked = 0;
  std::vector<BoundRow> violations;
  std::vector<BoundRow> rows;  // every row when keep_rows is set, else endpoints only
};

// n log n + n log log n - n < p_n < n log n + n log log n, n >= 6.
BoundRow pn_bound_row(std::uint64_t n, std::uint64_t p_n);

// n/log n (1 + 1/log n) <= pi(n) <= n/log n (1 + 1/log n + 2.51/log^2 n).
BoundRow pi_bound_row(std::uint64_t n, std::uint64_t pi_n);

// 0 <= p_{pi(k)+k} - p_{pi(k)+1} <= 1.6 k log k.
BoundRow shifted_gap_row(std::uint64_t k, std::uint64_t width);

BoundReport check_pn_bounds(std::uint64_t n_lo, std::uint64_t n_hi, const SieveConfig& config = {},
                            bool keep_rows = false);

// Rows below 355991 are skipped; the inequality is only claimed from there on.
BoundReport check_pi_bounds(std::uint64_t n_lo, std::uint64_t n_hi, const SieveConfig& config = {},
                            bool keep_rows = false);

BoundReport check_shifted_prime_gap(std::uint64_t k_lo, std::uint64_t k_hi,
                                    const SieveConfig& config = {}, bool keep_rows = false);

inline constexpr std::uint64_t kPiBoundStart = 355991;
inline constexpr std::uint64_t kShiftedGapStart = 213;

}  // namespace chebeatty::primes
