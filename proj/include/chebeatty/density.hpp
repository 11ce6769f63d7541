#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chebeatty/beatty.hpp"
#include "chebeatty/galois.hpp"

namespace chebeatty::density {

// UptoX: checkpoints bound the primes (p <= X). FirstN: checkpoints count the
// first N unramified primes, ramified primes being skipped entirely.
enum class CountMode { UptoX, FirstN };

std::string to_string(CountMode mode);
CountMode parse_mode(const std::string& text);

struct Restriction {
  std::uint64_t q = 1;
  std::uint64_t a = 0;
};

struct CountOptions {
  std::uint64_t max_x = 1'000'000'000;      // largest X in UptoX mode
  std::uint64_t max_n = 50'000'000;         // largest N in FirstN mode
  unsigned workers = 1;
  std::uint64_t chunk_span = 1u << 22;      // integers per work unit
};

struct CountRow {
  std::uint64_t checkpoint = 0;
  std::uint64_t last_prime = 0;      // largest prime counted
  std::uint64_t pi = 0;              // primes counted (FirstN: unramified only)
  std::uint64_t ramified = 0;        // ramified primes among them (always 0 in FirstN)
  std::vector<std::uint64_t> pi_C;   // per class
  std::uint64_t pi_beatty = 0;
  std::vector<std::uint64_t> pi_C_beatty;
};

struct JointCountTable {
  CountMode mode = CountMode::UptoX;
  std::optional<Restriction> restriction;
  std::vector<std::string> labels;
  std::vector<CountRow> rows;
};

// Exact joint counts at every checkpoint (ascending, positive).
JointCountTable joint_count(const std::vector<std::uint64_t>& checkpoints,
                            const galois::GaloisContext& ctx, const BeattyParams& beatty,
                            CountMode mode, std::optional<Restriction> restriction = std::nullopt,
                            const CountOptions& options = {});

struct DensityRow {
  std::uint64_t checkpoint = 0;
  std::vector<double> values;  // beatty, each class, each class with beatty
  double class_sum = 0.0;      // sum of the per-class densities
};

struct DensityTable {
  CountMode mode = CountMode::FirstN;
  std::vector<std::string> columns;
  std::vector<DensityRow> rows;
  DensityRow limit;  // 1/alpha, |C|/|G|, |C|/(alpha |G|)
  JointCountTable counts;
};

DensityTable density_table(const galois::GaloisContext& ctx, const BeattyParams& beatty,
                           const std::vector<std::uint64_t>& checkpoints, CountMode mode,
                           const CountOptions& options = {});

struct PntPoint {
  std::uint64_t X = 0;
  std::uint64_t joint = 0;            // pi_{C,alpha,beta}(X; q, a)
  std::uint64_t class_count = 0;      // pi_C(X; q, a)
  std::optional<double> R;            // joint / (class_count / alpha)
  double envelope = 0.0;              // q^(d+1) X^(1 - kappa)
};

struct PntReport {
  std::string label;
  std::uint64_t q = 1;
  std::uint64_t a = 0;
  unsigned d = 1;
  double tau = 1.0;
  double kappa = 0.0;
  std::vector<PntPoint> points;
};

PntReport pnt_ratio(const std::vector<std::uint64_t>& X_grid, const galois::GaloisContext& ctx,
                    std::size_t class_index, const BeattyParams& beatty, std::uint64_t q,
                    std::uint64_t a, double tau, const CountOptions& options = {});

// kappa = 10^-d / (125 d tau)
double pnt_kappa(unsigned d, double tau);

// Primes p in [lo, hi) with p in the Beatty sequence and Frobenius in the
// class (class_index = nullopt drops the class condition). Ascending.
std::vector<std::uint64_t> joint_primes(std::uint64_t lo, std::uint64_t hi,
                                        const galois::GaloisContext& ctx,
                                        std::optional<std::size_t> class_index,
                                        const BeattyParams& beatty, unsigned workers = 1);

// The same membership test for a single integer.
bool in_joint_set(std::uint64_t n, const galois::GaloisContext& ctx,
                  std::optional<std::size_t> class_index, const BeattyParams& beatty);

}  // namespace chebeatty::density
