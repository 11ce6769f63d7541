#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chebeatty/beatty.hpp"
#include "chebeatty/galois.hpp"

namespace chebeatty::bv {

struct BVOptions {
  std::uint64_t max_x = 10'000'000;
  std::uint64_t max_counters = 100'000'000;  // sum of phi(q) over included q
  unsigned workers = 1;
};

struct BVRow {
  std::uint64_t q = 1;
  std::uint64_t phi = 1;
  std::uint64_t a = 0;  // argmax residue
  std::uint64_t y = 1;  // argmax y
  double error = 0.0;   // max over y <= x and a of |E(y; q, a)|
};

struct BVReport {
  std::uint64_t x = 0;
  double theta = 0.0;
  std::uint64_t Q = 1;
  double A = 2.0;
  std::string label;
  std::string mode;    // "beatty" or "classical"
  std::string filter;  // description of the modulus filter
  std::vector<std::uint64_t> skipped_moduli;
  std::vector<BVRow> rows;
  double total = 0.0;
  double normalized = 0.0;  // total (log x)^A / x
  std::string note;
};

// floor(x^theta), corrected for rounding in pow.
std::uint64_t modulus_limit(std::uint64_t x, double theta);

// |C| / (alpha phi(q) |G|), or |C| / (phi(q) |G|) without a Beatty condition.
double expected_density(const galois::GaloisContext& ctx, std::size_t class_index,
                        const BeattyParams* beatty, std::uint64_t q);

// sum' over q <= x^theta of max over y <= x and gcd(a, q) = 1 of
//   |pi_{C,alpha,beta}(y; q, a) - expected_density(q) pi(y)|,
// the sum running over q with gcd(q, f_ab) = 1. Ties in the maximum go to the
// smallest y, then the smallest a.
BVReport bv_sum(std::uint64_t x, double theta, const galois::GaloisContext& ctx,
                std::size_t class_index, const BeattyParams* beatty, double A = 2.0,
                const BVOptions& options = {});

struct LevelConstants {
  mpq_class theta_level;  // 1 / (125 10^d d (d+1) tau)
  mpq_class kappa;        // 10^-d / (125 d tau)
  mpq_class eta;          // 10^-d / max(125 tau, 20 d)
  mpq_class theta_MM;     // min(2/|G|, 1/2)
};

LevelConstants level_constants(unsigned d, const mpq_class& tau, std::uint64_t group_order);

}  // namespace chebeatty::bv
