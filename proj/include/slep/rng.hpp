#pragma once

#include "slep/common.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace slep {

// Seeded PRNG with a platform-stable stream.
//
// Algorithm: std::mt19937_64 (fixed; the 64-bit output sequence for a given
// seed is mandated by the standard). Uniform doubles are built directly from
// the raw 53 high bits and Gaussians via Box-Muller, so the value stream does
// not depend on the implementation-defined std::*_distribution algorithms.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1), 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1] (MATLAB-style rand semantics for spectra that must stay positive).
  double uniform_pos() { return 1.0 - uniform(); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection-free modulo bias is negligible for n std::uint64_t below 2^53;
    // use multiply-shift on the 53-bit uniform for stability.
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
  }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_pos();  // (0,1], log is safe
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// n x p matrix with iid uniform [0,1) entries, filled column by column.
  Matrix uniform_matrix(Index n, Index p) {
    Matrix m(n, p);
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < n; ++i) m(i, j) = uniform();
    return m;
  }

  /// n x p matrix with iid standard normal entries, filled column by column.
  Matrix gaussian_matrix(Index n, Index p) {
    Matrix m(n, p);
    for (Index j = 0; j < p; ++j)
      for (Index i = 0; i < n; ++i) m(i, j) = normal();
    return m;
  }

  /// k distinct indices drawn from [0, n) (partial Fisher-Yates).
  std::vector<Index> sample_indices(Index n, Index k) {
    std::vector<Index> pool(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (Index i = 0; i < k; ++i) {
      Index j = i + static_cast<Index>(uniform_index(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 mix; used to derive independent per-run seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace slep
