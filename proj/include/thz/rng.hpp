#pragma once

#include <cstdint>
#include <random>

#include "thz/types.hpp"

namespace thz {

// SplitMix64 finalizer. Used to derive independent RNG streams from a master
// seed plus task coordinates (trial index, subcarrier, purpose tag), so that
// results do not depend on worker scheduling.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(master ^ 0xd1b54a32d192ed03ULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

// Thin wrapper around mt19937_64 fixing the complex Gaussian convention:
// CN(0, s2) has total variance s2, i.e. real/imag parts are each N(0, s2/2).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return uni_(gen_); }                  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t uniform_index(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
  }
  double normal() { return norm_(gen_); }

  cxd cnormal(double total_variance) {
    const double s = std::sqrt(total_variance / 2.0);
    return {s * normal(), s * normal()};
  }

  // Laplace(mu, b); std = b * sqrt(2).
  double laplace(double mu, double scale) {
    const double u = uniform() - 0.5;
    return mu - scale * std::copysign(std::log(1.0 - 2.0 * std::abs(u)), u);
  }

  VecC cnormal_vector(Eigen::Index n, double total_variance) {
    VecC v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal(total_variance);
    return v;
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> uni_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace thz
