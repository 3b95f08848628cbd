#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

#include "spmrf/common.hpp"

namespace spmrf {

/// FNV-1a string hash; used for platform-independent seed derivation.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic combination of seed components (splitmix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// xoshiro256++ with splitmix64 seeding.  The generator is fully specified
/// here (no standard-library distributions), so a given seed produces the
/// same stream on every platform.  Chains derive sub-seeds with
/// `Rng::for_chain`, which XORs the base seed with a splitmix64-mixed chain
/// index.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : state_) w = splitmix64(x);
    spare_valid_ = false;
  }

  static Rng for_chain(std::uint64_t seed, int chain_index) {
    std::uint64_t x = 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(chain_index) + 1);
    std::uint64_t h = splitmix64(x);
    return Rng(seed ^ h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second deviate of each pair is
  /// cached so consecutive calls consume a deterministic number of words.
  double normal() {
    if (spare_valid_) {
      spare_valid_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    spare_valid_ = true;
    return r * std::cos(a);
  }

  double exponential(double rate) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    return -std::log(u) / rate;
  }

  /// Half-Cauchy with the given scale (inverse-CDF).
  double half_cauchy(double scale) {
    return scale * std::tan(0.5 * M_PI * uniform());
  }

  /// Knuth's product-of-uniforms method; fine for the small means used here.
  long poisson(double mean) {
    require(mean >= 0.0, "poisson mean must be nonnegative");
    const double limit = std::exp(-mean);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  long binomial(long trials, double prob) {
    require(prob >= 0.0 && prob <= 1.0, "binomial prob must be in [0,1]");
    long k = 0;
    for (long i = 0; i < trials; ++i)
      if (uniform() < prob) ++k;
    return k;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool spare_valid_ = false;
};

}  // namespace spmrf
