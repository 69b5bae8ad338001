#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sofr {

// SplitMix64 finalizer, used to derive engine seeds for substreams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. Substream `stream` of a base seed is a
// mt19937_64 engine seeded with mix64(mix64(seed) ^ mix64(stream + 1)).
// Draws are generated explicitly rather than through std::*_distribution so
// that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : eng_(mix64(mix64(seed) ^ mix64(stream + 1))) {}

  std::uint64_t next_u64() { return eng_(); }

  // uniform on [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller; the sine partner is discarded so every
  // draw consumes exactly two engine outputs
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.2831853071795864769 * u2);
  }
  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace sofr
