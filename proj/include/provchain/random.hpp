#pragma once

#include <cstdint>
#include <random>

namespace provchain {

/// Seeded 64-bit generator. All simulation randomness flows through this type
/// so runs are reproducible from a single seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  double normal(double mean, double stddev) {
    return std::normal_distribution<double>(mean, stddev)(engine_);
  }

  double exponential(double rate) {
    return std::exponential_distribution<double>(rate)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent substream for trial `index` under `seed`. Derivation is
/// seed + index passed through splitmix64.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Latency distribution in milliseconds.
struct LatencyDist {
  enum class Kind { Constant, LogNormal };

  Kind kind = Kind::Constant;
  double median_ms = 0.0;
  double sigma = 0.0;

  static LatencyDist constant(double ms) { return {Kind::Constant, ms, 0.0}; }
  static LatencyDist lognormal(double median_ms, double sigma) {
    return {Kind::LogNormal, median_ms, sigma};
  }

  double sample(Rng& rng) const;
  double mean() const;
};

}  // namespace provchain
