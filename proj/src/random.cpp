#include "provchain/random.hpp"

#include <cmath>

namespace provchain {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed + index));
}

double LatencyDist::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Constant:
      return median_ms;
    case Kind::LogNormal:
      if (sigma <= 0.0) return median_ms;
      return median_ms * std::exp(rng.normal(0.0, sigma));
  }
  return median_ms;
}

double LatencyDist::mean() const {
  if (kind == Kind::LogNormal) return median_ms * std::exp(0.5 * sigma * sigma);
  return median_ms;
}

}  // namespace provchain
