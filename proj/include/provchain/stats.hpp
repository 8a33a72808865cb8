#pragma once

#include <span>
#include <vector>

namespace provchain {

/// Nearest-rank percentile: the ceil(q * n)-th smallest sample (1-based).
/// `q` in (0, 1]. Empty input yields 0.
double percentile_nearest_rank(std::span<const double> samples, double q);

struct Summary {
  std::size_t n = 0;
  double p50 = 0.0;
  double p95 = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

Summary summarize(std::span<const double> samples);

/// Binomial standard deviation of a proportion estimate.
double binomial_sigma(double p, std::size_t n);

}  // namespace provchain
