#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace provchain {

struct CoreMetricsInput {
  std::size_t batches = 0;          // N_B
  std::size_t complete_batches = 0; // N_B^full
  std::size_t evidence = 0;         // N_E
  std::size_t fetched = 0;          // N_E^fetch
  std::size_t matched = 0;          // N_E^cid
};

/// Rates are nullopt when their denominator is zero.
struct CoreMetrics {
  std::optional<double> completeness;  // C
  std::optional<double> retrievability; // R
  std::optional<double> match_rate;    // M
  std::optional<double> verifiability; // V = R * M
};

CoreMetrics core_metrics(const CoreMetricsInput& input);

/// D = t_included - t_arrive. Throws NegativeDelay if included before arrival.
double anchoring_delay(double t_arrive, double t_included);

struct CostParams {
  double batch_gas = 816'933.0;  // G_batch
  double gas_price_gwei = 1.0;   // g
  double eth_usd = 1'850.0;      // P
};

double cost_batch(const CostParams& params);
double cost_per_cid(const CostParams& params, std::size_t commitments);

struct CostRow {
  double gas_price_gwei = 0.0;
  double batch_usd = 0.0;
  double per_cid_usd = 0.0;
};

inline const std::vector<double> kDefaultGasPrices = {0.001, 0.01, 0.1, 0.5, 1.0};

std::vector<CostRow> cost_table(const std::vector<double>& gas_prices, const CostParams& params,
                                std::size_t commitments = 13);

struct FairnessParams {
  double premium_usd_per_lb = 0.0;  // Pi
  double alpha = 0.01;
  double batch_mass_lb = 0.0;
  double batch_cost_usd = 0.0;
};

struct FairnessResult {
  bool ok = false;
  double mass_threshold_lb = 0.0;
};

FairnessResult fairness_check(const FairnessParams& params);

/// d = v + (1 - v) s.
double detection_prob(double v, double s);

struct DetectionRow {
  double v = 0.0;
  double s = 0.0;
  double d = 0.0;
};

inline const std::vector<std::pair<double, double>> kOracleGrid = {
    {0.2, 0.01}, {0.2, 0.10}, {0.6, 0.01}, {0.6, 0.10}};

struct AvailabilityRow {
  double p = 0.0;
  std::size_t k = 0;
  double retrievable = 0.0;
  double expected_tries = 0.0;
};

inline const std::vector<double> kAvailabilityPs = {0.95, 0.98, 0.99};
inline const std::vector<std::size_t> kAvailabilityKs = {1, 2, 3};

std::vector<AvailabilityRow> availability_table(const std::vector<double>& ps,
                                                const std::vector<std::size_t>& ks);

}  // namespace provchain
