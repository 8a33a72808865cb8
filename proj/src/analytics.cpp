#include "provchain/analytics.hpp"

#include "provchain/error.hpp"
#include "provchain/evidence.hpp"

namespace provchain {

CoreMetrics core_metrics(const CoreMetricsInput& in) {
  if (in.complete_batches > in.batches || in.matched > in.fetched || in.fetched > in.evidence) {
    throw Error(ErrorCode::DomainError, "core metric counts are inconsistent");
  }
  auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  CoreMetrics m;
  m.completeness = ratio(in.complete_batches, in.batches);
  m.retrievability = ratio(in.fetched, in.evidence);
  m.match_rate = ratio(in.matched, in.fetched);
  if (m.retrievability && m.match_rate) {
    // Product form keeps V == R * M bit-exact; equals N_cid / N_E to rounding.
    m.verifiability = *m.retrievability * *m.match_rate;
  } else {
    m.verifiability = ratio(in.matched, in.evidence);
  }
  return m;
}

double anchoring_delay(double t_arrive, double t_included) {
  if (t_included < t_arrive) {
    throw Error(ErrorCode::NegativeDelay, "inclusion precedes arrival");
  }
  return t_included - t_arrive;
}

double cost_batch(const CostParams& params) {
  return params.batch_gas * params.gas_price_gwei * 1e-9 * params.eth_usd;
}

double cost_per_cid(const CostParams& params, std::size_t commitments) {
  if (commitments == 0) throw Error(ErrorCode::DomainError, "per-CID cost needs n >= 1");
  return cost_batch(params) / static_cast<double>(commitments);
}

std::vector<CostRow> cost_table(const std::vector<double>& gas_prices, const CostParams& params,
                                std::size_t commitments) {
  std::vector<CostRow> rows;
  rows.reserve(gas_prices.size());
  for (double g : gas_prices) {
    CostParams p = params;
    p.gas_price_gwei = g;
    rows.push_back(CostRow{g, cost_batch(p), cost_per_cid(p, commitments)});
  }
  return rows;
}

FairnessResult fairness_check(const FairnessParams& params) {
  if (!(params.premium_usd_per_lb > 0.0) || !(params.alpha > 0.0 && params.alpha <= 1.0) ||
      params.batch_mass_lb < 0.0 || params.batch_cost_usd < 0.0) {
    throw Error(ErrorCode::DomainError, "fairness check needs premium > 0 and alpha in (0, 1]");
  }
  const double budget_per_lb = params.alpha * params.premium_usd_per_lb;
  return FairnessResult{params.batch_cost_usd <= budget_per_lb * params.batch_mass_lb,
                        params.batch_cost_usd / budget_per_lb};
}

double detection_prob(double v, double s) {
  if (!(v >= 0.0 && v <= 1.0) || !(s >= 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::DomainError, "detection probability needs v, s in [0, 1]");
  }
  return v + (1.0 - v) * s;
}

std::vector<AvailabilityRow> availability_table(const std::vector<double>& ps,
                                                const std::vector<std::size_t>& ks) {
  std::vector<AvailabilityRow> rows;
  for (double p : ps) {
    for (std::size_t k : ks) {
      rows.push_back(AvailabilityRow{p, k, analytic_availability(p, k), expected_tries(p, k)});
    }
  }
  return rows;
}

}  // namespace provchain
