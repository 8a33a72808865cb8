// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "../support/random_history.hpp"
#include "provchain/analytics.hpp"
#include "provchain/anchor_bench.hpp"
#include "provchain/auditor.hpp"
#include "provchain/batcher.hpp"
#include "provchain/evidence.hpp"
#include "provchain/scenario.hpp"

using namespace provchain;
namespace fs = std::filesystem;

namespace {

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

int decimals_of(const std::string& printed) {
  auto dot = printed.find('.');
  return dot == std::string::npos ? 0 : static_cast<int>(printed.size() - dot - 1);
}

void c1(Check& c) {
  const std::size_t n = find_max_batch(ChainConfig{});
  c.expect(n == 1'022, "max batch " + std::to_string(n));
}

void c2(Check& c) {
  ThroughputResult r = measure_throughput(ChainConfig{}, 60);
  c.expect(r.blocks >= 60, "blocks " + std::to_string(r.blocks));
  c.expect(rel_err(r.commitments_per_second, 1'400.0) <= 0.05,
           "throughput " + fmt(r.commitments_per_second));
}

void c3(Check& c) {
  const double printed[5][3] = {{0.001, 0.00151, 0.000116},
                                {0.01, 0.0151, 0.00117},
                                {0.1, 0.151, 0.0117},
                                {0.5, 0.757, 0.0583},
                                {1.0, 1.51, 0.116}};
  auto rows = cost_table(kDefaultGasPrices, CostParams{});
  c.expect(rows.size() == 5, "row count");
  for (std::size_t i = 0; i < rows.size() && i < 5; ++i) {
    c.expect(rel_err(rows[i].batch_usd, printed[i][1]) <= 0.015,
             "batch cost at g=" + fmt(printed[i][0]) + ": " + fmt(rows[i].batch_usd));
    c.expect(rel_err(rows[i].per_cid_usd, printed[i][2]) <= 0.015,
             "per-CID cost at g=" + fmt(printed[i][0]) + ": " + fmt(rows[i].per_cid_usd));
  }
}

void c4(Check& c) {
  struct Row {
    double lambda, w_max, e_w, w_p95, e_d, d_p95;
  };
  const Row printed[] = {
      {1, 1.00, 0.50, 0.95, 2.50, 2.95},   {10, 1.00, 0.50, 0.95, 2.50, 2.95},
      {50, 1.00, 0.50, 0.95, 2.50, 2.95},  {200, 1.00, 0.50, 0.95, 2.50, 2.95},
      {600, 0.85, 0.43, 0.81, 2.43, 2.81}, {1200, 0.43, 0.21, 0.41, 2.21, 2.41},
  };
  for (const auto& row : printed) {
    AnalyticDelay a = analytic_delay(row.lambda, BatchPolicy{}, 2.0);
    const double got[5] = {a.w_max, a.stats.mean_wait, a.stats.wait_p95, a.stats.mean_delay,
                           a.stats.delay_p95};
    const double want[5] = {row.w_max, row.e_w, row.w_p95, row.e_d, row.d_p95};
    for (int i = 0; i < 5; ++i) {
      c.expect(std::abs(got[i] - want[i]) <= 0.005,
               "lambda " + fmt(row.lambda) + " cell " + std::to_string(i) + ": " + fmt(got[i]));
    }
  }
  for (double lambda : {1.0, 10.0, 600.0, 1200.0}) {
    SimulationResult s = simulate(ArrivalModel{lambda, ArrivalModel::Kind::Deterministic},
                                  BatchPolicy{}, 600.0, ChainConfig{}, 42);
    AnalyticDelay a = analytic_delay(lambda, BatchPolicy{}, 2.0);
    c.expect(rel_err(s.stats.mean_wait, a.stats.mean_wait) <= 0.05,
             "sim E_W at lambda " + fmt(lambda) + ": " + fmt(s.stats.mean_wait));
    c.expect(rel_err(s.stats.mean_delay, a.stats.mean_delay) <= 0.05,
             "sim E_D at lambda " + fmt(lambda) + ": " + fmt(s.stats.mean_delay));
  }
}

void c5(Check& c) {
  struct Row {
    double p;
    std::size_t k;
    std::string retrievable, tries;
  };
  const Row printed[] = {
      {0.95, 1, "0.9500", "1.00"}, {0.95, 2, "0.9975", "1.05"}, {0.95, 3, "0.9999", "1.05"},
      {0.98, 1, "0.9800", "1.00"}, {0.98, 2, "0.9996", "1.02"}, {0.98, 3, "0.999992", "1.02"},
      {0.99, 1, "0.9900", "1.00"}, {0.99, 2, "0.9999", "1.01"}, {0.99, 3, "0.999999", "1.01"},
  };
  std::uint64_t seed = 42;
  for (const auto& row : printed) {
    const std::string cell = "(" + fmt(row.p) + "," + std::to_string(row.k) + ")";
    const double a = analytic_availability(row.p, row.k);
    const double t = expected_tries(row.p, row.k);
    c.expect(round_to(a, decimals_of(row.retrievable)) == std::stod(row.retrievable),
             "P(retrievable) " + cell + ": " + fmt(a));
    c.expect(round_to(t, decimals_of(row.tries)) == std::stod(row.tries),
             "expected tries " + cell + ": " + fmt(t));
    AvailabilitySample s = monte_carlo_availability(row.p, row.k, 100'000, seed++);
    c.expect(std::abs(s.rate - a) <= 3.0 * s.sigma,
             "Monte Carlo " + cell + ": " + fmt(s.rate) + " sigma " + fmt(s.sigma));
  }
}

void c6(Check& c) {
  const double printed[4] = {0.208, 0.280, 0.604, 0.640};
  for (std::size_t i = 0; i < kOracleGrid.size(); ++i) {
    auto [v, s] = kOracleGrid[i];
    const double d = detection_prob(v, s);
    c.expect(round_to(d, 3) == printed[i], "d(" + fmt(v) + "," + fmt(s) + ") = " + fmt(d));
    OracleExperimentResult r = run_oracle_experiment(100'000, v, s, 42 + i);
    c.expect(r.within(3.0), "experiment (" + fmt(v) + "," + fmt(s) + "): " + fmt(r.empirical_d));
  }
}

void c7(Check& c) {
  EvidenceStore store({ProviderModel{"provider-a", 1.0}});
  Rng rng(42);
  EvidenceReport r = run_evidence_loop(store, EvidenceLoopOptions{}, rng);
  c.expect(r.n == 40, "n " + std::to_string(r.n));
  c.expect(r.failures == 0, "failures " + std::to_string(r.failures));
  c.expect(r.R == 1.0 && r.M == 1.0 && r.V == 1.0, "R/M/V not all 1.00");
}

void c8(Check& c) {
  ScenarioReport r = run_reference(ScenarioConfig{});
  c.expect(r.completeness == 1.0, "C " + (r.completeness ? fmt(*r.completeness) : "null"));
  c.expect(r.step_anchored_records == 6, "StepAnchored " + std::to_string(r.step_anchored_records));
  bool ordered = r.steps.size() == kLifecycleStepCount;
  for (std::size_t i = 0; ordered && i < r.steps.size(); ++i) {
    ordered = r.steps[i].step == kLifecycle[i] && !r.steps[i].revert;
  }
  c.expect(ordered, "steps not anchored in lifecycle order");
  c.expect(r.evidence.checks.size() == 13 && r.evidence.matched == 13,
           "verified " + std::to_string(r.evidence.matched) + "/" +
               std::to_string(r.evidence.checks.size()));
}

void c9(Check& c) {
  NegativeSuiteResult a = run_negative_suite(ScenarioConfig{});
  NegativeSuiteResult b = run_negative_suite(ScenarioConfig{});
  c.expect(a.cases.size() == 4, "case count");
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    const auto& k = a.cases[i];
    c.expect(k.observed == k.expected, k.name + " reverted with wrong reason");
    c.expect(k.state_unchanged, k.name + " changed state");
    c.expect(i < b.cases.size() && b.cases[i].observed == k.observed, k.name + " not deterministic");
  }
}

void c10(Check& c) {
  AqlBenchmarkResult bench = run_aql_benchmark(AqlBenchmarkOptions{});
  for (const auto& [regime, stats] : bench.regimes) {
    for (const auto& run : stats.runs) {
      if (run.total != run.t_receipts + run.t_decode + run.t_sort + run.t_timestamps) {
        c.expect(false, "decomposition identity broken in " + std::string(to_string(regime)));
        break;
      }
    }
  }
  c.expect(RpcModel{}.rtt.mean() >= 50.0, "rtt mean below 50 ms");
  const double cold = bench.regimes.at(CacheRegime::Uncached).total.mean;
  const double warm = bench.regimes.at(CacheRegime::Cached).total.mean;
  c.expect(warm < 0.01 * cold, "warm " + fmt(warm) + " ms vs cold " + fmt(cold) + " ms");

  Network net;
  const ProductId product = build_aql_workload(net, AqlWorkload{10, 15, 10});
  RpcModel rpc{LatencyDist::constant(265.0), 8};
  CacheState cache;
  Rng rng(1);
  Reconstruction r = reconstruct(product, net.ledger(), rpc, cache, rng);
  c.expect(r.aql.t_receipts == 530.0, "t_receipts " + fmt(r.aql.t_receipts));
  c.expect(r.aql.t_timestamps == 530.0, "t_timestamps " + fmt(r.aql.t_timestamps));
  c.expect(rel_err(r.aql.total, 1'060.0) <= 0.05, "total " + fmt(r.aql.total));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void c11(Check& c) {
  const fs::path root = fs::temp_directory_path() / ("provchain_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string("\"") + PROVCHAIN_CLI_PATH + "\" --seed 42 --out \"" +
                            (root / run).string() + "\" scenario run > /dev/null";
    const int status = std::system(cmd.c_str());
    c.expect(status == 0, std::string("run ") + run + " exited " + std::to_string(status));
  }
  const std::string a = slurp(root / "a" / "scenario.json");
  const std::string b = slurp(root / "b" / "scenario.json");
  c.expect(!a.empty(), "no scenario.json written");
  c.expect(a == b, "reports differ");
  fs::remove_all(root);
}

void c12(Check& c) {
  Rng rng(2024);
  const ChainConfig base;
  for (int i = 0; i < 50; ++i) {
    ChainConfig config;
    // Caps from below one commitment up to about a million commitments.
    const Gas max_cap = 1'000'000ull * base.gas_per_commitment;
    config.per_tx_gas_cap = 1 + rng.next() % max_cap;
    if (i < 3) config.per_tx_gas_cap = base.gas_per_commitment - 1 + static_cast<Gas>(i);
    config.block_gas_limit =
        std::max(base.block_gas_limit, config.per_tx_gas_cap) + rng.next() % (10 * base.gas_per_commitment);
    const std::size_t limit = config.block_gas_limit / config.gas_per_commitment;
    const BatchProbe probe = submission_probe(config);
    const std::size_t binary = find_max_batch(probe, limit);
    const std::size_t linear = scan_max_batch(probe, limit);
    c.expect(binary == linear, "cap " + std::to_string(config.per_tx_gas_cap) + ": binary " +
                                   std::to_string(binary) + " linear " + std::to_string(linear));
  }
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Network net;
    auto history = fixtures::build_random_history(net, seed);
    for (const auto& product : history.products) {
      const auto oracle = fixtures::brute_force_trail(net.ledger(), product);
      if (oracle.empty()) continue;
      CacheState cache;
      Rng r(seed);
      Reconstruction got = reconstruct(product, net.ledger(), RpcModel{}, cache, r);
      c.expect(got.trail.records == oracle,
               "history " + std::to_string(seed) + " product " + product.value);
    }
  }
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no runtime limit
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "max batch size", 1, c1},
      {2, "peak throughput", 10, c2},
      {3, "cost table", 1, c3},
      {4, "batching analytics and simulation", 30, c4},
      {5, "availability analytic and Monte Carlo", 30, c5},
      {6, "oracle detection", 30, c6},
      {7, "evidence loop", 5, c7},
      {8, "reference scenario", 5, c8},
      {9, "negative suite", 5, c9},
      {10, "audit query latency structure", 30, c10},
      {11, "determinism of scenario report", 0, c11},
      {12, "oracle equivalence", 60, c12},
  };
  int failed = 0;
  for (const auto& criterion : criteria) {
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      criterion.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (criterion.limit_s > 0 && seconds >= criterion.limit_s) {
      check.failures.push_back("runtime " + fmt(seconds) + " s over " + fmt(criterion.limit_s) +
                               " s");
    }
    const bool ok = check.failures.empty();
    failed += ok ? 0 : 1;
    std::printf("[%s] %2d %s (%.3f s)\n", ok ? "PASS" : "FAIL", criterion.id, criterion.name,
                seconds);
    for (const auto& f : check.failures) std::printf("       - %s\n", f.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
