#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "provchain/anchor_bench.hpp"
#include "provchain/error.hpp"
#include "provchain/report.hpp"

namespace provchain::cli {

namespace {

/// Config echo for reports. The output directory is left out so that the
/// same run written to two places yields identical documents.
Json config_echo(const RunConfig& config) {
  Json echo = to_json(config);
  echo["output"].erase("directory");
  return echo;
}

bool wants(const RunConfig& config, OutputFormat format) {
  for (auto f : config.output.formats) {
    if (f == format) return true;
  }
  return false;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << text;
  std::cout << "wrote " << path.string() << '\n';
}

void emit(const RunConfig& config, const std::string& name, const ReportDocument& doc,
          const std::optional<Table>& table = std::nullopt,
          const std::optional<std::string>& markdown = std::nullopt) {
  const auto& dir = config.output.directory;
  std::filesystem::create_directories(dir);
  if (wants(config, OutputFormat::Json)) write_file(dir / (name + ".json"), render(doc));
  if (wants(config, OutputFormat::Csv)) {
    if (table) {
      write_file(dir / (name + ".csv"), table->to_csv());
    } else {
      std::cerr << "note: " << name << " has no tabular form; csv skipped\n";
    }
  }
  if (wants(config, OutputFormat::Markdown)) {
    if (markdown) {
      write_file(dir / (name + ".md"), *markdown);
    } else if (table) {
      write_file(dir / (name + ".md"), table->to_markdown());
    } else {
      std::cerr << "note: " << name << " has no markdown form; md skipped\n";
    }
  }
}

ReportDocument document(const std::string& command, const RunConfig& config, Json payload,
                        bool deterministic = true) {
  return ReportDocument{command, config_echo(config), std::move(payload), deterministic};
}

std::string fmt(double v) { return Json(round_sig(v)).dump(); }

}  // namespace

RunConfig resolve_config(const GlobalOptions& global) {
  RunConfig config = global.config_path ? load_config(*global.config_path) : RunConfig{};
  std::optional<std::uint64_t> seed = global.seed;
  if (!seed) {
    if (const char* env = std::getenv("PROVCHAIN_SEED"); env != nullptr && *env != '\0') {
      try {
        std::size_t used = 0;
        seed = std::stoull(env, &used);
        if (used != std::string_view(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, std::string("PROVCHAIN_SEED is not an integer: ") + env);
      }
    }
  }
  if (seed) {
    config.seed = *seed;
    config.scenario.seed = *seed;
  }
  if (global.out) config.output.directory = *global.out;
  if (!global.formats.empty()) {
    config.output.formats.clear();
    for (const auto& name : global.formats) {
      auto f = parse_format(name);
      if (!f) throw Error(ErrorCode::InvalidConfig, "unknown format " + name);
      config.output.formats.push_back(*f);
    }
  }
  return config;
}

int run_scenario(const RunConfig& config, const ScenarioOptions& options) {
  ScenarioReport report = run_reference(config.scenario);
  if (options.reactivate_suspended) {
    report.negative = run_negative_suite(config.scenario, true);
  }
  emit(config, "scenario", document("scenario run", config, to_json(report)));

  std::cout << "product " << report.product.value << ": C = "
            << (report.completeness ? fmt(*report.completeness) : "n/a") << ", V = "
            << (report.evidence.V ? fmt(*report.evidence.V) : "n/a") << ", "
            << report.evidence.matched << "/" << report.evidence.checks.size()
            << " evidence verified\n";
  std::cout << "negative cases rejected: " << report.negative.rejected() << "/"
            << report.negative.cases.size() << '\n';
  require_all_rejected(report.negative);
  return kExitOk;
}

int run_bench_anchor(const RunConfig& config, const AnchorOptions& options) {
  Json payload = Json::object();
  payload["per_tx_gas_cap"] = config.chain.per_tx_gas_cap;
  payload["gas_per_commitment"] = config.chain.gas_per_commitment;
  std::size_t max_batch = 0;
  if (options.max_batch_search) {
    max_batch = find_max_batch(config.chain);
    payload["max_batch"] = max_batch;
    payload["search"] = "binary";
    if (max_batch == 0) {
      std::cerr << "warning: NoFeasibleBatch: a single commitment exceeds the gas cap\n";
      payload["warning"] = "NoFeasibleBatch";
    }
    std::cout << "maximum confirmed batch size: " << max_batch << '\n';
  }
  if (!options.max_batch_search || max_batch > 0) {
    ThroughputResult full = measure_throughput(config.chain, options.blocks, true);
    ThroughputResult max_only = measure_throughput(config.chain, options.blocks, false);
    payload["throughput"] = to_json(full);
    payload["throughput_max_batches_only"] = to_json(max_only);
    std::cout << "peak throughput: " << fmt(full.commitments_per_second)
              << " commitments/s over " << full.blocks << " blocks\n";
  }
  emit(config, "anchor", document("bench anchor", config, payload));
  return kExitOk;
}

int run_bench_evidence(const RunConfig& config, const EvidenceOptions& options) {
  EvidenceStore store(config.providers);
  EvidenceLoopOptions loop;
  loop.repeats = options.repeats;
  loop.policy = config.pin;
  Rng rng(config.seed);
  EvidenceReport report = run_evidence_loop(store, loop, rng);
  emit(config, "evidence", document("bench evidence", config, to_json(report)));
  std::cout << "n = " << report.n << ", R = " << (report.R ? fmt(*report.R) : "n/a")
            << ", M = " << (report.M ? fmt(*report.M) : "n/a")
            << ", V = " << (report.V ? fmt(*report.V) : "n/a") << ", failures = " << report.failures
            << '\n';
  return kExitOk;
}

int run_bench_audit(const RunConfig& config, const AuditOptions& options) {
  AqlBenchmarkOptions bench;
  bench.runs = options.runs;
  bench.warmup = options.warmup;
  bench.rpc = config.rpc;
  bench.seed = config.seed;
  AqlBenchmarkResult result = run_aql_benchmark(bench);
  // Decode and sort are measured on the host clock.
  emit(config, "audit", document("bench audit", config, to_json(result), false));
  for (const auto& [regime, stats] : result.regimes) {
    std::cout << to_string(regime) << ": AQL p50 " << fmt(stats.total.p50) << " ms, p95 "
              << fmt(stats.total.p95) << " ms, mean " << fmt(stats.total.mean) << " ms\n";
  }
  return kExitOk;
}

int run_stress_batching(const RunConfig& config, const BatchingOptions& options) {
  std::vector<BatchingRow> rows;
  for (std::size_t i = 0; i < options.lambdas.size(); ++i) {
    const double lambda = options.lambdas[i];
    BatchingRow row{lambda, analytic_delay(lambda, config.batcher, config.s_include), std::nullopt};
    if (options.simulate) {
      ArrivalModel arrivals{lambda, options.poisson ? ArrivalModel::Kind::Poisson
                                                    : ArrivalModel::Kind::Deterministic};
      row.simulated = simulate(arrivals, config.batcher, options.duration, config.chain,
                               splitmix64(config.seed + i));
    }
    rows.push_back(std::move(row));
  }
  Table table = batching_table_view(rows);
  Json payload{{"table", table.to_json()},
               {"policy", {{"max_batch", config.batcher.max_batch}, {"max_wait", config.batcher.max_wait}}},
               {"s_include", config.s_include}};
  if (options.simulate) {
    Json sims = Json::array();
    for (const auto& r : rows) {
      const SimulationResult& s = *r.simulated;
      sims.push_back({{"lambda", r.lambda},
                      {"events", s.events},
                      {"flushes", s.flushes},
                      {"size_flushes", s.size_flushes},
                      {"timeout_flushes", s.timeout_flushes},
                      {"mean_batch_size", s.mean_batch_size},
                      {"max_batch_size", s.max_batch_size},
                      {"max_delay", s.max_delay},
                      {"wait_p95", s.stats.wait_p95}});
    }
    payload["simulation"] = {{"arrivals", options.poisson ? "poisson" : "deterministic"},
                             {"duration_s", options.duration},
                             {"runs", sims}};
  }
  emit(config, "batching", document("stress batching", config, payload), table);
  std::cout << table.to_markdown();
  return kExitOk;
}

int run_stress_fees(const RunConfig& config) {
  Table table = cost_table_view(cost_table(config.gas_prices, config.cost));
  Json payload{{"table", table.to_json()},
               {"batch_gas", config.cost.batch_gas},
               {"eth_usd", config.cost.eth_usd},
               {"commitments_per_batch", 13}};
  emit(config, "fees", document("stress fees", config, payload), table);
  std::cout << table.to_markdown();
  return kExitOk;
}

int run_stress_fairness(const RunConfig& config, const FairnessOptions& options) {
  const std::optional<double> premium =
      options.premium ? options.premium : config.fairness.premium_usd_per_lb;
  if (!premium) {
    throw Error(ErrorCode::InvalidConfig,
                "fairness premium (USD per lb) is required: set fairness.premium_usd_per_lb or --premium");
  }
  const double alpha = options.alpha.value_or(config.fairness.alpha);
  const double mass = options.mass.value_or(config.fairness.batch_mass_lb);
  const double cost = cost_batch(config.cost);
  FairnessResult result = fairness_check(FairnessParams{*premium, alpha, mass, cost});

  Table table{{"Gas price (gwei)", "Cost per batch (USD)", "Minimum batch mass (lb)", "Within budget"},
              {}};
  for (const auto& row : cost_table(config.gas_prices, config.cost)) {
    FairnessResult r = fairness_check(FairnessParams{*premium, alpha, mass, row.batch_usd});
    table.rows.push_back({row.gas_price_gwei, row.batch_usd, r.mass_threshold_lb, r.ok});
  }
  Json payload{{"premium_usd_per_lb", *premium},
               {"alpha", alpha},
               {"batch_mass_lb", mass},
               {"batch_cost_usd", cost},
               {"ok", result.ok},
               {"mass_threshold_lb", result.mass_threshold_lb},
               {"table", table.to_json()}};
  emit(config, "fairness", document("stress fairness", config, payload), table);
  std::cout << "batch cost " << fmt(cost) << " USD, minimum mass " << fmt(result.mass_threshold_lb)
            << " lb, batch of " << fmt(mass) << " lb " << (result.ok ? "within" : "over")
            << " budget\n";
  return kExitOk;
}

int run_stress_availability(const RunConfig& config, const AvailabilityOptions& options) {
  const auto rows = availability_table(kAvailabilityPs, kAvailabilityKs);
  std::vector<double> rates;
  Json samples = Json::array();
  if (options.monte_carlo > 0) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      AvailabilitySample s = monte_carlo_availability(rows[i].p, rows[i].k, options.monte_carlo,
                                                      splitmix64(config.seed + i));
      rates.push_back(s.rate);
      samples.push_back({{"p", s.p},
                         {"k", s.k},
                         {"trials", s.trials},
                         {"retrieved", s.retrieved},
                         {"rate", s.rate},
                         {"mean_tries", s.mean_tries},
                         {"sigma", s.sigma},
                         {"within_3_sigma", std::abs(s.rate - rows[i].retrievable) <= 3.0 * s.sigma}});
    }
  }
  Table table = availability_table_view(rows, rates);
  Json payload{{"table", table.to_json()}};
  if (!samples.empty()) payload["monte_carlo"] = samples;
  emit(config, "availability", document("stress availability", config, payload), table);
  std::cout << table.to_markdown();
  return kExitOk;
}

int run_stress_oracle(const RunConfig& config, const OracleOptions& options) {
  std::vector<DetectionRow> rows;
  std::vector<OracleExperimentResult> experiments;
  for (std::size_t i = 0; i < kOracleGrid.size(); ++i) {
    const auto [v, s] = kOracleGrid[i];
    rows.push_back(DetectionRow{v, s, detection_prob(v, s)});
    if (options.events > 0) {
      experiments.push_back(run_oracle_experiment(options.events, v, s, splitmix64(config.seed + i)));
    }
  }
  Table table = detection_table_view(rows, experiments);
  Json payload{{"table", table.to_json()}, {"events", options.events}};
  emit(config, "oracle", document("stress oracle", config, payload), table);
  std::cout << table.to_markdown();
  return kExitOk;
}

int run_report_scorecard(const RunConfig& config, const ScorecardOptions& options) {
  const std::filesystem::path dir = options.input.value_or(config.output.directory);
  auto load = [&](const std::string& name) -> std::optional<Json> {
    std::ifstream in(dir / (name + ".json"));
    if (!in) return std::nullopt;
    try {
      return Json::parse(in);
    } catch (const Json::exception&) {
      std::cerr << "warning: " << (dir / (name + ".json")).string() << " is not valid JSON\n";
      return std::nullopt;
    }
  };
  ScorecardInputs inputs{load("scenario"), load("evidence"), load("audit"),
                         load("anchor"),   load("batching"), load("fees"),
                         load("fairness"), load("availability"), load("oracle")};
  Json card = scorecard(inputs);
  const auto missing = missing_inputs(card);
  emit(config, "scorecard", document("report scorecard", config, card, !inputs.audit.has_value()),
       std::nullopt, scorecard_markdown(card));
  std::cout << scorecard_markdown(card);
  if (!missing.empty()) {
    std::cerr << "MissingInput:";
    for (const auto& m : missing) std::cerr << ' ' << m;
    std::cerr << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace provchain::cli
