#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "provchain/error.hpp"
#include "provchain/report.hpp"

using namespace provchain;
using namespace provchain::cli;

int main(int argc, char** argv) {
  CLI::App app{"Provenance anchoring simulator and benchmark harness", std::string(kToolName)};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "YAML or JSON run configuration")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (falls back to PROVCHAIN_SEED)");
  auto* out_opt = app.add_option("--out", out_dir, "Output directory");
  app.add_option("--format", global.formats, "Output format: json, csv or md (repeatable)")
      ->check(CLI::IsMember({"json", "csv", "md"}))
      ->take_all();

  std::function<int(const RunConfig&)> action;

  auto* scenario = app.add_subcommand("scenario", "Reference supply-chain scenario");
  scenario->require_subcommand(1);
  ScenarioOptions scenario_opts;
  auto* scenario_run = scenario->add_subcommand("run", "Run the coffee batch walkthrough");
  scenario_run->add_flag("--reactivate-suspended", scenario_opts.reactivate_suspended,
                         "Control condition: restore the suspended actor before its case");
  scenario_run->callback([&] { action = [&](const RunConfig& c) { return run_scenario(c, scenario_opts); }; });

  auto* bench = app.add_subcommand("bench", "Benchmarks");
  bench->require_subcommand(1);
  AnchorOptions anchor_opts;
  auto* anchor = bench->add_subcommand("anchor", "Anchoring capacity and throughput");
  anchor->add_flag("--max-batch-search", anchor_opts.max_batch_search,
                   "Binary search for the largest confirmable batch");
  anchor->add_option("--blocks", anchor_opts.blocks, "Saturated blocks for the throughput run")
      ->check(CLI::PositiveNumber);
  anchor->callback([&] { action = [&](const RunConfig& c) { return run_bench_anchor(c, anchor_opts); }; });

  EvidenceOptions evidence_opts;
  auto* evidence = bench->add_subcommand("evidence", "Evidence upload, fetch and verify loop");
  evidence->add_option("--repeats", evidence_opts.repeats, "Objects per size")->check(CLI::PositiveNumber);
  evidence->callback([&] { action = [&](const RunConfig& c) { return run_bench_evidence(c, evidence_opts); }; });

  AuditOptions audit_opts;
  auto* audit = bench->add_subcommand("audit", "Audit query latency");
  audit->add_option("--runs", audit_opts.runs, "Measured runs per regime")->check(CLI::PositiveNumber);
  audit->add_option("--warmup", audit_opts.warmup, "Discarded warm-up runs");
  audit->callback([&] { action = [&](const RunConfig& c) { return run_bench_audit(c, audit_opts); }; });

  auto* stress = app.add_subcommand("stress", "Model-based stress analyses");
  stress->require_subcommand(1);
  BatchingOptions batching_opts;
  auto* batching = stress->add_subcommand("batching", "Anchoring delay under batching");
  batching->add_option("--lambda", batching_opts.lambdas, "Arrival rates (events/s)")->take_all();
  batching->add_flag("--simulate", batching_opts.simulate, "Also run the event simulation");
  batching->add_flag("--poisson", batching_opts.poisson, "Poisson arrivals in the simulation");
  batching->add_option("--duration", batching_opts.duration, "Simulated horizon (s)")
      ->check(CLI::PositiveNumber);
  batching->callback([&] { action = [&](const RunConfig& c) { return run_stress_batching(c, batching_opts); }; });

  auto* fees = stress->add_subcommand("fees", "Per-batch cost under varying gas prices");
  fees->callback([&] { action = [](const RunConfig& c) { return run_stress_fees(c); }; });

  FairnessOptions fairness_opts;
  auto* fairness = stress->add_subcommand("fairness", "Cost against the premium budget");
  fairness->add_option("--premium", fairness_opts.premium, "Premium (USD per lb)");
  fairness->add_option("--alpha", fairness_opts.alpha, "Budget fraction of the premium");
  fairness->add_option("--mass", fairness_opts.mass, "Batch mass (lb)");
  fairness->callback([&] { action = [&](const RunConfig& c) { return run_stress_fairness(c, fairness_opts); }; });

  AvailabilityOptions availability_opts;
  auto* availability = stress->add_subcommand("availability", "Evidence availability under churn");
  availability->add_option("--monte-carlo", availability_opts.monte_carlo,
                           "Monte Carlo trials per cell (0 disables)");
  availability->callback(
      [&] { action = [&](const RunConfig& c) { return run_stress_availability(c, availability_opts); }; });

  OracleOptions oracle_opts;
  auto* oracle = stress->add_subcommand("oracle", "Detection under gating and audit sampling");
  oracle->add_option("--events", oracle_opts.events, "Injected false events per cell (0 disables)");
  oracle->callback([&] { action = [&](const RunConfig& c) { return run_stress_oracle(c, oracle_opts); }; });

  auto* report = app.add_subcommand("report", "Reports over earlier artifacts");
  report->require_subcommand(1);
  ScorecardOptions scorecard_opts;
  std::string scorecard_in;
  auto* card = report->add_subcommand("scorecard", "Assemble the principle scorecard");
  auto* in_opt = card->add_option("--in", scorecard_in, "Artifact directory (default: --out)");
  card->callback([&] {
    if (in_opt->count() > 0) scorecard_opts.input = scorecard_in;
    action = [&](const RunConfig& c) { return run_report_scorecard(c, scorecard_opts); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!config_path.empty()) global.config_path = config_path;
  if (seed_opt->count() > 0) global.seed = seed;
  if (out_opt->count() > 0) global.out = out_dir;

  try {
    const RunConfig config = resolve_config(global);
    return action(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::SuiteFailure ? kExitSuiteFailure : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}
