#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "provchain/config.hpp"

namespace provchain::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitSuiteFailure = 2;
inline constexpr int kExitUsage = 64;

struct GlobalOptions {
  std::optional<std::filesystem::path> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::vector<std::string> formats;
};

/// Loads the config file (if any) and applies flag and environment overrides.
/// Seed precedence: --seed, PROVCHAIN_SEED, config file, built-in default.
RunConfig resolve_config(const GlobalOptions& global);

struct ScenarioOptions {
  bool reactivate_suspended = false;
};

struct AnchorOptions {
  bool max_batch_search = false;
  std::size_t blocks = 60;
};

struct EvidenceOptions {
  std::size_t repeats = 10;
};

struct AuditOptions {
  std::size_t runs = 30;
  std::size_t warmup = 3;
};

struct BatchingOptions {
  std::vector<double> lambdas = {1, 10, 50, 200, 600, 1200};
  bool simulate = false;
  bool poisson = false;
  double duration = 600.0;
};

struct FairnessOptions {
  std::optional<double> premium;
  std::optional<double> alpha;
  std::optional<double> mass;
};

struct AvailabilityOptions {
  std::size_t monte_carlo = 0;
};

struct OracleOptions {
  std::size_t events = 100'000;
};

struct ScorecardOptions {
  std::optional<std::filesystem::path> input;
};

int run_scenario(const RunConfig& config, const ScenarioOptions& options);
int run_bench_anchor(const RunConfig& config, const AnchorOptions& options);
int run_bench_evidence(const RunConfig& config, const EvidenceOptions& options);
int run_bench_audit(const RunConfig& config, const AuditOptions& options);
int run_stress_batching(const RunConfig& config, const BatchingOptions& options);
int run_stress_fees(const RunConfig& config);
int run_stress_fairness(const RunConfig& config, const FairnessOptions& options);
int run_stress_availability(const RunConfig& config, const AvailabilityOptions& options);
int run_stress_oracle(const RunConfig& config, const OracleOptions& options);
int run_report_scorecard(const RunConfig& config, const ScorecardOptions& options);

}  // namespace provchain::cli
