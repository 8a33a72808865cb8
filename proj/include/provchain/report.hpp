#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "provchain/analytics.hpp"
#include "provchain/anchor_bench.hpp"
#include "provchain/auditor.hpp"
#include "provchain/batcher.hpp"
#include "provchain/evidence.hpp"
#include "provchain/scenario.hpp"

namespace provchain {

using Json = nlohmann::json;

inline constexpr std::string_view kToolName = "provchain";
inline constexpr std::string_view kToolVersion = "0.3.0";

/// Keys whose values depend on the host clock. canonicalize() drops them.
inline constexpr std::string_view kWallClockKey = "wall_clock";

struct ReportDocument {
  std::string command;
  Json config;
  Json payload;
  bool deterministic = true;  // payload has no wall-clock content left after canonicalize
};

Json to_json(const ReportDocument& doc);

/// Recursively removes wall-clock keys and rounds every floating-point value
/// to 6 significant digits.
Json canonicalize(const Json& value);

/// Canonical text: sorted keys, 2-space indent, trailing newline.
std::string render(const ReportDocument& doc);

double round_sig(double value, int digits = 6);

Json to_json(const EvidenceReport& report);
Json to_json(const EvidenceVerification& verification);
Json to_json(const AqlBreakdown& aql);
Json to_json(const Summary& summary);
Json to_json(const AqlBenchmarkResult& result);
Json to_json(const NegativeSuiteResult& result);
Json to_json(const OracleExperimentResult& result);
Json to_json(const ScenarioReport& report);
Json to_json(const ThroughputResult& result);
Json to_json(const CoreMetrics& metrics);

/// A table with human-readable column headers, emitted as JSON rows, CSV or Markdown.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  Json to_json() const;
  std::string to_csv() const;
  std::string to_markdown() const;
};

Table cost_table_view(const std::vector<CostRow>& rows);
Table availability_table_view(const std::vector<AvailabilityRow>& rows,
                              const std::vector<double>& monte_carlo = {});
Table detection_table_view(const std::vector<DetectionRow>& rows,
                           const std::vector<OracleExperimentResult>& experiments = {});

struct BatchingRow {
  double lambda = 0.0;
  AnalyticDelay analytic;
  std::optional<SimulationResult> simulated;
};

Table batching_table_view(const std::vector<BatchingRow>& rows);

/// Quantitative scorecard rows keyed by principle. Absent artifacts are
/// flagged with status "MissingInput" in the row that needs them.
struct ScorecardInputs {
  std::optional<Json> scenario;
  std::optional<Json> evidence;
  std::optional<Json> audit;
  std::optional<Json> anchor;
  std::optional<Json> batching;
  std::optional<Json> fees;
  std::optional<Json> fairness;
  std::optional<Json> availability;
  std::optional<Json> oracle;
};

Json scorecard(const ScorecardInputs& inputs);

/// Names of artifacts the scorecard flagged as missing.
std::vector<std::string> missing_inputs(const Json& scorecard);

std::string scorecard_markdown(const Json& scorecard);

}  // namespace provchain
