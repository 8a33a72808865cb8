#include "provchain/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "provchain/error.hpp"

namespace provchain {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string cell_text(const Json& value) {
  if (value.is_null()) return "";
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return Json(round_sig(value.get<double>())).dump();
  return value.dump();
}

std::string csv_escape(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json percentiles(const LatencyPercentiles& p) { return Json{{"p50", p.p50}, {"p95", p.p95}}; }

}  // namespace

double round_sig(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

Json canonicalize(const Json& value) {
  if (value.is_object()) {
    Json out = Json::object();
    for (const auto& [key, child] : value.items()) {
      if (key == kWallClockKey) continue;
      out[key] = canonicalize(child);
    }
    return out;
  }
  if (value.is_array()) {
    Json out = Json::array();
    for (const auto& child : value) out.push_back(canonicalize(child));
    return out;
  }
  if (value.is_number_float()) return round_sig(value.get<double>());
  return value;
}

Json to_json(const ReportDocument& doc) {
  return Json{{"tool", {{"name", kToolName}, {"version", kToolVersion}}},
              {"command", doc.command},
              {"config", doc.config},
              {"payload", doc.payload},
              {"deterministic", doc.deterministic}};
}

std::string render(const ReportDocument& doc) { return canonicalize(to_json(doc)).dump(2) + "\n"; }

Json to_json(const CoreMetrics& m) {
  return Json{{"C", optional_number(m.completeness)},
              {"R", optional_number(m.retrievability)},
              {"M", optional_number(m.match_rate)},
              {"V", optional_number(m.verifiability)}};
}

Json to_json(const EvidenceReport& r) {
  Json sizes = Json::array();
  for (const auto& b : r.per_size) {
    sizes.push_back({{"size_bytes", b.size},
                     {"upload_ms", percentiles(b.upload_ms)},
                     {"fetch_ms", percentiles(b.fetch_ms)}});
  }
  return Json{{"n", r.n},
              {"fetched", r.fetched},
              {"matched", r.matched},
              {"failures", r.failures},
              {"R", optional_number(r.R)},
              {"M", optional_number(r.M)},
              {"V", optional_number(r.V)},
              {"upload_ms", percentiles(r.upload_ms)},
              {"fetch_ms", percentiles(r.fetch_ms)},
              {"per_size", sizes}};
}

Json to_json(const EvidenceVerification& v) {
  Json failed = Json::array();
  for (const auto& c : v.checks) {
    if (!c.fetched || !c.matched) failed.push_back(c.cid.str());
  }
  return Json{{"evidence", v.checks.size()},
              {"fetched", v.fetched},
              {"matched", v.matched},
              {"R", optional_number(v.R)},
              {"M", optional_number(v.M)},
              {"V", optional_number(v.V)},
              {"unverified", failed}};
}

Json to_json(const AqlBreakdown& a) {
  return Json{{"t_receipts", a.t_receipts},
              {"t_decode", a.t_decode},
              {"t_sort", a.t_sort},
              {"t_timestamps", a.t_timestamps},
              {"total", a.total}};
}

Json to_json(const Summary& s) {
  return Json{{"n", s.n}, {"p50", s.p50}, {"p95", s.p95}, {"mean", s.mean}, {"max", s.max}};
}

Json to_json(const AqlBenchmarkResult& result) {
  Json regimes = Json::object();
  for (const auto& [regime, stats] : result.regimes) {
    bool identity = true;
    for (const auto& run : stats.runs) {
      identity = identity &&
                 run.total == run.t_receipts + run.t_decode + run.t_sort + run.t_timestamps;
    }
    regimes[std::string(to_string(regime))] = {{"total", to_json(stats.total)},
                                               {"t_receipts", to_json(stats.t_receipts)},
                                               {"t_decode", to_json(stats.t_decode)},
                                               {"t_sort", to_json(stats.t_sort)},
                                               {"t_timestamps", to_json(stats.t_timestamps)},
                                               {"decomposition_identity", identity}};
  }
  return Json{{"workload",
               {{"tx", result.workload.tx_count},
                {"events", result.workload.event_count},
                {"blocks", result.workload.block_count}}},
              {"unit", "ms"},
              {"regimes", regimes}};
}

Json to_json(const NegativeSuiteResult& result) {
  Json cases = Json::array();
  for (const auto& c : result.cases) {
    cases.push_back({{"name", c.name},
                     {"expected", c.expected ? Json(to_string(*c.expected)) : Json("Success")},
                     {"observed", c.observed ? Json(to_string(*c.observed)) : Json("Success")},
                     {"state_unchanged", c.state_unchanged},
                     {"passed", c.passed()}});
  }
  return Json{{"cases", cases},
              {"rejected", result.rejected()},
              {"total", result.cases.size()},
              {"successful_collision_anchors", result.successful_collision_anchors}};
}

Json to_json(const OracleExperimentResult& r) {
  return Json{{"events", r.events},
              {"rejected_at_gate", r.rejected_at_gate},
              {"detected_by_audit", r.detected_by_audit},
              {"empirical_d", r.empirical_d},
              {"analytic_d", r.analytic_d},
              {"sigma", r.sigma},
              {"within_3_sigma", r.within(3.0)}};
}

Json to_json(const ScenarioReport& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"step", to_string(s.step)},
                     {"status", s.revert ? Json(to_string(*s.revert)) : Json("Success")}});
  }
  CoreMetrics metrics;
  metrics.completeness = r.completeness;
  metrics.retrievability = r.evidence.R;
  metrics.match_rate = r.evidence.M;
  metrics.verifiability = r.evidence.V;
  Json out{{"product", r.product.value},
           {"steps", steps},
           {"metrics", to_json(metrics)},
           {"records",
            {{"step_anchored", r.step_anchored_records},
             {"evidence_anchored", r.evidence_anchored_records},
             {"total", r.trail_records}}},
           {"store_objects", r.store_objects},
           {"evidence", to_json(r.evidence)},
           {"aql",
            {{"t_receipts", r.aql.t_receipts},
             {"t_timestamps", r.aql.t_timestamps},
             {std::string(kWallClockKey),
              {{"t_decode", r.aql.t_decode}, {"t_sort", r.aql.t_sort}, {"total", r.aql.total}}}}},
           {"negative", to_json(r.negative)}};
  if (r.oracle) out["oracle"] = to_json(*r.oracle);
  return out;
}

Json to_json(const ThroughputResult& r) {
  return Json{{"blocks", r.blocks},
              {"commitments", r.commitments},
              {"seconds", r.seconds},
              {"commitments_per_second", r.commitments_per_second},
              {"mean_inclusion_latency_s", r.mean_inclusion_latency},
              {"max_block_gas", r.max_block_gas}};
}

Json Table::to_json() const {
  Json out_rows = Json::array();
  for (const auto& row : rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < columns.size() && i < row.size(); ++i) obj[columns[i]] = row[i];
    out_rows.push_back(std::move(obj));
  }
  return Json{{"columns", columns}, {"rows", out_rows}};
}

std::string Table::to_csv() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << csv_escape(columns[i]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(cell_text(row[i]));
    out << '\n';
  }
  return out.str();
}

std::string Table::to_markdown() const {
  std::ostringstream out;
  out << '|';
  for (const auto& c : columns) out << ' ' << c << " |";
  out << "\n|";
  for (std::size_t i = 0; i < columns.size(); ++i) out << " --- |";
  out << '\n';
  for (const auto& row : rows) {
    out << '|';
    for (const auto& cell : row) out << ' ' << cell_text(cell) << " |";
    out << '\n';
  }
  return out.str();
}

Table cost_table_view(const std::vector<CostRow>& rows) {
  Table t{{"Gas price (gwei)", "Cost per batch (USD)", "Cost per CID (USD)"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.gas_price_gwei, r.batch_usd, r.per_cid_usd});
  return t;
}

Table availability_table_view(const std::vector<AvailabilityRow>& rows,
                              const std::vector<double>& monte_carlo) {
  Table t{{"p", "k", "P(retrievable)", "Expected tries"}, {}};
  if (!monte_carlo.empty()) t.columns.push_back("Monte Carlo P(retrievable)");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    std::vector<Json> row{r.p, r.k, r.retrievable, r.expected_tries};
    if (!monte_carlo.empty()) row.push_back(i < monte_carlo.size() ? Json(monte_carlo[i]) : Json());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table detection_table_view(const std::vector<DetectionRow>& rows,
                           const std::vector<OracleExperimentResult>& experiments) {
  Table t{{"Gate v", "Sampling s", "Detection d"}, {}};
  if (!experiments.empty()) {
    t.columns.insert(t.columns.end(), {"Empirical d", "Binomial sigma", "Within 3 sigma"});
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Json> row{rows[i].v, rows[i].s, rows[i].d};
    if (!experiments.empty()) {
      if (i < experiments.size()) {
        row.insert(row.end(), {experiments[i].empirical_d, experiments[i].sigma,
                               experiments[i].within(3.0)});
      } else {
        row.insert(row.end(), {Json(), Json(), Json()});
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table batching_table_view(const std::vector<BatchingRow>& rows) {
  Table t{{"Arrival rate lambda (events/s)", "W_max (s)", "E[W] (s)", "W_p95 (s)", "E[D] (s)",
           "D_p95 (s)"},
          {}};
  bool simulated = false;
  for (const auto& r : rows) simulated = simulated || r.simulated.has_value();
  if (simulated) {
    t.columns.insert(t.columns.end(),
                     {"Simulated E[W] (s)", "Simulated E[D] (s)", "Simulated D_p95 (s)"});
  }
  for (const auto& r : rows) {
    const DelayStats& a = r.analytic.stats;
    std::vector<Json> row{r.lambda, r.analytic.w_max, a.mean_wait, a.wait_p95, a.mean_delay,
                          a.delay_p95};
    if (simulated) {
      if (r.simulated) {
        const DelayStats& s = r.simulated->stats;
        row.insert(row.end(), {s.mean_wait, s.mean_delay, s.delay_p95});
      } else {
        row.insert(row.end(), {Json(), Json(), Json()});
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

/// Payload of a report document, or the value itself if it is not wrapped.
const Json& payload_of(const Json& artifact) {
  auto it = artifact.find("payload");
  return it != artifact.end() ? *it : artifact;
}

Json lookup(const Json& root, const std::vector<std::string>& path) {
  const Json* node = &root;
  for (const auto& key : path) {
    if (!node->is_object()) return nullptr;
    auto it = node->find(key);
    if (it == node->end()) return nullptr;
    node = &*it;
  }
  return *node;
}

class RowBuilder {
 public:
  explicit RowBuilder(std::string check) { row_["check"] = std::move(check); }

  /// Returns the artifact payload or records it as missing.
  const Json* need(const std::optional<Json>& artifact, const std::string& name) {
    if (!artifact) {
      missing_.push_back(name);
      return nullptr;
    }
    return &payload_of(*artifact);
  }

  void set(const std::string& key, Json value) { row_["results"][key] = std::move(value); }

  Json finish() {
    row_["status"] = missing_.empty() ? "OK" : "MissingInput";
    row_["missing"] = missing_;
    if (!row_.contains("results")) row_["results"] = Json::object();
    return row_;
  }

 private:
  Json row_ = Json::object();
  std::vector<std::string> missing_;
};

}  // namespace

Json scorecard(const ScorecardInputs& in) {
  Json rows = Json::object();

  {
    RowBuilder row("Complete provenance chain and verifiable evidence linkage");
    if (const Json* p = row.need(in.scenario, "scenario")) {
      row.set("C", lookup(*p, {"metrics", "C"}));
      row.set("scenario_V", lookup(*p, {"metrics", "V"}));
      row.set("step_anchored_records", lookup(*p, {"records", "step_anchored"}));
    }
    if (const Json* p = row.need(in.evidence, "evidence")) {
      for (const char* key : {"n", "R", "M", "V", "failures"}) row.set(key, lookup(*p, {key}));
    }
    rows["Transparency"] = row.finish();
  }
  {
    RowBuilder row("Attributable actions; unauthorised actions rejected; audit reconstruction feasible");
    if (const Json* p = row.need(in.scenario, "scenario")) {
      row.set("negative_cases_rejected", lookup(*p, {"negative", "rejected"}));
      row.set("negative_cases_total", lookup(*p, {"negative", "total"}));
    }
    if (const Json* p = row.need(in.audit, "audit")) {
      row.set("aql_p95_ms", lookup(*p, {"regimes", "UNCACHED", "total", "p95"}));
      row.set("aql_cached_p95_ms", lookup(*p, {"regimes", "CACHED", "total", "p95"}));
    }
    if (const Json* p = row.need(in.oracle, "oracle")) row.set("detection", lookup(*p, {"table"}));
    rows["Accountability"] = row.finish();
  }
  {
    RowBuilder row("Low operational burden; feasible near real time recording");
    if (const Json* p = row.need(in.batching, "batching")) row.set("batching", lookup(*p, {"table"}));
    if (in.fairness) {
      const Json& p = payload_of(*in.fairness);
      row.set("fairness", p);
    }
    rows["Fairness"] = row.finish();
  }
  {
    RowBuilder row("Cost viability; privacy by design; resilience under churn");
    if (const Json* p = row.need(in.anchor, "anchor")) {
      row.set("max_batch", lookup(*p, {"max_batch"}));
      row.set("throughput_commitments_per_s",
              lookup(*p, {"throughput", "commitments_per_second"}));
    }
    if (const Json* p = row.need(in.fees, "fees")) row.set("cost", lookup(*p, {"table"}));
    if (const Json* p = row.need(in.availability, "availability")) {
      row.set("availability", lookup(*p, {"table"}));
    }
    rows["Safety"] = row.finish();
  }
  return Json{{"principles", rows}};
}

std::vector<std::string> missing_inputs(const Json& card) {
  std::vector<std::string> out;
  for (const auto& [principle, row] : card.at("principles").items()) {
    for (const auto& name : row.at("missing")) {
      std::string s = name.get<std::string>();
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  }
  return out;
}

std::string scorecard_markdown(const Json& card) {
  std::ostringstream out;
  out << "| Principle | Operational check | Status | Results |\n| --- | --- | --- | --- |\n";
  for (const char* principle : {"Transparency", "Accountability", "Fairness", "Safety"}) {
    const Json& row = card.at("principles").at(principle);
    std::string summary;
    for (const auto& [key, value] : row.at("results").items()) {
      if (value.is_object() || value.is_array()) continue;
      if (!summary.empty()) summary += "; ";
      summary += key + " = " + cell_text(value);
    }
    out << "| " << principle << " | " << row.at("check").get<std::string>() << " | "
        << row.at("status").get<std::string>() << " | " << summary << " |\n";
  }
  return out.str();
}

}  // namespace provchain
