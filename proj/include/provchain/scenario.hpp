#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "provchain/auditor.hpp"
#include "provchain/contracts.hpp"
#include "provchain/evidence.hpp"
#include "provchain/ledger.hpp"

namespace provchain {

struct Roster {
  Address producer{"0xproducer"};
  Address processor{"0xprocessor"};
  Address retailer{"0xretailer"};
  Address certifier{"0xcertifier"};
  Address regulator{"0xregulator"};
  Address consumer{"0xconsumer"};
};

struct InjectionConfig {
  std::size_t events = 100'000;
  double gate = 0.2;      // v
  double sampling = 0.01; // s
};

struct ScenarioConfig {
  std::uint64_t seed = 42;
  ProductId product{"coffee-batch-001"};
  Roster roster{};
  /// Evidence objects anchored with each lifecycle step, Produced..Sold.
  std::array<std::size_t, kLifecycleStepCount> allocation = {3, 2, 2, 2, 2, 2};
  std::size_t evidence_bytes = 4 * 1024;
  bool gating = false;
  /// With gating on, the certifier approves AtRetail before the sale.
  bool certify = true;
  /// Anchor every step except this one (fault injection; reference run: none).
  std::optional<LifecycleStep> skip_step;
  std::optional<InjectionConfig> injection;
  ChainConfig chain{};
  RpcModel rpc{};
  std::vector<ProviderModel> providers = {ProviderModel{"provider-a", 1.0}};
  PinPolicy pin{};

  std::size_t total_commitments() const;
};

struct StepOutcome {
  LifecycleStep step = LifecycleStep::Produced;
  std::optional<RevertReason> revert;
};

struct NegativeCaseResult {
  std::string name;
  std::optional<RevertReason> expected;
  std::optional<RevertReason> observed;
  bool state_unchanged = false;

  bool passed() const { return observed == expected && state_unchanged; }
};

struct NegativeSuiteResult {
  std::vector<NegativeCaseResult> cases;
  std::size_t successful_collision_anchors = 0;

  std::size_t rejected() const;
  bool all_passed() const;
};

struct OracleExperimentResult {
  std::size_t events = 0;
  std::size_t rejected_at_gate = 0;
  std::size_t detected_by_audit = 0;
  double empirical_d = 0.0;
  double analytic_d = 0.0;
  double sigma = 0.0;

  bool within(double sigmas) const;
};

struct ScenarioReport {
  ProductId product;
  std::vector<StepOutcome> steps;
  std::optional<double> completeness;  // C over the one evaluated batch
  std::size_t step_anchored_records = 0;
  std::size_t evidence_anchored_records = 0;
  std::size_t store_objects = 0;
  EvidenceVerification evidence;
  AqlBreakdown aql;
  std::size_t trail_records = 0;
  NegativeSuiteResult negative;
  std::optional<OracleExperimentResult> oracle;
};

/// Coffee batch walkthrough: onboard the roster, anchor Produced..Sold with
/// freshly stored evidence, then verify as a consumer and reconstruct as an
/// auditor.
ScenarioReport run_reference(const ScenarioConfig& config);

/// The four rejection cases (unregistered, suspended, replay, same-block
/// collision) against a freshly onboarded network. Each case records the
/// observed revert and whether contract state stayed unchanged.
/// `reactivate_suspended` restores the suspended actor before its case runs
/// (control condition).
NegativeSuiteResult run_negative_suite(const ScenarioConfig& config,
                                       bool reactivate_suspended = false);

/// Throws SuiteFailure listing every case that did not revert as designated.
void require_all_rejected(const NegativeSuiteResult& result);

/// Bernoulli gate (v) then Bernoulli audit (s) per injected false event, each
/// on its own RNG substream.
OracleExperimentResult run_oracle_experiment(std::size_t events, double v, double s,
                                             std::uint64_t seed);

/// Registers the roster through the admin and seals the registrations.
void onboard(Network& network, const Roster& roster);

}  // namespace provchain
