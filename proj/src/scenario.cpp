#include "provchain/scenario.hpp"

#include <numeric>

#include "provchain/analytics.hpp"
#include "provchain/error.hpp"
#include "provchain/stats.hpp"

namespace provchain {

std::size_t ScenarioConfig::total_commitments() const {
  return std::accumulate(allocation.begin(), allocation.end(), std::size_t{0});
}

std::size_t NegativeSuiteResult::rejected() const {
  std::size_t n = 0;
  for (const auto& c : cases) n += c.passed() ? 1 : 0;
  return n;
}

bool NegativeSuiteResult::all_passed() const { return rejected() == cases.size(); }

bool OracleExperimentResult::within(double sigmas) const {
  return std::abs(empirical_d - analytic_d) <= sigmas * sigma;
}

void onboard(Network& network, const Roster& roster) {
  const std::array<std::pair<const Address*, Role>, 6> members = {{
      {&roster.producer, Role::Producer},
      {&roster.processor, Role::Processor},
      {&roster.retailer, Role::Retailer},
      {&roster.certifier, Role::Certifier},
      {&roster.regulator, Role::Regulator},
      {&roster.consumer, Role::Consumer},
  }};
  for (const auto& [address, role] : members) {
    network.register_actor(network.admin(), *address, role);
  }
  network.ledger().drain();
}

namespace {

const Address& actor_for(const Roster& roster, LifecycleStep step) {
  switch (authorized_role(step)) {
    case Role::Producer: return roster.producer;
    case Role::Processor: return roster.processor;
    default: return roster.retailer;
  }
}

/// C for one batch, checked directly against the reconstructed trail: all six
/// StepAnchored records present, in lifecycle order.
bool trail_complete(const AuditTrail& trail) {
  std::size_t next = 0;
  for (const auto& rec : trail.records) {
    if (rec.topic != LogTopic::StepAnchored) continue;
    auto step = parse_step(*find_field(rec.payload, "step"));
    if (!step || ordinal(*step) != next) return false;
    ++next;
  }
  return next == kLifecycleStepCount;
}

}  // namespace

ScenarioReport run_reference(const ScenarioConfig& config) {
  Network network(config.chain, SuiteConfig{Address{"0xadmin"}, config.gating});
  onboard(network, config.roster);

  EvidenceStore store(config.providers);
  Rng rng(config.seed);

  ScenarioReport report;
  report.product = config.product;

  for (LifecycleStep step : kLifecycle) {
    if (config.skip_step == step) continue;
    std::vector<Cid> cids;
    for (std::size_t i = 0; i < config.allocation[ordinal(step)]; ++i) {
      Bytes payload = generate_payload(config.evidence_bytes, rng);
      cids.push_back(store.put(payload, config.pin, rng).cid);
    }
    if (step == LifecycleStep::Sold && config.gating && config.certify) {
      network.confirm(network.attest(config.roster.certifier, config.product,
                                     LifecycleStep::AtRetail, Verdict::Approve));
    }
    const TxReceipt& receipt = network.confirm(
        network.anchor_step(actor_for(config.roster, step), config.product, step, cids));
    report.steps.push_back(StepOutcome{step, receipt.revert});
  }
  report.store_objects = store.object_count();

  // Consumer view: the on-chain trace.
  std::size_t complete = 0;
  if (network.contracts().product(config.product) != nullptr) {
    complete = network.contracts().get_product_trace(config.product).complete() ? 1 : 0;
  }

  // Auditor view: reconstruct and re-verify evidence.
  CacheState cache;
  Rng rpc_rng = substream(config.seed, 1);
  try {
    Reconstruction rec = reconstruct(config.product, network.ledger(), config.rpc, cache, rpc_rng);
    report.aql = rec.aql;
    report.trail_records = rec.trail.records.size();
    for (const auto& r : rec.trail.records) {
      report.step_anchored_records += r.topic == LogTopic::StepAnchored ? 1 : 0;
      report.evidence_anchored_records += r.topic == LogTopic::EvidenceAnchored ? 1 : 0;
    }
    if (complete != (trail_complete(rec.trail) ? 1u : 0u)) {
      throw Error(ErrorCode::SuiteFailure, "on-chain trace and audit trail disagree on C");
    }
    Rng fetch_rng = substream(config.seed, 2);
    report.evidence = verify_evidence(rec.trail, store, fetch_rng);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownProduct) throw;
  }
  report.completeness = core_metrics(CoreMetricsInput{1, complete, 0, 0, 0}).completeness;

  report.negative = run_negative_suite(config);
  if (config.injection) {
    report.oracle = run_oracle_experiment(config.injection->events, config.injection->gate,
                                          config.injection->sampling, config.seed);
  }
  return report;
}

NegativeSuiteResult run_negative_suite(const ScenarioConfig& config, bool reactivate_suspended) {
  const Roster& roster = config.roster;
  const ProductId batch{"negative-B1"};
  const Address intruder{"0xunregistered"};
  const Address suspended{"0xprocessor-suspended"};
  const Address rival{"0xprocessor-2"};

  // Builds the shared preamble: roster, extra processors, and B1 anchored
  // through Processed.
  auto prepare = [&](Network& net) {
    onboard(net, roster);
    net.register_actor(net.admin(), suspended, Role::Processor);
    net.register_actor(net.admin(), rival, Role::Processor);
    net.ledger().drain();
    net.confirm(net.anchor_step(roster.producer, batch, LifecycleStep::Produced));
    net.confirm(net.anchor_step(roster.processor, batch, LifecycleStep::Processed));
  };

  Network net(config.chain);
  prepare(net);
  NegativeSuiteResult result;

  auto single = [&](std::string name, RevertReason expected, const Address& caller,
                    LifecycleStep step) {
    const ContractSuite before = net.contracts();
    const TxReceipt& r = net.confirm(net.anchor_step(caller, batch, step));
    result.cases.push_back(
        NegativeCaseResult{std::move(name), expected, r.revert, before == net.contracts()});
  };

  single("unregistered_write", RevertReason::Unauthorised, intruder, LifecycleStep::Shipped);

  net.confirm(net.set_actor_status(net.admin(), suspended, ActorStatus::Suspended));
  if (reactivate_suspended) {
    net.confirm(net.set_actor_status(net.admin(), suspended, ActorStatus::Active));
  }
  single("suspended_actor_write", RevertReason::ActorInactive, suspended, LifecycleStep::Shipped);

  single("replay", RevertReason::DuplicateStep, roster.producer, LifecycleStep::Produced);

  // Two processors race for (B1, Shipped) within one block.
  const TxId first = net.anchor_step(roster.processor, batch, LifecycleStep::Shipped);
  const TxId second = net.anchor_step(rival, batch, LifecycleStep::Shipped);
  net.ledger().advance_block();
  const TxReceipt& win = net.ledger().get_receipt(first);
  const TxReceipt& lose = net.ledger().get_receipt(second);

  // Purity oracle for the losing tx: a twin network that replays the same
  // history without it must end in the same contract state.
  Network twin(config.chain);
  prepare(twin);
  twin.confirm(twin.anchor_step(intruder, batch, LifecycleStep::Shipped));
  twin.confirm(twin.set_actor_status(twin.admin(), suspended, ActorStatus::Suspended));
  if (reactivate_suspended) {
    twin.confirm(twin.set_actor_status(twin.admin(), suspended, ActorStatus::Active));
  }
  twin.confirm(twin.anchor_step(suspended, batch, LifecycleStep::Shipped));
  twin.confirm(twin.anchor_step(roster.producer, batch, LifecycleStep::Produced));
  twin.confirm(twin.anchor_step(roster.processor, batch, LifecycleStep::Shipped));

  const bool same_block = win.block_number == lose.block_number;
  result.cases.push_back(NegativeCaseResult{
      "same_block_collision", RevertReason::DuplicateStep,
      same_block ? lose.revert : std::optional<RevertReason>{},
      twin.contracts() == net.contracts()});
  for (const auto& log : net.ledger().all_logs()) {
    if (log.topic == LogTopic::StepAnchored && concerns(log, batch) &&
        *find_field(log.payload, "step") == to_string(LifecycleStep::Shipped)) {
      ++result.successful_collision_anchors;
    }
  }
  return result;
}

void require_all_rejected(const NegativeSuiteResult& result) {
  std::string failed;
  for (const auto& c : result.cases) {
    if (c.passed()) continue;
    if (!failed.empty()) failed += ", ";
    failed += c.name;
  }
  if (!failed.empty()) throw Error(ErrorCode::SuiteFailure, failed);
}

OracleExperimentResult run_oracle_experiment(std::size_t events, double v, double s,
                                             std::uint64_t seed) {
  if (events == 0) throw Error(ErrorCode::DomainError, "oracle experiment needs N >= 1");
  OracleExperimentResult out;
  out.analytic_d = detection_prob(v, s);  // validates v and s
  out.events = events;
  for (std::size_t i = 0; i < events; ++i) {
    Rng rng = substream(seed, i);
    if (rng.bernoulli(v)) {
      ++out.rejected_at_gate;
    } else if (rng.bernoulli(s)) {
      ++out.detected_by_audit;
    }
  }
  out.empirical_d =
      static_cast<double>(out.rejected_at_gate + out.detected_by_audit) / static_cast<double>(events);
  out.sigma = binomial_sigma(out.analytic_d, events);
  return out;
}

}  // namespace provchain
