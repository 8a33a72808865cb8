#include "provchain/contracts.hpp"

#include <algorithm>

#include "provchain/error.hpp"

namespace provchain {

namespace {

// Payload keys are kept sorted so logs survive a JSON round trip unchanged.
Payload make_payload(std::initializer_list<std::pair<std::string, std::string>> fields) {
  Payload p(fields);
  std::sort(p.begin(), p.end());
  return p;
}

ExecutionOutcome revert(RevertReason reason) { return ExecutionOutcome{reason, {}}; }

std::string step_text(LifecycleStep step) { return std::string(to_string(step)); }

}  // namespace

Role authorized_role(LifecycleStep step) {
  switch (step) {
    case LifecycleStep::Produced: return Role::Producer;
    case LifecycleStep::Processed:
    case LifecycleStep::Shipped: return Role::Processor;
    case LifecycleStep::Received:
    case LifecycleStep::AtRetail:
    case LifecycleStep::Sold: return Role::Retailer;
  }
  return Role::Producer;
}

ContractSuite::ContractSuite(SuiteConfig config) : config_(std::move(config)) {}

ExecutionOutcome ContractSuite::execute(const PendingTx& tx, const BlockContext& ctx) {
  return std::visit([&](const auto& call) { return run(tx.sender, tx.tx_id, ctx, call); },
                    tx.call);
}

std::optional<RevertReason> ContractSuite::check_active(const Address& sender) const {
  auto it = actors_.find(sender);
  if (it == actors_.end()) return RevertReason::Unauthorised;
  if (it->second.status != ActorStatus::Active) return RevertReason::ActorInactive;
  return std::nullopt;
}

ExecutionOutcome ContractSuite::run(const Address& sender, TxId, const BlockContext&,
                                    const RegisterActorCall& call) {
  if (sender != config_.admin) return revert(RevertReason::NotAdmin);
  if (actors_.contains(call.address)) return revert(RevertReason::AlreadyRegistered);
  actors_.emplace(call.address, ActorRecord{call.address, call.role, ActorStatus::Active});
  return {std::nullopt,
          {{LogTopic::RegisteredActor, make_payload({{"address", call.address.value},
                                                     {"role", std::string(to_string(call.role))},
                                                     {"sender", sender.value}})}}};
}

ExecutionOutcome ContractSuite::run(const Address& sender, TxId, const BlockContext&,
                                    const SetActorStatusCall& call) {
  if (sender != config_.admin) return revert(RevertReason::NotAdmin);
  auto it = actors_.find(call.address);
  if (it == actors_.end()) return revert(RevertReason::UnknownActor);
  it->second.status = call.status;
  return {std::nullopt,
          {{LogTopic::StatusChanged,
            make_payload({{"address", call.address.value},
                          {"status", std::string(to_string(call.status))},
                          {"sender", sender.value}})}}};
}

ExecutionOutcome ContractSuite::run(const Address& sender, TxId tx, const BlockContext& ctx,
                                    const AnchorStepCall& call) {
  if (auto r = check_active(sender)) return revert(*r);
  if (actors_.at(sender).role != authorized_role(call.step)) {
    return revert(RevertReason::WrongRole);
  }
  if (used_step_keys_.contains({call.product, call.step})) {
    return revert(RevertReason::DuplicateStep);
  }
  auto existing = products_.find(call.product);
  const std::optional<LifecycleStep> expected =
      existing == products_.end() ? std::optional(LifecycleStep::Produced)
                                  : existing->second.next_step;
  if (expected != call.step) return revert(RevertReason::OutOfOrder);
  if (call.step == LifecycleStep::Sold && config_.require_certification_before_sale) {
    const AttestationRecord* latest = nullptr;
    for (const auto& a : attestations_) {
      if (a.product == call.product && a.step == LifecycleStep::AtRetail) latest = &a;
    }
    if (latest == nullptr || latest->verdict != Verdict::Approve) {
      return revert(RevertReason::GateNotSatisfied);
    }
  }

  // All checks passed; mutate.
  auto& record = products_[call.product];
  record.product = call.product;
  record.history.push_back(StepEntry{call.step, sender, tx, ctx.block_number, call.evidence});
  record.next_step = ordinal(call.step) + 1 < kLifecycleStepCount
                         ? std::optional(kLifecycle[ordinal(call.step) + 1])
                         : std::nullopt;
  used_step_keys_.insert({call.product, call.step});

  ExecutionOutcome out;
  out.logs.push_back(
      {LogTopic::StepAnchored,
       make_payload({{"evidence_count", std::to_string(call.evidence.size())},
                     {"product_id", call.product.value},
                     {"sender", sender.value},
                     {"step", step_text(call.step)}})});
  for (const auto& cid : call.evidence) {
    rollup_.push_back(EvidenceCommitment{call.product, call.step, cid, sender, tx});
    out.logs.push_back({LogTopic::EvidenceAnchored,
                        make_payload({{"cid", cid.str()},
                                      {"product_id", call.product.value},
                                      {"sender", sender.value},
                                      {"step", step_text(call.step)}})});
  }
  return out;
}

ExecutionOutcome ContractSuite::run(const Address& sender, TxId tx, const BlockContext&,
                                    const SubmitCidBatchCall& call) {
  if (auto r = check_active(sender)) return revert(*r);
  ExecutionOutcome out;
  out.logs.reserve(call.commitments.size());
  for (const auto& c : call.commitments) {
    rollup_.push_back(EvidenceCommitment{c.product, c.step, c.cid, sender, tx});
    out.logs.push_back({LogTopic::EvidenceAnchored,
                        make_payload({{"cid", c.cid.str()},
                                      {"product_id", c.product.value},
                                      {"sender", sender.value},
                                      {"step", step_text(c.step)}})});
  }
  return out;
}

ExecutionOutcome ContractSuite::run(const Address& sender, TxId tx, const BlockContext&,
                                    const RegisterDocumentCall& call) {
  if (auto r = check_active(sender)) return revert(*r);
  std::uint32_t version = 1;
  for (const auto& d : documents_) {
    if (d.doc == call.doc) ++version;
  }
  documents_.push_back(DocumentVersion{call.doc, call.cid, version, sender, tx});
  return {std::nullopt,
          {{LogTopic::DocumentRegistered, make_payload({{"cid", call.cid.str()},
                                                        {"doc_id", call.doc.value},
                                                        {"sender", sender.value},
                                                        {"version", std::to_string(version)}})}}};
}

ExecutionOutcome ContractSuite::run(const Address& sender, TxId tx, const BlockContext&,
                                    const AttestCall& call) {
  if (auto r = check_active(sender)) return revert(*r);
  if (actors_.at(sender).role != Role::Certifier) return revert(RevertReason::WrongRole);
  attestations_.push_back(
      AttestationRecord{call.product, call.step, call.verdict, sender, call.evidence, tx});
  return {std::nullopt,
          {{LogTopic::Attestation,
            make_payload({{"evidence_cid", call.evidence ? call.evidence->str() : std::string()},
                          {"product_id", call.product.value},
                          {"sender", sender.value},
                          {"step", step_text(call.step)},
                          {"verdict", std::string(to_string(call.verdict))}})}}};
}

ExecutionOutcome ContractSuite::run(const Address&, TxId, const BlockContext&,
                                    const RoutePaymentCall&) {
  return {};
}

std::optional<ActorRecord> ContractSuite::actor(const Address& address) const {
  auto it = actors_.find(address);
  if (it == actors_.end()) return std::nullopt;
  return it->second;
}

const ProductRecord* ContractSuite::product(const ProductId& id) const {
  auto it = products_.find(id);
  return it == products_.end() ? nullptr : &it->second;
}

bool ContractSuite::step_key_used(const ProductId& id, LifecycleStep step) const {
  return used_step_keys_.contains({id, step});
}

ProductTrace ContractSuite::get_product_trace(const ProductId& id) const {
  auto it = products_.find(id);
  if (it == products_.end()) throw Error(ErrorCode::UnknownProduct, id.value);
  ProductTrace trace;
  trace.product = id;
  trace.steps = it->second.history;
  for (const auto& a : attestations_) {
    if (a.product == id) trace.attestations.push_back(a);
  }
  for (const auto& c : rollup_) {
    if (c.product != id) continue;
    // Commitments that arrived with a step anchor are already in `steps`.
    bool via_anchor = std::any_of(trace.steps.begin(), trace.steps.end(),
                                  [&](const StepEntry& s) { return s.tx_id == c.tx_id; });
    if (!via_anchor) trace.batch_evidence.push_back(c);
  }
  return trace;
}

std::vector<DocumentVersion> ContractSuite::document_versions(const DocId& doc) const {
  std::vector<DocumentVersion> out;
  for (const auto& d : documents_) {
    if (d.doc == doc) out.push_back(d);
  }
  return out;
}

bool ContractSuite::operator==(const ContractSuite& other) const {
  return actors_ == other.actors_ && products_ == other.products_ &&
         used_step_keys_ == other.used_step_keys_ && rollup_ == other.rollup_ &&
         documents_ == other.documents_ && attestations_ == other.attestations_;
}

Network::Network(ChainConfig chain, SuiteConfig suite)
    : suite_(std::make_unique<ContractSuite>(std::move(suite))),
      ledger_(std::make_unique<Ledger>(chain, *suite_)) {}

TxId Network::register_actor(const Address& caller, const Address& address, Role role) {
  return ledger_->submit_transaction(caller, RegisterActorCall{address, role});
}

TxId Network::set_actor_status(const Address& caller, const Address& address,
                               ActorStatus status) {
  return ledger_->submit_transaction(caller, SetActorStatusCall{address, status});
}

TxId Network::anchor_step(const Address& caller, const ProductId& product, LifecycleStep step,
                          std::vector<Cid> evidence) {
  return ledger_->submit_transaction(caller, AnchorStepCall{product, step, std::move(evidence)});
}

TxId Network::submit_cid_batch(const Address& caller, std::vector<CidCommitment> commitments) {
  return ledger_->submit_transaction(caller, SubmitCidBatchCall{std::move(commitments)});
}

TxId Network::register_document(const Address& caller, const DocId& doc, const Cid& cid) {
  return ledger_->submit_transaction(caller, RegisterDocumentCall{doc, cid});
}

TxId Network::attest(const Address& certifier, const ProductId& product, LifecycleStep step,
                     Verdict verdict, std::optional<Cid> evidence) {
  return ledger_->submit_transaction(certifier,
                                     AttestCall{product, step, verdict, std::move(evidence)});
}

const TxReceipt& Network::confirm(TxId id) {
  while (!ledger_->is_included(id)) {
    if (ledger_->pending().empty()) {
      throw Error(ErrorCode::NotFound, "transaction " + to_string(id) + " is not pending");
    }
    ledger_->advance_block();
  }
  return ledger_->get_receipt(id);
}

}  // namespace provchain
