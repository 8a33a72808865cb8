#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "provchain/calls.hpp"
#include "provchain/ledger.hpp"
#include "provchain/types.hpp"

namespace provchain {

struct ActorRecord {
  Address address;
  Role role = Role::Producer;
  ActorStatus status = ActorStatus::Active;

  bool operator==(const ActorRecord&) const = default;
};

/// Role allowed to anchor each lifecycle step.
Role authorized_role(LifecycleStep step);

struct StepEntry {
  LifecycleStep step = LifecycleStep::Produced;
  Address actor;
  TxId tx_id;
  std::uint64_t block_number = 0;
  std::vector<Cid> evidence;

  bool operator==(const StepEntry&) const = default;
};

struct AttestationRecord {
  ProductId product;
  LifecycleStep step = LifecycleStep::Produced;
  Verdict verdict = Verdict::Approve;
  Address certifier;
  std::optional<Cid> evidence;
  TxId tx_id;

  bool operator==(const AttestationRecord&) const = default;
};

struct ProductRecord {
  ProductId product;
  std::vector<StepEntry> history;
  std::optional<LifecycleStep> next_step = LifecycleStep::Produced;  // nullopt once Sold

  bool operator==(const ProductRecord&) const = default;
};

struct EvidenceCommitment {
  ProductId product;
  LifecycleStep step = LifecycleStep::Produced;
  Cid cid;
  Address submitter;
  TxId tx_id;

  bool operator==(const EvidenceCommitment&) const = default;
};

struct DocumentVersion {
  DocId doc;
  Cid cid;
  std::uint32_t version = 1;
  Address registrant;
  TxId tx_id;

  bool operator==(const DocumentVersion&) const = default;
};

/// Read-only product view served to any role, consumers included.
struct ProductTrace {
  ProductId product;
  std::vector<StepEntry> steps;
  std::vector<AttestationRecord> attestations;
  std::vector<EvidenceCommitment> batch_evidence;  // via submit_cid_batch

  bool complete() const { return steps.size() == kLifecycleStepCount; }
};

struct SuiteConfig {
  Address admin{"0xadmin"};
  /// When set, anchoring Sold requires the latest attestation for AtRetail
  /// to be an Approve.
  bool require_certification_before_sale = false;
};

/// ActorRegistry, ProcessManager, CidRollup, DocumentRegistry and a no-op
/// PaymentRouter behind a single executor. State changes only from execute().
class ContractSuite final : public Executor {
 public:
  explicit ContractSuite(SuiteConfig config = {});

  ExecutionOutcome execute(const PendingTx& tx, const BlockContext& ctx) override;

  const SuiteConfig& config() const { return config_; }

  std::optional<ActorRecord> actor(const Address& address) const;
  const ProductRecord* product(const ProductId& id) const;
  bool step_key_used(const ProductId& id, LifecycleStep step) const;

  /// Throws Error(UnknownProduct).
  ProductTrace get_product_trace(const ProductId& id) const;

  std::vector<DocumentVersion> document_versions(const DocId& doc) const;
  const std::vector<EvidenceCommitment>& rollup() const { return rollup_; }

  /// Structural equality of all contract state; used for revert purity checks.
  bool operator==(const ContractSuite& other) const;

 private:
  ExecutionOutcome run(const Address& sender, TxId tx, const BlockContext& ctx,
                       const RegisterActorCall& call);
  ExecutionOutcome run(const Address& sender, TxId tx, const BlockContext& ctx,
                       const SetActorStatusCall& call);
  ExecutionOutcome run(const Address& sender, TxId tx, const BlockContext& ctx,
                       const AnchorStepCall& call);
  ExecutionOutcome run(const Address& sender, TxId tx, const BlockContext& ctx,
                       const SubmitCidBatchCall& call);
  ExecutionOutcome run(const Address& sender, TxId tx, const BlockContext& ctx,
                       const RegisterDocumentCall& call);
  ExecutionOutcome run(const Address& sender, TxId tx, const BlockContext& ctx,
                       const AttestCall& call);
  ExecutionOutcome run(const Address& sender, TxId tx, const BlockContext& ctx,
                       const RoutePaymentCall& call);

  /// Registered-and-active gate shared by every write path.
  std::optional<RevertReason> check_active(const Address& sender) const;

  SuiteConfig config_;
  std::map<Address, ActorRecord> actors_;
  std::map<ProductId, ProductRecord> products_;
  std::set<std::pair<ProductId, LifecycleStep>> used_step_keys_;
  std::vector<EvidenceCommitment> rollup_;
  std::vector<DocumentVersion> documents_;
  std::vector<AttestationRecord> attestations_;
};

/// Ledger plus contract suite, with typed submission helpers. The helpers
/// only queue transactions; nothing executes until a block is sealed.
class Network {
 public:
  explicit Network(ChainConfig chain = {}, SuiteConfig suite = {});

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  Ledger& ledger() { return *ledger_; }
  const Ledger& ledger() const { return *ledger_; }
  const ContractSuite& contracts() const { return *suite_; }
  const Address& admin() const { return suite_->config().admin; }

  TxId register_actor(const Address& caller, const Address& address, Role role);
  TxId set_actor_status(const Address& caller, const Address& address, ActorStatus status);
  TxId anchor_step(const Address& caller, const ProductId& product, LifecycleStep step,
                   std::vector<Cid> evidence = {});
  TxId submit_cid_batch(const Address& caller, std::vector<CidCommitment> commitments);
  TxId register_document(const Address& caller, const DocId& doc, const Cid& cid);
  TxId attest(const Address& certifier, const ProductId& product, LifecycleStep step,
              Verdict verdict, std::optional<Cid> evidence = std::nullopt);

  /// Seals blocks until `id` is included and returns its receipt.
  const TxReceipt& confirm(TxId id);

 private:
  std::unique_ptr<ContractSuite> suite_;
  std::unique_ptr<Ledger> ledger_;
};

}  // namespace provchain
