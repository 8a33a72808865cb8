#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "provchain/types.hpp"

namespace provchain {

// Contract-call descriptors carried by pending transactions. The ledger only
// needs their commitment count for gas; the contract suite interprets them.

struct RegisterActorCall {
  Address address;
  Role role = Role::Producer;
};

struct SetActorStatusCall {
  Address address;
  ActorStatus status = ActorStatus::Active;
};

struct AnchorStepCall {
  ProductId product;
  LifecycleStep step = LifecycleStep::Produced;
  std::vector<Cid> evidence;
};

struct CidCommitment {
  ProductId product;
  LifecycleStep step = LifecycleStep::Produced;
  Cid cid;
};

struct SubmitCidBatchCall {
  std::vector<CidCommitment> commitments;
};

struct RegisterDocumentCall {
  DocId doc;
  Cid cid;
};

struct AttestCall {
  ProductId product;
  LifecycleStep step = LifecycleStep::Produced;
  Verdict verdict = Verdict::Approve;
  std::optional<Cid> evidence;
};

// Settlement is not modelled; the router accepts and does nothing.
struct RoutePaymentCall {};

using Call = std::variant<RegisterActorCall, SetActorStatusCall, AnchorStepCall, SubmitCidBatchCall,
                          RegisterDocumentCall, AttestCall, RoutePaymentCall>;

/// Number of gas-bearing commitments a call costs. A step anchor costs one
/// commitment plus one per attached evidence CID; administrative calls cost one.
std::size_t commitment_units(const Call& call);

}  // namespace provchain
