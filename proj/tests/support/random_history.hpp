#pragma once

// Random multi-product chain histories for oracle comparisons, plus a
// brute-force trail builder that scans every log directly.

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

#include "provchain/auditor.hpp"
#include "provchain/contracts.hpp"
#include "provchain/evidence.hpp"

namespace provchain::fixtures {

struct RandomHistory {
  std::vector<ProductId> products;
};

inline RandomHistory build_random_history(Network& net, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::pair<Address, Role>> actors = {
      {Address{"0xr-producer"}, Role::Producer},   {Address{"0xr-processor"}, Role::Processor},
      {Address{"0xr-processor-2"}, Role::Processor}, {Address{"0xr-retailer"}, Role::Retailer},
      {Address{"0xr-certifier"}, Role::Certifier}, {Address{"0xr-regulator"}, Role::Regulator},
  };
  for (const auto& [a, r] : actors) net.register_actor(net.admin(), a, r);
  net.ledger().drain();

  RandomHistory h;
  const std::size_t product_count = 2 + rng.next() % 4;
  for (std::size_t i = 0; i < product_count; ++i) {
    h.products.push_back(ProductId{"rp-" + std::to_string(seed) + "-" + std::to_string(i)});
  }
  const std::size_t txs = 20 + rng.next() % 60;
  std::uint64_t cid_seq = seed * 1'000'003;
  for (std::size_t i = 0; i < txs; ++i) {
    const auto& [who, role] = actors[rng.next() % actors.size()];
    const ProductId& product = h.products[rng.next() % h.products.size()];
    const LifecycleStep step = kLifecycle[rng.next() % kLifecycleStepCount];
    switch (rng.next() % 4) {
      case 0:
      case 1: {
        std::vector<Cid> evidence(rng.next() % 4);
        for (auto& c : evidence) c = synthetic_cid(cid_seq++);
        net.anchor_step(who, product, step, std::move(evidence));
        break;
      }
      case 2: {
        std::vector<CidCommitment> batch(1 + rng.next() % 5);
        for (auto& c : batch) {
          c = CidCommitment{h.products[rng.next() % h.products.size()], step, synthetic_cid(cid_seq++)};
        }
        net.submit_cid_batch(who, std::move(batch));
        break;
      }
      default:
        net.attest(who, product, step, rng.next() % 2 ? Verdict::Approve : Verdict::Reject);
    }
    if (rng.next() % 3 == 0) net.ledger().advance_block();
  }
  net.ledger().drain();
  return h;
}

/// Oracle: every log carrying the product id, in (block, tx, log) order.
inline std::vector<AuditRecord> brute_force_trail(const Ledger& ledger, const ProductId& product) {
  std::vector<AuditRecord> out;
  for (const LogRecord& log : ledger.all_logs()) {
    bool match = false;
    std::string sender;
    for (const auto& [k, v] : log.payload) {
      if (k == "product_id" && v == product.value) match = true;
      if (k == "sender") sender = v;
    }
    if (!match) continue;
    out.push_back(AuditRecord{log.topic, log.payload, log.block_number, log.tx_index,
                              log.log_index, ledger.blocks().at(log.block_number).timestamp, sender});
  }
  std::stable_sort(out.begin(), out.end(), [](const AuditRecord& a, const AuditRecord& b) {
    return std::tie(a.block_number, a.tx_index, a.log_index) <
           std::tie(b.block_number, b.tx_index, b.log_index);
  });
  return out;
}

}  // namespace provchain::fixtures
