#include "provchain/anchor_bench.hpp"

#include <memory>

#include "provchain/contracts.hpp"
#include "provchain/error.hpp"
#include "provchain/evidence.hpp"

namespace provchain {

namespace {

const Address kBenchProducer{"0xbench-producer"};

std::vector<CidCommitment> make_commitments(std::size_t n, std::uint64_t& sequence) {
  std::vector<CidCommitment> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(
        CidCommitment{ProductId{"bench"}, LifecycleStep::Produced, synthetic_cid(sequence++)});
  }
  return out;
}

void register_bench_producer(Network& net) {
  net.register_actor(net.admin(), kBenchProducer, Role::Producer);
  net.ledger().drain();
}

}  // namespace

std::size_t find_max_batch(const BatchProbe& probe, std::size_t limit) {
  if (limit == 0 || !probe(1)) return 0;
  std::size_t good = 1;
  std::size_t bad = 0;  // 0: no failing size seen yet
  for (std::size_t n = 2; n <= limit; n *= 2) {
    if (!probe(n)) {
      bad = n;
      break;
    }
    good = n;
  }
  if (bad == 0) {
    if (good == limit || probe(limit)) return limit;
    bad = limit;
  }
  while (bad - good > 1) {
    const std::size_t mid = good + (bad - good) / 2;
    (probe(mid) ? good : bad) = mid;
  }
  return good;
}

std::size_t scan_max_batch(const BatchProbe& probe, std::size_t limit) {
  std::size_t n = 0;
  while (n < limit && probe(n + 1)) ++n;
  return n;
}

BatchProbe submission_probe(const ChainConfig& config) {
  auto net = std::make_shared<Network>(config);
  return [net](std::size_t n) {
    const Ledger& ledger = net->ledger();
    return ledger.admits(ledger.gas_of_batch(n));
  };
}

BatchProbe execution_probe(const ChainConfig& config) {
  return [config](std::size_t n) {
    auto net = std::make_unique<Network>(config);
    // A batch the cap refuses would also refuse the (single unit) registration.
    if (!net->ledger().admits(net->ledger().gas_of_batch(n))) return false;
    register_bench_producer(*net);
    std::uint64_t sequence = 0;
    TxId id{};
    try {
      id = net->submit_cid_batch(kBenchProducer, make_commitments(n, sequence));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::GasCapExceeded) return false;
      throw;
    }
    return net->confirm(id).success();
  };
}

std::size_t find_max_batch(const ChainConfig& config) {
  config.validate();
  // No transaction can outgrow a block, so the block bounds the search.
  const std::size_t limit = config.block_gas_limit / config.gas_per_commitment;
  return find_max_batch(execution_probe(config), limit);
}

ThroughputResult measure_throughput(const ChainConfig& config, std::size_t blocks,
                                    bool fill_remainder) {
  config.validate();
  if (blocks == 0) throw Error(ErrorCode::DomainError, "throughput needs at least one block");
  const std::size_t max_batch =
      find_max_batch(submission_probe(config), config.block_gas_limit / config.gas_per_commitment);
  if (max_batch == 0) throw Error(ErrorCode::DomainError, "no feasible batch under the gas cap");

  auto net = std::make_unique<Network>(config);
  register_bench_producer(*net);
  Ledger& ledger = net->ledger();
  std::uint64_t sequence = 0;
  ThroughputResult result;
  result.blocks = blocks;
  double latency_sum = 0.0;
  std::size_t tx_count = 0;

  for (std::size_t b = 0; b < blocks; ++b) {
    Gas remaining = config.block_gas_limit;
    std::vector<std::pair<TxId, std::size_t>> slot;
    while (remaining >= ledger.gas_of_batch(max_batch)) {
      slot.emplace_back(net->submit_cid_batch(kBenchProducer, make_commitments(max_batch, sequence)),
                        max_batch);
      remaining -= ledger.gas_of_batch(max_batch);
    }
    const std::size_t rest = remaining / config.gas_per_commitment;
    if (fill_remainder && rest > 0) {
      slot.emplace_back(net->submit_cid_batch(kBenchProducer, make_commitments(rest, sequence)),
                        rest);
    }
    const SealedBlock& block = ledger.advance_block();
    result.max_block_gas = std::max(result.max_block_gas, block.gas_used);
    for (const auto& [id, size] : slot) {
      const TxReceipt& r = ledger.get_receipt(id);
      if (!r.success() || r.block_number != block.number) {
        throw Error(ErrorCode::SuiteFailure, "saturating batch missed its block");
      }
      result.commitments += size;
      latency_sum += block.timestamp - r.submit_time;
      ++tx_count;
    }
  }
  result.seconds = static_cast<double>(blocks) * config.block_interval;
  result.commitments_per_second = static_cast<double>(result.commitments) / result.seconds;
  result.mean_inclusion_latency = tx_count ? latency_sum / static_cast<double>(tx_count) : 0.0;
  return result;
}

}  // namespace provchain
