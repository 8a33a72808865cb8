#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "provchain/calls.hpp"
#include "provchain/random.hpp"
#include "provchain/types.hpp"

namespace provchain {

using Gas = std::uint64_t;

struct ChainConfig {
  double block_interval = 2.0;  // seconds
  Gas per_tx_gas_cap = 64'250'000;
  Gas block_gas_limit = 176'000'000;
  Gas gas_per_commitment = 62'841;
  double base_gas_price = 1.0;  // gwei

  /// Throws Error(InvalidConfig) when a field is non-positive or the per-tx
  /// cap exceeds the block limit.
  void validate() const;
};

enum class RevertReason {
  Unauthorised,
  ActorInactive,
  WrongRole,
  OutOfOrder,
  DuplicateStep,
  GateNotSatisfied,
  NotAdmin,
  AlreadyRegistered,
  UnknownActor,
};

std::string_view to_string(RevertReason reason);

enum class LogTopic {
  RegisteredActor,
  StatusChanged,
  StepAnchored,
  EvidenceAnchored,
  DocumentRegistered,
  Attestation,
};

std::string_view to_string(LogTopic topic);
std::optional<LogTopic> parse_topic(std::string_view text);

/// Ordered key/value payload. Keys are unique; insertion order is kept.
using Payload = std::vector<std::pair<std::string, std::string>>;

const std::string* find_field(const Payload& payload, std::string_view key);

struct LogRecord {
  LogTopic topic = LogTopic::RegisteredActor;
  Payload payload;
  std::uint64_t block_number = 0;
  std::uint32_t tx_index = 0;
  std::uint32_t log_index = 0;
  double timestamp = 0.0;

  bool operator==(const LogRecord&) const = default;
};

/// One JSON object per line with exactly the LogRecord fields.
std::string to_json_line(const LogRecord& log);
LogRecord log_from_json_line(std::string_view line);

struct PendingTx {
  TxId tx_id;
  Address sender;
  Call call;
  Gas gas_estimate = 0;
  double submit_time = 0.0;
};

struct TxReceipt {
  TxId tx_id;
  std::optional<RevertReason> revert;  // nullopt means Success
  std::uint64_t block_number = 0;
  std::uint32_t tx_index = 0;
  Gas gas_used = 0;
  double submit_time = 0.0;
  std::vector<LogRecord> logs;

  bool success() const { return !revert.has_value(); }
};

struct SealedBlock {
  std::uint64_t number = 0;
  double timestamp = 0.0;
  std::vector<TxId> tx_ids;
  Gas gas_used = 0;
};

/// What the contract layer reports back for one executed transaction.
struct ExecutionOutcome {
  std::optional<RevertReason> revert;
  std::vector<std::pair<LogTopic, Payload>> logs;
};

struct BlockContext {
  std::uint64_t block_number = 0;
  std::uint32_t tx_index = 0;
  double timestamp = 0.0;
};

/// State machine executed by the ledger for each included transaction.
/// Implementations must leave state untouched when they return a revert.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual ExecutionOutcome execute(const PendingTx& tx, const BlockContext& ctx) = 0;
};

/// Per-caller accumulator of simulated RPC round trips. Calls charged between
/// begin_wave() and end_wave() run concurrently and cost the wave maximum.
class LatencyMeter {
 public:
  void charge(double ms);
  void begin_wave();
  void end_wave();

  double total_ms() const { return total_ms_; }
  std::size_t calls() const { return calls_; }

 private:
  double total_ms_ = 0.0;
  std::size_t calls_ = 0;
  bool in_wave_ = false;
  double wave_max_ = 0.0;
};

struct RpcModel {
  LatencyDist rtt = LatencyDist::lognormal(50.0, 0.25);
  std::size_t concurrency = 8;
};

/// Binds an RpcModel to a caller's RNG and meter for the duration of a query.
struct RpcSession {
  const RpcModel& model;
  Rng& rng;
  LatencyMeter& meter;

  void charge_call() { meter.charge(model.rtt.sample(rng)); }
};

/// Deterministic simulated Layer-2 chain. Block 0 is an empty genesis block
/// at t = 0. Transactions submitted while block n is the head are included in
/// block n + 1 at the earliest, packed FIFO against the block gas limit.
class Ledger {
 public:
  Ledger(ChainConfig config, Executor& executor);

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  const ChainConfig& config() const { return config_; }

  /// Throws EmptyBatch for n = 0.
  Gas gas_of_batch(std::size_t n) const;

  /// Submission-time gas check applied by submit_transaction.
  bool admits(Gas gas) const { return gas <= config_.per_tx_gas_cap; }

  /// Queues a call FIFO. Throws GasCapExceeded when the call's gas exceeds
  /// the per-transaction cap and EmptyBatch for an empty CID batch.
  TxId submit_transaction(Address sender, Call call);

  /// Seals the next block, executing as many queued transactions as fit.
  const SealedBlock& advance_block();

  /// Seals blocks until the queue is empty. Returns the number sealed.
  std::size_t drain();

  const TxReceipt& get_receipt(TxId id, RpcSession* rpc = nullptr) const;
  double get_block_timestamp(std::uint64_t block_number, RpcSession* rpc = nullptr) const;

  bool is_included(TxId id) const;
  double now() const { return blocks_.back().timestamp; }
  const SealedBlock& head() const { return blocks_.back(); }
  const std::vector<SealedBlock>& blocks() const { return blocks_; }
  const std::deque<PendingTx>& pending() const { return pending_; }

  /// Every log emitted so far, in emission order.
  std::vector<LogRecord> all_logs() const;

  /// Transactions whose logs satisfy `pred`, in inclusion order. Stands in
  /// for an event index; charges no latency.
  template <typename Pred>
  std::vector<TxId> find_txs(Pred&& pred) const {
    std::vector<TxId> out;
    for (const auto& block : blocks_) {
      for (const auto& id : block.tx_ids) {
        const auto& receipt = receipts_.at(id);
        for (const auto& log : receipt.logs) {
          if (pred(log)) {
            out.push_back(id);
            break;
          }
        }
      }
    }
    return out;
  }

  void export_logs(std::ostream& out) const;

 private:
  ChainConfig config_;
  Executor* executor_;
  std::uint64_t next_tx_ = 1;
  std::deque<PendingTx> pending_;
  std::vector<SealedBlock> blocks_;
  std::map<TxId, TxReceipt> receipts_;
};

}  // namespace provchain
