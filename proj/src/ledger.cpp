#include "provchain/ledger.hpp"

#include <algorithm>
#include <ostream>

#include "json.hpp"
#include "provchain/error.hpp"

namespace provchain {

std::size_t commitment_units(const Call& call) {
  return std::visit(
      [](const auto& c) -> std::size_t {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AnchorStepCall>) {
          return 1 + c.evidence.size();
        } else if constexpr (std::is_same_v<T, SubmitCidBatchCall>) {
          return c.commitments.size();
        } else {
          return 1;
        }
      },
      call);
}

void ChainConfig::validate() const {
  if (!(block_interval > 0.0) || per_tx_gas_cap == 0 || block_gas_limit == 0 ||
      gas_per_commitment == 0 || !(base_gas_price > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "chain parameters must be strictly positive");
  }
  if (per_tx_gas_cap > block_gas_limit) {
    throw Error(ErrorCode::InvalidConfig, "per_tx_gas_cap exceeds block_gas_limit");
  }
}

std::string_view to_string(RevertReason reason) {
  switch (reason) {
    case RevertReason::Unauthorised: return "Unauthorised";
    case RevertReason::ActorInactive: return "ActorInactive";
    case RevertReason::WrongRole: return "WrongRole";
    case RevertReason::OutOfOrder: return "OutOfOrder";
    case RevertReason::DuplicateStep: return "DuplicateStep";
    case RevertReason::GateNotSatisfied: return "GateNotSatisfied";
    case RevertReason::NotAdmin: return "NotAdmin";
    case RevertReason::AlreadyRegistered: return "AlreadyRegistered";
    case RevertReason::UnknownActor: return "UnknownActor";
  }
  return "?";
}

namespace {

constexpr std::array kTopics = {LogTopic::RegisteredActor, LogTopic::StatusChanged,
                                LogTopic::StepAnchored,    LogTopic::EvidenceAnchored,
                                LogTopic::DocumentRegistered, LogTopic::Attestation};

}  // namespace

std::string_view to_string(LogTopic topic) {
  switch (topic) {
    case LogTopic::RegisteredActor: return "RegisteredActor";
    case LogTopic::StatusChanged: return "StatusChanged";
    case LogTopic::StepAnchored: return "StepAnchored";
    case LogTopic::EvidenceAnchored: return "EvidenceAnchored";
    case LogTopic::DocumentRegistered: return "DocumentRegistered";
    case LogTopic::Attestation: return "Attestation";
  }
  return "?";
}

std::optional<LogTopic> parse_topic(std::string_view text) {
  for (auto t : kTopics) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

const std::string* find_field(const Payload& payload, std::string_view key) {
  for (const auto& [k, v] : payload) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string to_json_line(const LogRecord& log) {
  nlohmann::json payload = nlohmann::json::object();
  for (const auto& [k, v] : log.payload) payload[k] = v;
  nlohmann::json j = {
      {"topic", std::string(to_string(log.topic))},
      {"payload", std::move(payload)},
      {"block_number", log.block_number},
      {"tx_index", log.tx_index},
      {"log_index", log.log_index},
      {"timestamp", log.timestamp},
  };
  return j.dump();
}

LogRecord log_from_json_line(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed log line: ") + e.what());
  }
  LogRecord log;
  auto topic = parse_topic(j.at("topic").get<std::string>());
  if (!topic) throw Error(ErrorCode::InvalidConfig, "unknown log topic");
  log.topic = *topic;
  for (const auto& [k, v] : j.at("payload").items()) {
    log.payload.emplace_back(k, v.get<std::string>());
  }
  log.block_number = j.at("block_number").get<std::uint64_t>();
  log.tx_index = j.at("tx_index").get<std::uint32_t>();
  log.log_index = j.at("log_index").get<std::uint32_t>();
  log.timestamp = j.at("timestamp").get<double>();
  return log;
}

void LatencyMeter::charge(double ms) {
  ++calls_;
  if (in_wave_) {
    wave_max_ = std::max(wave_max_, ms);
  } else {
    total_ms_ += ms;
  }
}

void LatencyMeter::begin_wave() {
  in_wave_ = true;
  wave_max_ = 0.0;
}

void LatencyMeter::end_wave() {
  if (!in_wave_) return;
  total_ms_ += wave_max_;
  in_wave_ = false;
  wave_max_ = 0.0;
}

Ledger::Ledger(ChainConfig config, Executor& executor)
    : config_(config), executor_(&executor) {
  config_.validate();
  blocks_.push_back(SealedBlock{0, 0.0, {}, 0});
}

Gas Ledger::gas_of_batch(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::EmptyBatch, "batch has no commitments");
  return static_cast<Gas>(n) * config_.gas_per_commitment;
}

TxId Ledger::submit_transaction(Address sender, Call call) {
  const Gas gas = gas_of_batch(commitment_units(call));
  if (!admits(gas)) {
    throw Error(ErrorCode::GasCapExceeded, "estimate " + std::to_string(gas) + " exceeds cap " +
                                               std::to_string(config_.per_tx_gas_cap));
  }
  TxId id{next_tx_++};
  pending_.push_back(PendingTx{id, std::move(sender), std::move(call), gas, now()});
  return id;
}

const SealedBlock& Ledger::advance_block() {
  SealedBlock block;
  block.number = blocks_.back().number + 1;
  block.timestamp = blocks_.back().timestamp + config_.block_interval;

  std::uint32_t log_index = 0;
  while (!pending_.empty() &&
         block.gas_used + pending_.front().gas_estimate <= config_.block_gas_limit) {
    PendingTx tx = std::move(pending_.front());
    pending_.pop_front();

    BlockContext ctx{block.number, static_cast<std::uint32_t>(block.tx_ids.size()),
                     block.timestamp};
    ExecutionOutcome outcome = executor_->execute(tx, ctx);

    TxReceipt receipt;
    receipt.tx_id = tx.tx_id;
    receipt.revert = outcome.revert;
    receipt.block_number = block.number;
    receipt.tx_index = ctx.tx_index;
    receipt.gas_used = tx.gas_estimate;
    receipt.submit_time = tx.submit_time;
    if (!outcome.revert) {
      receipt.logs.reserve(outcome.logs.size());
      for (auto& [topic, payload] : outcome.logs) {
        receipt.logs.push_back(LogRecord{topic, std::move(payload), block.number, ctx.tx_index,
                                         log_index++, block.timestamp});
      }
    }
    block.gas_used += receipt.gas_used;
    block.tx_ids.push_back(tx.tx_id);
    receipts_.emplace(tx.tx_id, std::move(receipt));
  }
  blocks_.push_back(std::move(block));
  return blocks_.back();
}

std::size_t Ledger::drain() {
  std::size_t sealed = 0;
  while (!pending_.empty()) {
    advance_block();
    ++sealed;
  }
  return sealed;
}

const TxReceipt& Ledger::get_receipt(TxId id, RpcSession* rpc) const {
  if (rpc) rpc->charge_call();
  auto it = receipts_.find(id);
  if (it == receipts_.end()) {
    throw Error(ErrorCode::NotFound, "no receipt for " + to_string(id));
  }
  return it->second;
}

double Ledger::get_block_timestamp(std::uint64_t block_number, RpcSession* rpc) const {
  if (rpc) rpc->charge_call();
  if (block_number >= blocks_.size()) {
    throw Error(ErrorCode::NotFound, "block " + std::to_string(block_number) + " not sealed");
  }
  return blocks_[block_number].timestamp;
}

bool Ledger::is_included(TxId id) const { return receipts_.contains(id); }

std::vector<LogRecord> Ledger::all_logs() const {
  std::vector<LogRecord> out;
  for (const auto& block : blocks_) {
    for (const auto& id : block.tx_ids) {
      const auto& logs = receipts_.at(id).logs;
      out.insert(out.end(), logs.begin(), logs.end());
    }
  }
  return out;
}

void Ledger::export_logs(std::ostream& out) const {
  for (const auto& block : blocks_) {
    for (const auto& id : block.tx_ids) {
      for (const auto& log : receipts_.at(id).logs) out << to_json_line(log) << '\n';
    }
  }
}

}  // namespace provchain
