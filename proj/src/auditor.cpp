#include "provchain/auditor.hpp"

#include <algorithm>
#include <chrono>
#include <istream>
#include <set>

#include "provchain/contracts.hpp"
#include "provchain/error.hpp"

namespace provchain {

const TxReceipt& ChainReader::receipt(TxId id) {
  if (auto it = cache_.receipts.find(id); it != cache_.receipts.end()) return it->second;
  const TxReceipt& r = ledger_.get_receipt(id, rpc_);
  return cache_.receipts.emplace(id, r).first->second;
}

double ChainReader::block_timestamp(std::uint64_t block_number) {
  if (auto it = cache_.timestamps.find(block_number); it != cache_.timestamps.end()) {
    return it->second;
  }
  const double ts = ledger_.get_block_timestamp(block_number, rpc_);
  cache_.timestamps.emplace(block_number, ts);
  return ts;
}

bool concerns(const LogRecord& log, const ProductId& product) {
  const std::string* id = find_field(log.payload, "product_id");
  return id != nullptr && *id == product.value;
}

AuditRecord decode_log(const LogRecord& log) {
  AuditRecord rec;
  rec.topic = log.topic;
  rec.payload = log.payload;
  rec.block_number = log.block_number;
  rec.tx_index = log.tx_index;
  rec.log_index = log.log_index;
  rec.timestamp = log.timestamp;

  const std::string* sender = find_field(log.payload, "sender");
  if (sender == nullptr) throw Error(ErrorCode::InvalidConfig, "log without sender");
  rec.actor = *sender;
  if (const std::string* step = find_field(log.payload, "step"); step && !parse_step(*step)) {
    throw Error(ErrorCode::InvalidConfig, "log with unknown step " + *step);
  }
  if (const std::string* cid = find_field(log.payload, "cid"); cid && !Cid::parse(*cid)) {
    throw Error(ErrorCode::InvalidConfig, "log with malformed cid");
  }
  return rec;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

bool canonical_less(const AuditRecord& a, const AuditRecord& b) {
  return std::tie(a.block_number, a.tx_index, a.log_index) <
         std::tie(b.block_number, b.tx_index, b.log_index);
}

template <typename T, typename Fn>
void in_waves(const std::vector<T>& items, std::size_t concurrency, LatencyMeter& meter, Fn&& fn) {
  const std::size_t c = std::max<std::size_t>(1, concurrency);
  for (std::size_t i = 0; i < items.size(); i += c) {
    meter.begin_wave();
    for (std::size_t j = i; j < std::min(items.size(), i + c); ++j) fn(items[j]);
    meter.end_wave();
  }
}

}  // namespace

Reconstruction reconstruct(const ProductId& product, const Ledger& ledger, const RpcModel& rpc,
                           CacheState& cache, Rng& rng) {
  const std::vector<TxId> txs =
      ledger.find_txs([&](const LogRecord& log) { return concerns(log, product); });
  if (txs.empty()) throw Error(ErrorCode::UnknownProduct, product.value);

  LatencyMeter meter;
  RpcSession session{rpc, rng, meter};
  ChainReader reader(ledger, cache, &session);
  Reconstruction out;
  out.trail.product = product;
  out.trail.tx_count = txs.size();

  std::vector<const TxReceipt*> receipts;
  receipts.reserve(txs.size());
  in_waves(txs, rpc.concurrency, meter, [&](TxId id) { receipts.push_back(&reader.receipt(id)); });
  out.aql.t_receipts = meter.total_ms();

  auto t0 = Clock::now();
  for (const TxReceipt* r : receipts) {
    for (const auto& log : r->logs) {
      if (concerns(log, product)) out.trail.records.push_back(decode_log(log));
    }
  }
  out.aql.t_decode = elapsed_ms(t0);

  t0 = Clock::now();
  std::sort(out.trail.records.begin(), out.trail.records.end(), canonical_less);
  out.aql.t_sort = elapsed_ms(t0);

  std::set<std::uint64_t> unique_blocks;
  for (const auto& rec : out.trail.records) unique_blocks.insert(rec.block_number);
  const std::vector<std::uint64_t> blocks(unique_blocks.begin(), unique_blocks.end());
  out.trail.block_count = blocks.size();

  const double before = meter.total_ms();
  std::map<std::uint64_t, double> timestamps;
  in_waves(blocks, rpc.concurrency, meter,
           [&](std::uint64_t b) { timestamps[b] = reader.block_timestamp(b); });
  out.aql.t_timestamps = meter.total_ms() - before;
  for (auto& rec : out.trail.records) rec.timestamp = timestamps.at(rec.block_number);

  out.aql.total = out.aql.t_receipts + out.aql.t_decode + out.aql.t_sort + out.aql.t_timestamps;
  return out;
}

AuditTrail reconstruct_from_export(const ProductId& product, std::istream& jsonl) {
  AuditTrail trail;
  trail.product = product;
  std::set<std::pair<std::uint64_t, std::uint32_t>> txs;
  std::set<std::uint64_t> blocks;
  std::string line;
  while (std::getline(jsonl, line)) {
    if (line.empty()) continue;
    LogRecord log = log_from_json_line(line);
    if (!concerns(log, product)) continue;
    txs.insert({log.block_number, log.tx_index});
    blocks.insert(log.block_number);
    trail.records.push_back(decode_log(log));
  }
  if (trail.records.empty()) throw Error(ErrorCode::UnknownProduct, product.value);
  std::sort(trail.records.begin(), trail.records.end(), canonical_less);
  trail.tx_count = txs.size();
  trail.block_count = blocks.size();
  return trail;
}

EvidenceVerification verify_evidence(const AuditTrail& trail, const EvidenceStore& store,
                                     Rng& rng) {
  EvidenceVerification out;
  for (const auto& rec : trail.records) {
    if (rec.topic != LogTopic::EvidenceAnchored) continue;
    EvidenceCheck check;
    auto cid = Cid::parse(*find_field(rec.payload, "cid"));
    check.cid = *cid;
    if (store.contains(check.cid)) {
      FetchOutcome got = store.get(check.cid, rng);
      if (got.available()) {
        check.fetched = true;
        check.matched = verify(check.cid, got.result->bytes);
      }
    }
    out.fetched += check.fetched ? 1 : 0;
    out.matched += check.matched ? 1 : 0;
    out.checks.push_back(std::move(check));
  }
  if (!out.checks.empty()) {
    const double n = static_cast<double>(out.checks.size());
    out.R = static_cast<double>(out.fetched) / n;
    if (out.fetched > 0) {
      out.M = static_cast<double>(out.matched) / static_cast<double>(out.fetched);
      out.V = *out.R * *out.M;
    } else {
      out.V = 0.0;
    }
  }
  return out;
}

std::string_view to_string(CacheRegime regime) {
  return regime == CacheRegime::Uncached ? "UNCACHED" : "CACHED";
}

ProductId build_aql_workload(Network& network, const AqlWorkload& w) {
  if (w.tx_count == 0 || w.event_count < w.tx_count || w.block_count == 0 ||
      w.block_count > w.tx_count) {
    throw Error(ErrorCode::DomainError,
                "workload needs 1 <= blocks <= txs <= events");
  }
  const std::array<std::pair<Address, Role>, 4> actors = {{
      {Address{"0xaql-producer"}, Role::Producer},
      {Address{"0xaql-processor"}, Role::Processor},
      {Address{"0xaql-retailer"}, Role::Retailer},
      {Address{"0xaql-certifier"}, Role::Certifier},
  }};
  for (const auto& [address, role] : actors) {
    if (!network.contracts().actor(address)) {
      network.register_actor(network.admin(), address, role);
    }
  }
  network.ledger().drain();

  const ProductId product{"aql-product-" + std::to_string(network.ledger().blocks().size())};
  const std::size_t anchors = std::min(w.tx_count, kLifecycleStepCount);

  // Extra events beyond one per tx ride on the anchors as evidence.
  std::vector<std::vector<Cid>> evidence(anchors);
  for (std::size_t e = 0; e < w.event_count - w.tx_count; ++e) {
    const std::string seed = product.value + "/evidence/" + std::to_string(e);
    evidence[e % anchors].push_back(compute_cid(
        std::span(reinterpret_cast<const std::uint8_t*>(seed.data()), seed.size())));
  }

  std::size_t current_block = 0;
  for (std::size_t i = 0; i < w.tx_count; ++i) {
    const std::size_t target_block = i * w.block_count / w.tx_count;
    if (target_block != current_block) {
      network.ledger().advance_block();
      current_block = target_block;
    }
    if (i < anchors) {
      const LifecycleStep step = kLifecycle[i];
      const Role role = authorized_role(step);
      const auto& who = std::find_if(actors.begin(), actors.end(),
                                     [&](const auto& a) { return a.second == role; })->first;
      network.anchor_step(who, product, step, std::move(evidence[i]));
    } else {
      network.attest(actors[3].first, product, LifecycleStep::AtRetail, Verdict::Approve);
    }
  }
  network.ledger().advance_block();
  return product;
}

AqlBenchmarkResult run_aql_benchmark(const AqlBenchmarkOptions& options) {
  Network network;
  const ProductId product = build_aql_workload(network, options.workload);
  const Ledger& ledger = network.ledger();

  AqlBenchmarkResult result;
  result.workload = options.workload;
  std::uint64_t stream = 0;
  for (CacheRegime regime : options.regimes) {
    Rng rng = substream(options.seed, stream++);
    CacheState cache;
    if (regime == CacheRegime::Cached) {
      Rng unused(0);
      LatencyMeter scratch;
      RpcSession warm{options.rpc, unused, scratch};
      ChainReader reader(ledger, cache, &warm);
      for (TxId id : ledger.find_txs([&](const LogRecord& l) { return concerns(l, product); })) {
        reader.block_timestamp(reader.receipt(id).block_number);
      }
    }
    AqlStats stats;
    for (std::size_t i = 0; i < options.warmup + options.runs; ++i) {
      if (regime == CacheRegime::Uncached) cache.clear();
      Reconstruction r = reconstruct(product, ledger, options.rpc, cache, rng);
      if (i >= options.warmup) stats.runs.push_back(r.aql);
    }
    auto column = [&](double AqlBreakdown::*field) {
      std::vector<double> v;
      v.reserve(stats.runs.size());
      for (const auto& run : stats.runs) v.push_back(run.*field);
      return summarize(v);
    };
    stats.total = column(&AqlBreakdown::total);
    stats.t_receipts = column(&AqlBreakdown::t_receipts);
    stats.t_decode = column(&AqlBreakdown::t_decode);
    stats.t_sort = column(&AqlBreakdown::t_sort);
    stats.t_timestamps = column(&AqlBreakdown::t_timestamps);
    result.regimes[regime] = std::move(stats);
  }
  return result;
}

}  // namespace provchain
