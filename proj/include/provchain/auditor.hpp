#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "provchain/evidence.hpp"
#include "provchain/ledger.hpp"
#include "provchain/stats.hpp"

namespace provchain {

class Network;

struct CacheState {
  std::map<TxId, TxReceipt> receipts;
  std::map<std::uint64_t, double> timestamps;

  void clear() {
    receipts.clear();
    timestamps.clear();
  }
};

/// Reads chain data through a cache; misses go to the ledger over the
/// simulated RPC session and populate the cache.
class ChainReader {
 public:
  ChainReader(const Ledger& ledger, CacheState& cache, RpcSession* rpc)
      : ledger_(ledger), cache_(cache), rpc_(rpc) {}

  const TxReceipt& receipt(TxId id);
  double block_timestamp(std::uint64_t block_number);

 private:
  const Ledger& ledger_;
  CacheState& cache_;
  RpcSession* rpc_;
};

struct AqlBreakdown {
  double t_receipts = 0.0;
  double t_decode = 0.0;
  double t_sort = 0.0;
  double t_timestamps = 0.0;
  double total = 0.0;  // always the sum of the four components
};

struct AuditRecord {
  LogTopic topic = LogTopic::RegisteredActor;
  Payload payload;
  std::uint64_t block_number = 0;
  std::uint32_t tx_index = 0;
  std::uint32_t log_index = 0;
  double timestamp = 0.0;
  std::string actor;

  bool operator==(const AuditRecord&) const = default;
};

struct EvidenceCheck {
  Cid cid;
  bool fetched = false;
  bool matched = false;
};

struct EvidenceVerification {
  std::vector<EvidenceCheck> checks;
  std::size_t fetched = 0;
  std::size_t matched = 0;
  std::optional<double> R;
  std::optional<double> M;
  std::optional<double> V;
};

struct AuditTrail {
  ProductId product;
  std::vector<AuditRecord> records;
  std::size_t tx_count = 0;
  std::size_t block_count = 0;
};

/// True when a log belongs to `product` (carries its product_id).
bool concerns(const LogRecord& log, const ProductId& product);

/// Decodes one raw log into an audit record. Throws on malformed logs.
AuditRecord decode_log(const LogRecord& log);

struct Reconstruction {
  AuditTrail trail;
  AqlBreakdown aql;
};

/// Fetches receipts in waves of at most rpc.concurrency, decodes and sorts
/// the product's logs, then fetches timestamps for the unique blocks in waves.
/// Receipt and timestamp costs are simulated; decode and sort are measured.
/// Throws Error(UnknownProduct) when no log references the product.
Reconstruction reconstruct(const ProductId& product, const Ledger& ledger, const RpcModel& rpc,
                           CacheState& cache, Rng& rng);

/// Offline reconstruction from an exported JSON-lines log dump.
AuditTrail reconstruct_from_export(const ProductId& product, std::istream& jsonl);

EvidenceVerification verify_evidence(const AuditTrail& trail, const EvidenceStore& store, Rng& rng);

enum class CacheRegime { Uncached, Cached };
std::string_view to_string(CacheRegime regime);

struct AqlWorkload {
  std::size_t tx_count = 10;
  std::size_t event_count = 15;
  std::size_t block_count = 10;
};

/// Builds a single-product history with exactly the requested tx, event and
/// distinct-block counts on `network`. Returns the product id.
ProductId build_aql_workload(Network& network, const AqlWorkload& workload);

struct AqlStats {
  Summary total;
  Summary t_receipts;
  Summary t_decode;
  Summary t_sort;
  Summary t_timestamps;
  std::vector<AqlBreakdown> runs;
};

struct AqlBenchmarkOptions {
  std::size_t runs = 30;
  std::size_t warmup = 3;
  AqlWorkload workload{};
  RpcModel rpc{};
  std::vector<CacheRegime> regimes = {CacheRegime::Uncached, CacheRegime::Cached};
  std::uint64_t seed = 1;
};

struct AqlBenchmarkResult {
  AqlWorkload workload;
  std::map<CacheRegime, AqlStats> regimes;
};

AqlBenchmarkResult run_aql_benchmark(const AqlBenchmarkOptions& options);

}  // namespace provchain
