#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "provchain/random.hpp"
#include "provchain/stats.hpp"
#include "provchain/types.hpp"

namespace provchain {

using Bytes = std::vector<std::uint8_t>;

Cid compute_cid(std::span<const std::uint8_t> bytes);
bool verify(const Cid& cid, std::span<const std::uint8_t> bytes);

/// Well-formed placeholder CID for load generators; not backed by content.
Cid synthetic_cid(std::uint64_t sequence);

struct ProviderModel {
  std::string provider_id;
  double availability = 1.0;  // per retrieval attempt
  LatencyDist upload_latency = LatencyDist::lognormal(700.0, 0.6);
  LatencyDist fetch_latency = LatencyDist::lognormal(350.0, 0.35);
  /// Size-dependent transfer cost added to each latency draw.
  double upload_ms_per_mib = 850.0;
  double fetch_ms_per_mib = 60.0;
};

struct PinPolicy {
  std::size_t k = 1;
};

struct PutResult {
  Cid cid;
  std::vector<std::string> providers;
  std::vector<double> upload_ms;  // one sample per pinning provider
};

struct FetchResult {
  Bytes bytes;
  std::size_t tries = 0;
  double latency_ms = 0.0;
};

struct FetchOutcome {
  std::optional<FetchResult> result;  // nullopt: pinned but every attempt failed
  std::size_t tries = 0;
  double latency_ms = 0.0;

  bool available() const { return result.has_value(); }
};

/// Content-addressed store replicated over simulated providers. Providers are
/// tried in registration order on retrieval and fail independently.
class EvidenceStore {
 public:
  EvidenceStore() = default;
  explicit EvidenceStore(std::vector<ProviderModel> providers);

  void add_provider(ProviderModel provider);
  std::size_t provider_count() const { return providers_.size(); }
  const ProviderModel& provider(std::size_t i) const { return providers_.at(i).model; }

  /// Changes a provider's availability, e.g. to force it down mid-run.
  void set_availability(std::string_view provider_id, double p);

  /// Pins on the first k providers in registration order. Throws
  /// InsufficientProviders when k exceeds the provider count or k = 0.
  PutResult put(std::span<const std::uint8_t> bytes, PinPolicy policy, Rng& rng);

  /// Throws UnknownCid when no provider pins the CID.
  FetchOutcome get(const Cid& cid, Rng& rng) const;

  bool contains(const Cid& cid) const;
  std::size_t object_count() const;

  /// Flips one byte of the stored copy on every pinning provider. Test and
  /// scenario hook for tamper injection; churn never alters bytes.
  void tamper(const Cid& cid, std::size_t offset = 0);

 private:
  struct Provider {
    ProviderModel model;
    std::map<Cid, Bytes> pinned;
  };
  std::vector<Provider> providers_;
};

double analytic_availability(double p, std::size_t k);
double expected_tries(double p, std::size_t k);

/// Deterministic pseudo-random payload of `size` bytes.
Bytes generate_payload(std::size_t size, Rng& rng);

struct LatencyPercentiles {
  double p50 = 0.0;
  double p95 = 0.0;
};

struct SizeBucketReport {
  std::size_t size = 0;
  LatencyPercentiles upload_ms;
  LatencyPercentiles fetch_ms;
};

struct EvidenceReport {
  std::size_t n = 0;
  std::size_t fetched = 0;
  std::size_t matched = 0;
  std::size_t failures = 0;
  std::vector<SizeBucketReport> per_size;
  LatencyPercentiles upload_ms;  // over all objects
  LatencyPercentiles fetch_ms;   // over fetched objects
  std::optional<double> R;
  std::optional<double> M;
  std::optional<double> V;
};

inline constexpr std::size_t kKiB = 1024;
inline constexpr std::size_t kMiB = 1024 * 1024;

struct EvidenceLoopOptions {
  std::vector<std::size_t> sizes = {10 * kKiB, 100 * kKiB, 1 * kMiB, 5 * kMiB};
  std::size_t repeats = 10;
  PinPolicy policy{};
  /// Invoked before each trial with the trial index; may alter the store.
  std::function<void(std::size_t, EvidenceStore&)> before_trial;
};

struct AvailabilitySample {
  double p = 0.0;
  std::size_t k = 0;
  std::size_t trials = 0;
  std::size_t retrieved = 0;
  double rate = 0.0;
  double mean_tries = 0.0;  // over successful fetches
  double sigma = 0.0;       // binomial sigma of the analytic rate at this N
};

/// Fetches one object pinned on k providers of availability p, `trials`
/// times, each trial on its own RNG substream.
AvailabilitySample monte_carlo_availability(double p, std::size_t k, std::size_t trials,
                                            std::uint64_t seed);

/// Upload, fetch and verify loop over sizes x repeats objects. Failures are
/// counted in the report, never thrown.
EvidenceReport run_evidence_loop(EvidenceStore& store, const EvidenceLoopOptions& options,
                                 Rng& rng);

}  // namespace provchain
