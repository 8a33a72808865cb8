#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "provchain/ledger.hpp"
#include "provchain/random.hpp"

namespace provchain {

class Network;

struct BatchPolicy {
  std::size_t max_batch = 512;  // B
  double max_wait = 1.0;        // tau, seconds

  void validate() const;
};

struct ArrivalModel {
  enum class Kind { Deterministic, Poisson };
  double rate = 10.0;  // lambda, events per second
  Kind kind = Kind::Deterministic;
};

/// Maximum batching wait, min(tau, B / lambda).
double w_max(double lambda, std::size_t max_batch, double max_wait);

struct DelayStats {
  double mean_wait = 0.0;   // E[W]
  double wait_p95 = 0.0;    // W_p95
  double mean_delay = 0.0;  // E[D]
  double delay_p95 = 0.0;   // D_p95
};

struct AnalyticDelay {
  double w_max = 0.0;
  DelayStats stats;
};

AnalyticDelay analytic_delay(double lambda, const BatchPolicy& policy, double s_include = 2.0);

enum class FlushTrigger { Size, Timeout, Drain };

struct Flush {
  double time = 0.0;
  std::vector<double> arrivals;
  FlushTrigger trigger = FlushTrigger::Size;
};

/// Time-and-size batcher. Events whose arrival falls on or before the window
/// deadline (first arrival + tau) join the open batch.
class Batcher {
 public:
  explicit Batcher(BatchPolicy policy);

  /// Flushes the open batch if its deadline is at or before `now`.
  std::optional<Flush> poll(double now);

  /// Adds an arrival. Callers must poll(t) first so expired windows close
  /// before the event is placed. Returns a size-triggered flush if B is hit.
  std::optional<Flush> offer(double t);

  /// Flushes whatever is open at its deadline.
  std::optional<Flush> drain();

  std::size_t open_size() const { return open_.size(); }
  std::optional<double> deadline() const;

 private:
  BatchPolicy policy_;
  std::vector<double> open_;
};

struct SimulationResult {
  DelayStats stats;
  std::size_t events = 0;
  std::size_t flushes = 0;
  std::size_t size_flushes = 0;
  std::size_t timeout_flushes = 0;
  double mean_batch_size = 0.0;
  std::size_t max_batch_size = 0;
  double max_delay = 0.0;
  std::vector<double> delays;  // per event, arrival order
};

std::vector<double> generate_arrivals(const ArrivalModel& arrivals, double duration, Rng& rng);

/// Drives arrivals through a Batcher and flushes each batch to the ledger via
/// submit_cid_batch from `submitter`, which must be an active actor.
/// W = flush time - arrival. Chain time is slotted: a batch flushed while
/// block n is the head is included in block n + 1, so its inclusion latency
/// on the chain clock is one block interval, and D = W + that latency.
SimulationResult simulate(const ArrivalModel& arrivals, const BatchPolicy& policy, double duration,
                          Network& network, const Address& submitter, Rng& rng);

/// Convenience overload that builds a fresh network with one registered
/// producer under `chain`.
SimulationResult simulate(const ArrivalModel& arrivals, const BatchPolicy& policy, double duration,
                          const ChainConfig& chain, std::uint64_t seed);

}  // namespace provchain
