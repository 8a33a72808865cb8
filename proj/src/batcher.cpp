#include "provchain/batcher.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "provchain/contracts.hpp"
#include "provchain/error.hpp"
#include "provchain/evidence.hpp"
#include "provchain/stats.hpp"

namespace provchain {

namespace {

// Arrivals this close to a window deadline count as on time.
constexpr double kDeadlineSlack = 1e-9;

}  // namespace

void BatchPolicy::validate() const {
  if (max_batch == 0 || !(max_wait > 0.0)) {
    throw Error(ErrorCode::DomainError, "batch policy needs B >= 1 and tau > 0");
  }
}

double w_max(double lambda, std::size_t max_batch, double max_wait) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::DomainError, "arrival rate must be positive");
  return std::min(max_wait, static_cast<double>(max_batch) / lambda);
}

AnalyticDelay analytic_delay(double lambda, const BatchPolicy& policy, double s_include) {
  policy.validate();
  if (!(s_include >= 0.0)) throw Error(ErrorCode::DomainError, "s_include must be >= 0");
  AnalyticDelay out;
  out.w_max = w_max(lambda, policy.max_batch, policy.max_wait);
  out.stats.mean_wait = out.w_max / 2.0;
  out.stats.wait_p95 = 0.95 * out.w_max;
  out.stats.mean_delay = out.stats.mean_wait + s_include;
  out.stats.delay_p95 = out.stats.wait_p95 + s_include;
  return out;
}

Batcher::Batcher(BatchPolicy policy) : policy_(policy) { policy_.validate(); }

std::optional<double> Batcher::deadline() const {
  if (open_.empty()) return std::nullopt;
  return open_.front() + policy_.max_wait;
}

std::optional<Flush> Batcher::poll(double now) {
  auto due = deadline();
  if (!due || now <= *due + kDeadlineSlack) return std::nullopt;
  Flush f{*due, std::move(open_), FlushTrigger::Timeout};
  open_.clear();
  return f;
}

std::optional<Flush> Batcher::offer(double t) {
  open_.push_back(t);
  if (open_.size() >= policy_.max_batch) {
    Flush f{t, std::move(open_), FlushTrigger::Size};
    open_.clear();
    return f;
  }
  return std::nullopt;
}

std::optional<Flush> Batcher::drain() {
  auto due = deadline();
  if (!due) return std::nullopt;
  Flush f{*due, std::move(open_), FlushTrigger::Drain};
  open_.clear();
  return f;
}

std::vector<double> generate_arrivals(const ArrivalModel& arrivals, double duration, Rng& rng) {
  if (!(arrivals.rate > 0.0)) throw Error(ErrorCode::DomainError, "arrival rate must be positive");
  std::vector<double> out;
  if (arrivals.kind == ArrivalModel::Kind::Deterministic) {
    const auto count = static_cast<std::size_t>(std::floor(duration * arrivals.rate));
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      out.push_back(static_cast<double>(i) / arrivals.rate);
    }
  } else {
    double t = rng.exponential(arrivals.rate);
    while (t < duration) {
      out.push_back(t);
      t += rng.exponential(arrivals.rate);
    }
  }
  return out;
}

SimulationResult simulate(const ArrivalModel& arrivals, const BatchPolicy& policy, double duration,
                          Network& network, const Address& submitter, Rng& rng) {
  policy.validate();
  const std::vector<double> times = generate_arrivals(arrivals, duration, rng);
  Ledger& ledger = network.ledger();
  const double interval = ledger.config().block_interval;
  const double start = ledger.now();

  struct Submitted {
    TxId tx;
    Flush flush;
  };
  std::vector<Submitted> submitted;
  std::size_t sequence = 0;

  auto submit = [&](Flush flush) {
    // Bring the chain clock up to the flush instant: the head becomes the
    // last block whose timestamp is <= flush.time.
    while (ledger.now() + interval <= flush.time) ledger.advance_block();
    std::vector<CidCommitment> commitments;
    commitments.reserve(flush.arrivals.size());
    for (std::size_t i = 0; i < flush.arrivals.size(); ++i, ++sequence) {
      commitments.push_back(
          CidCommitment{ProductId{"stream"}, LifecycleStep::Produced, synthetic_cid(sequence)});
    }
    TxId tx = network.submit_cid_batch(submitter, std::move(commitments));
    submitted.push_back(Submitted{tx, std::move(flush)});
  };

  Batcher batcher(policy);
  for (double arrival : times) {
    const double t = start + arrival;
    if (auto f = batcher.poll(t)) submit(std::move(*f));
    if (auto f = batcher.offer(t)) submit(std::move(*f));
  }
  if (auto f = batcher.drain()) submit(std::move(*f));
  ledger.drain();

  SimulationResult result;
  std::vector<double> waits;
  waits.reserve(times.size());
  result.delays.reserve(times.size());
  for (const auto& s : submitted) {
    const TxReceipt& receipt = ledger.get_receipt(s.tx);
    const double included = ledger.get_block_timestamp(receipt.block_number);
    const double inclusion_latency = included - receipt.submit_time;
    for (double a : s.flush.arrivals) {
      const double w = std::max(0.0, s.flush.time - a);
      waits.push_back(w);
      result.delays.push_back(w + inclusion_latency);
    }
    ++result.flushes;
    if (s.flush.trigger == FlushTrigger::Size) ++result.size_flushes;
    if (s.flush.trigger != FlushTrigger::Size) ++result.timeout_flushes;
    result.max_batch_size = std::max(result.max_batch_size, s.flush.arrivals.size());
  }
  result.events = waits.size();
  if (!waits.empty()) {
    const double n = static_cast<double>(waits.size());
    result.stats.mean_wait = std::accumulate(waits.begin(), waits.end(), 0.0) / n;
    result.stats.wait_p95 = percentile_nearest_rank(waits, 0.95);
    result.stats.mean_delay =
        std::accumulate(result.delays.begin(), result.delays.end(), 0.0) / n;
    result.stats.delay_p95 = percentile_nearest_rank(result.delays, 0.95);
    result.max_delay = *std::max_element(result.delays.begin(), result.delays.end());
    result.mean_batch_size = n / static_cast<double>(result.flushes);
  }
  return result;
}

SimulationResult simulate(const ArrivalModel& arrivals, const BatchPolicy& policy, double duration,
                          const ChainConfig& chain, std::uint64_t seed) {
  Network network(chain);
  const Address submitter{"0xbatcher"};
  network.confirm(network.register_actor(network.admin(), submitter, Role::Producer));
  Rng rng(seed);
  return simulate(arrivals, policy, duration, network, submitter, rng);
}

}  // namespace provchain
