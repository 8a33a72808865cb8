#include "provchain/evidence.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>

#include "provchain/analytics.hpp"
#include "provchain/error.hpp"
#include "provchain/stats.hpp"

namespace provchain {

Cid compute_cid(std::span<const std::uint8_t> bytes) {
  std::array<std::uint8_t, 32> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != digest.size()) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  return cid_from_digest(digest);
}

bool verify(const Cid& cid, std::span<const std::uint8_t> bytes) {
  return compute_cid(bytes) == cid;
}

Cid synthetic_cid(std::uint64_t sequence) {
  std::array<std::uint8_t, 32> digest{};
  const std::uint64_t mixed = splitmix64(sequence);
  std::memcpy(digest.data(), &mixed, sizeof mixed);
  return cid_from_digest(digest);
}

EvidenceStore::EvidenceStore(std::vector<ProviderModel> providers) {
  for (auto& p : providers) add_provider(std::move(p));
}

void EvidenceStore::add_provider(ProviderModel provider) {
  if (provider.availability < 0.0 || provider.availability > 1.0) {
    throw Error(ErrorCode::DomainError, "provider availability must be in [0, 1]");
  }
  providers_.push_back(Provider{std::move(provider), {}});
}

void EvidenceStore::set_availability(std::string_view provider_id, double p) {
  if (p < 0.0 || p > 1.0) throw Error(ErrorCode::DomainError, "availability must be in [0, 1]");
  for (auto& prov : providers_) {
    if (prov.model.provider_id == provider_id) {
      prov.model.availability = p;
      return;
    }
  }
  throw Error(ErrorCode::NotFound, "no provider " + std::string(provider_id));
}

namespace {

double transfer_ms(double ms_per_mib, std::size_t size) {
  return ms_per_mib * static_cast<double>(size) / static_cast<double>(kMiB);
}

}  // namespace

PutResult EvidenceStore::put(std::span<const std::uint8_t> bytes, PinPolicy policy, Rng& rng) {
  if (policy.k == 0 || policy.k > providers_.size()) {
    throw Error(ErrorCode::InsufficientProviders,
                "k=" + std::to_string(policy.k) + " with " + std::to_string(providers_.size()) +
                    " providers");
  }
  PutResult result;
  result.cid = compute_cid(bytes);
  for (std::size_t i = 0; i < policy.k; ++i) {
    auto& prov = providers_[i];
    prov.pinned.insert_or_assign(result.cid, Bytes(bytes.begin(), bytes.end()));
    result.providers.push_back(prov.model.provider_id);
    result.upload_ms.push_back(prov.model.upload_latency.sample(rng) +
                               transfer_ms(prov.model.upload_ms_per_mib, bytes.size()));
  }
  return result;
}

FetchOutcome EvidenceStore::get(const Cid& cid, Rng& rng) const {
  FetchOutcome out;
  bool pinned_anywhere = false;
  for (const auto& prov : providers_) {
    auto it = prov.pinned.find(cid);
    if (it == prov.pinned.end()) continue;
    pinned_anywhere = true;
    ++out.tries;
    out.latency_ms += prov.model.fetch_latency.sample(rng) +
                      transfer_ms(prov.model.fetch_ms_per_mib, it->second.size());
    if (rng.bernoulli(prov.model.availability)) {
      out.result = FetchResult{it->second, out.tries, out.latency_ms};
      return out;
    }
  }
  if (!pinned_anywhere) throw Error(ErrorCode::UnknownCid, cid.str());
  return out;
}

bool EvidenceStore::contains(const Cid& cid) const {
  return std::any_of(providers_.begin(), providers_.end(),
                     [&](const Provider& p) { return p.pinned.contains(cid); });
}

std::size_t EvidenceStore::object_count() const {
  std::set<Cid> all;
  for (const auto& p : providers_) {
    for (const auto& [cid, _] : p.pinned) all.insert(cid);
  }
  return all.size();
}

void EvidenceStore::tamper(const Cid& cid, std::size_t offset) {
  bool found = false;
  for (auto& p : providers_) {
    auto it = p.pinned.find(cid);
    if (it == p.pinned.end()) continue;
    found = true;
    auto& bytes = it->second;
    if (bytes.empty()) {
      bytes.push_back(0x01);
    } else {
      bytes[offset % bytes.size()] ^= 0xff;
    }
  }
  if (!found) throw Error(ErrorCode::UnknownCid, cid.str());
}

double analytic_availability(double p, std::size_t k) {
  if (!(p >= 0.0 && p <= 1.0) || k == 0) {
    throw Error(ErrorCode::DomainError, "availability needs p in [0,1] and k >= 1");
  }
  return 1.0 - std::pow(1.0 - p, static_cast<double>(k));
}

double expected_tries(double p, std::size_t k) {
  if (!(p > 0.0 && p <= 1.0) || k == 0) {
    throw Error(ErrorCode::DomainError, "expected tries needs p in (0,1] and k >= 1");
  }
  const double q = 1.0 - p;
  double weighted = 0.0;
  double fail_before = 1.0;  // q^(i-1)
  for (std::size_t i = 1; i <= k; ++i) {
    weighted += static_cast<double>(i) * fail_before * p;
    fail_before *= q;
  }
  return weighted / analytic_availability(p, k);
}

Bytes generate_payload(std::size_t size, Rng& rng) {
  Bytes out(size);
  std::size_t i = 0;
  while (i + 8 <= size) {
    std::uint64_t word = rng.next();
    std::memcpy(out.data() + i, &word, 8);
    i += 8;
  }
  if (i < size) {
    std::uint64_t word = rng.next();
    std::memcpy(out.data() + i, &word, size - i);
  }
  return out;
}

namespace {

LatencyPercentiles percentiles(const std::vector<double>& v) {
  return {percentile_nearest_rank(v, 0.50), percentile_nearest_rank(v, 0.95)};
}

}  // namespace

EvidenceReport run_evidence_loop(EvidenceStore& store, const EvidenceLoopOptions& options,
                                 Rng& rng) {
  EvidenceReport report;
  std::vector<double> all_upload;
  std::vector<double> all_fetch;
  std::size_t trial = 0;

  for (std::size_t size : options.sizes) {
    SizeBucketReport bucket;
    bucket.size = size;
    std::vector<double> upload;
    std::vector<double> fetch;
    for (std::size_t r = 0; r < options.repeats; ++r, ++trial) {
      if (options.before_trial) options.before_trial(trial, store);
      ++report.n;

      Bytes payload = generate_payload(size, rng);
      const Cid expected = compute_cid(payload);
      PutResult put = store.put(payload, options.policy, rng);
      upload.insert(upload.end(), put.upload_ms.begin(), put.upload_ms.end());

      FetchOutcome got = store.get(expected, rng);
      if (!got.available()) {
        ++report.failures;
        continue;
      }
      ++report.fetched;
      fetch.push_back(got.latency_ms);
      if (verify(expected, got.result->bytes)) {
        ++report.matched;
      } else {
        ++report.failures;
      }
    }
    bucket.upload_ms = percentiles(upload);
    bucket.fetch_ms = percentiles(fetch);
    all_upload.insert(all_upload.end(), upload.begin(), upload.end());
    all_fetch.insert(all_fetch.end(), fetch.begin(), fetch.end());
    if (options.repeats > 0) report.per_size.push_back(bucket);
  }

  report.upload_ms = percentiles(all_upload);
  report.fetch_ms = percentiles(all_fetch);
  const auto metrics = core_metrics(
      CoreMetricsInput{0, 0, report.n, report.fetched, report.matched});
  report.R = metrics.retrievability;
  report.M = metrics.match_rate;
  report.V = metrics.verifiability;
  return report;
}

AvailabilitySample monte_carlo_availability(double p, std::size_t k, std::size_t trials,
                                            std::uint64_t seed) {
  if (trials == 0) throw Error(ErrorCode::DomainError, "Monte Carlo needs at least one trial");
  const double analytic = analytic_availability(p, k);  // validates p and k
  EvidenceStore store;
  for (std::size_t i = 0; i < k; ++i) {
    ProviderModel m{"mc-" + std::to_string(i), p};
    m.upload_latency = LatencyDist::constant(0.0);
    m.fetch_latency = LatencyDist::constant(0.0);
    store.add_provider(std::move(m));
  }
  Rng setup(seed);
  const Bytes object = generate_payload(64, setup);
  const Cid cid = store.put(object, PinPolicy{k}, setup).cid;

  AvailabilitySample out{p, k, trials};
  std::size_t tries = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = substream(seed, t + 1);
    FetchOutcome f = store.get(cid, rng);
    if (f.available()) {
      ++out.retrieved;
      tries += f.tries;
    }
  }
  out.rate = static_cast<double>(out.retrieved) / static_cast<double>(trials);
  out.mean_tries = out.retrieved ? static_cast<double>(tries) / static_cast<double>(out.retrieved) : 0.0;
  out.sigma = binomial_sigma(analytic, trials);
  return out;
}

}  // namespace provchain
