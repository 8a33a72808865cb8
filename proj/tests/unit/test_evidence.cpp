#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <string>

#include "provchain/error.hpp"
#include "provchain/evidence.hpp"

using namespace provchain;

namespace {

Bytes text(const std::string& s) { return Bytes(s.begin(), s.end()); }

ProviderModel provider(const std::string& id, double p) {
  ProviderModel m{id, p};
  return m;
}

// Enumerates all 2^k up/down patterns of the pinned providers, in fetch
// order, to get P(success) and E[tries | success] without the closed forms.
std::pair<double, double> enumerate_fetch(double p, std::size_t k) {
  double success = 0.0, weighted_tries = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < k; ++i) prob *= (mask >> i & 1u) ? p : 1.0 - p;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask >> i & 1u) {
        success += prob;
        weighted_tries += prob * static_cast<double>(i + 1);
        break;
      }
    }
  }
  return {success, weighted_tries / success};
}

double round_to(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

}  // namespace

TEST(ComputeCid, KnownSha256Vectors) {
  EXPECT_EQ(compute_cid(Bytes{}).str(),
            "cid1-e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(compute_cid(text("abc")).str(),
            "cid1-ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ComputeCid, PureAndBitSensitive) {
  Rng rng(1);
  Bytes b = generate_payload(4096, rng);
  EXPECT_EQ(compute_cid(b), compute_cid(b));
  Bytes flipped = b;
  flipped[100] ^= 0x01;
  EXPECT_NE(compute_cid(b), compute_cid(flipped));
}

TEST(Verify, RoundTripTamperAndWrongCid) {
  Bytes b = text("inspection report");
  Cid cid = compute_cid(b);
  EXPECT_TRUE(verify(cid, b));
  Bytes t = b;
  t[0] ^= 0x80;
  EXPECT_FALSE(verify(cid, t));
  EXPECT_FALSE(verify(compute_cid(text("other")), b));
}

TEST(Put, PinsOnFirstKProviders) {
  EvidenceStore store({provider("a", 1.0), provider("b", 1.0), provider("c", 1.0)});
  Rng rng(2);
  PutResult r = store.put(text("x"), PinPolicy{2}, rng);
  EXPECT_EQ(r.providers, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(r.upload_ms.size(), 2u);
  EXPECT_EQ(std::set<std::string>(r.providers.begin(), r.providers.end()).size(), 2u);

  EvidenceStore single({provider("a", 1.0)});
  EXPECT_EQ(single.put(text("y"), PinPolicy{1}, rng).providers.size(), 1u);
}

TEST(Put, InsufficientProviders) {
  EvidenceStore store({provider("a", 1.0), provider("b", 1.0), provider("c", 1.0)});
  Rng rng(2);
  for (std::size_t k : {std::size_t{0}, std::size_t{4}}) {
    try {
      store.put(text("x"), PinPolicy{k}, rng);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InsufficientProviders);
    }
  }
}

TEST(Get, AlwaysUpProvider) {
  EvidenceStore store({provider("a", 1.0)});
  Rng rng(3);
  Cid cid = store.put(text("x"), PinPolicy{1}, rng).cid;
  FetchOutcome f = store.get(cid, rng);
  ASSERT_TRUE(f.available());
  EXPECT_EQ(f.tries, 1u);
  EXPECT_EQ(f.result->bytes, text("x"));
}

TEST(Get, AllDownIsUnavailable) {
  EvidenceStore store({provider("a", 0.0), provider("b", 0.0)});
  Rng rng(3);
  Cid cid = store.put(text("x"), PinPolicy{2}, rng).cid;
  FetchOutcome f = store.get(cid, rng);
  EXPECT_FALSE(f.available());
  EXPECT_EQ(f.tries, 2u);
}

TEST(Get, UnknownCid) {
  EvidenceStore store({provider("a", 1.0)});
  Rng rng(3);
  try {
    store.get(compute_cid(text("never stored")), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownCid);
  }
}

TEST(Tamper, DetectedOnFetch) {
  EvidenceStore store({provider("a", 1.0)});
  Rng rng(4);
  Bytes b = text("lab certificate");
  Cid cid = store.put(b, PinPolicy{1}, rng).cid;
  store.tamper(cid, 3);
  FetchOutcome f = store.get(cid, rng);
  ASSERT_TRUE(f.available());
  EXPECT_FALSE(verify(cid, f.result->bytes));
}

TEST(Analytic, MatchesEnumerationOracle) {
  for (double p : {0.0, 0.3, 0.95, 0.98, 0.99, 1.0}) {
    for (std::size_t k = 1; k <= 6; ++k) {
      auto [success, tries] = enumerate_fetch(p, k);
      EXPECT_NEAR(analytic_availability(p, k), success, 1e-12);
      if (success > 0.0) {
        EXPECT_NEAR(expected_tries(p, k), tries, 1e-12);
      }
    }
  }
}

TEST(Analytic, PrintedCells) {
  EXPECT_EQ(round_to(analytic_availability(0.95, 2), 4), 0.9975);
  EXPECT_EQ(round_to(analytic_availability(0.99, 3), 6), 0.999999);
  EXPECT_EQ(analytic_availability(0.9, 1), 0.9);
  EXPECT_EQ(round_to(expected_tries(0.95, 2), 2), 1.05);
  EXPECT_NEAR(expected_tries(0.95, 2), 1.0476, 1e-4);
  EXPECT_EQ(round_to(expected_tries(0.98, 3), 2), 1.02);
  EXPECT_EQ(expected_tries(0.7, 1), 1.0);
}

TEST(Analytic, DomainErrors) {
  EXPECT_THROW(analytic_availability(1.5, 1), Error);
  EXPECT_THROW(analytic_availability(0.5, 0), Error);
  EXPECT_THROW(expected_tries(-0.1, 2), Error);
}

TEST(MonteCarlo, TwoPinsAtNinetyFive) {
  AvailabilitySample s = monte_carlo_availability(0.95, 2, 100'000, 42);
  EXPECT_LE(std::abs(s.rate - 0.9975), 3.0 * s.sigma);
  EXPECT_NEAR(s.mean_tries, expected_tries(0.95, 2), 0.01);
}

TEST(EvidenceLoop, PinnedNoChurn) {
  EvidenceStore store({provider("a", 1.0)});
  Rng rng(42);
  EvidenceReport r = run_evidence_loop(store, EvidenceLoopOptions{}, rng);
  EXPECT_EQ(r.n, 40u);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_EQ(r.R, 1.0);
  EXPECT_EQ(r.M, 1.0);
  EXPECT_EQ(r.V, 1.0);
  EXPECT_EQ(r.per_size.size(), 4u);
}

TEST(EvidenceLoop, ProviderDownMidRun) {
  EvidenceStore store({provider("a", 1.0)});
  EvidenceLoopOptions options;
  options.before_trial = [](std::size_t trial, EvidenceStore& s) {
    if (trial == 20) s.set_availability("a", 0.0);
  };
  Rng rng(42);
  EvidenceReport r = run_evidence_loop(store, options, rng);
  EXPECT_EQ(r.fetched, 20u);
  EXPECT_EQ(r.failures, 20u);
  EXPECT_DOUBLE_EQ(*r.R, 0.5);
  EXPECT_EQ(r.M, 1.0);  // over fetched objects only
}

TEST(EvidenceLoop, ZeroRepeats) {
  EvidenceStore store({provider("a", 1.0)});
  EvidenceLoopOptions options;
  options.repeats = 0;
  Rng rng(42);
  EvidenceReport r = run_evidence_loop(store, options, rng);
  EXPECT_EQ(r.n, 0u);
  EXPECT_FALSE(r.R.has_value());
  EXPECT_FALSE(r.M.has_value());
  EXPECT_FALSE(r.V.has_value());
}
