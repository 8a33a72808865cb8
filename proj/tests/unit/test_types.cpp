#include <gtest/gtest.h>

#include "provchain/error.hpp"
#include "provchain/types.hpp"

using namespace provchain;

TEST(Cid, ParseAcceptsCanonicalForm) {
  const std::string text = "cid1-" + std::string(64, 'a');
  auto cid = Cid::parse(text);
  ASSERT_TRUE(cid.has_value());
  EXPECT_EQ(cid->str(), text);
}

TEST(Cid, ParseRejectsMalformed) {
  EXPECT_FALSE(Cid::parse("").has_value());
  EXPECT_FALSE(Cid::parse("cid1-" + std::string(63, 'a')).has_value());
  EXPECT_FALSE(Cid::parse("cid1-" + std::string(65, 'a')).has_value());
  EXPECT_FALSE(Cid::parse("cid1-" + std::string(64, 'A')).has_value());
  EXPECT_FALSE(Cid::parse("cid2-" + std::string(64, 'a')).has_value());
  EXPECT_FALSE(Cid::parse("cid1-" + std::string(63, 'a') + "g").has_value());
}

TEST(Cid, FromDigestIsLowercaseHex) {
  std::array<std::uint8_t, 32> digest{};
  digest[0] = 0xAB;
  digest[31] = 0x01;
  Cid cid = cid_from_digest(digest);
  EXPECT_EQ(cid.str().substr(0, 7), "cid1-ab");
  EXPECT_EQ(cid.str().substr(cid.str().size() - 2), "01");
  EXPECT_EQ(Cid::parse(cid.str()), cid);
}

TEST(Enums, StepsRoundTrip) {
  for (std::size_t i = 0; i < kLifecycle.size(); ++i) {
    EXPECT_EQ(ordinal(kLifecycle[i]), i);
    EXPECT_EQ(parse_step(to_string(kLifecycle[i])), kLifecycle[i]);
  }
  EXPECT_FALSE(parse_step("Eaten").has_value());
}

TEST(Enums, RolesStatusesVerdictsRoundTrip) {
  for (Role r : {Role::Producer, Role::Processor, Role::Retailer, Role::Certifier, Role::Regulator,
                 Role::Consumer}) {
    EXPECT_EQ(parse_role(to_string(r)), r);
  }
  for (ActorStatus s : {ActorStatus::Active, ActorStatus::Suspended, ActorStatus::Revoked}) {
    EXPECT_EQ(parse_status(to_string(s)), s);
  }
  EXPECT_EQ(parse_verdict(to_string(Verdict::Reject)), Verdict::Reject);
}

TEST(TxIdText, IsZeroPaddedHex) { EXPECT_EQ(to_string(TxId{255}), "0x000000ff"); }

TEST(ErrorText, CarriesCodeName) {
  Error e(ErrorCode::GasCapExceeded, "too big");
  EXPECT_EQ(e.code(), ErrorCode::GasCapExceeded);
  EXPECT_NE(std::string(e.what()).find("GasCapExceeded"), std::string::npos);
}
