#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace provchain {

/// Strongly typed string identifier. The tag keeps addresses, product ids
/// and document ids from being mixed up at call sites.
template <typename Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}

  auto operator<=>(const Id&) const = default;
};

using Address = Id<struct AddressTag>;
using ProductId = Id<struct ProductTag>;
using DocId = Id<struct DocTag>;

struct TxId {
  std::uint64_t value = 0;
  auto operator<=>(const TxId&) const = default;
};

std::string to_string(TxId id);

/// Content identifier: "cid1-" followed by 64 lowercase hex digits of the
/// SHA-256 digest of the object bytes.
class Cid {
 public:
  static constexpr std::string_view kPrefix = "cid1-";

  Cid() = default;

  /// Validates the canonical form; returns nullopt for anything else.
  static std::optional<Cid> parse(std::string_view text);

  const std::string& str() const noexcept { return text_; }
  bool empty() const noexcept { return text_.empty(); }

  auto operator<=>(const Cid&) const = default;

 private:
  explicit Cid(std::string text) : text_(std::move(text)) {}
  friend Cid cid_from_digest(const std::array<std::uint8_t, 32>& digest);

  std::string text_;
};

Cid cid_from_digest(const std::array<std::uint8_t, 32>& digest);

enum class Role { Producer, Processor, Retailer, Certifier, Regulator, Consumer };
enum class ActorStatus { Active, Suspended, Revoked };
enum class Verdict { Approve, Reject };

enum class LifecycleStep : std::uint8_t {
  Produced = 0,
  Processed = 1,
  Shipped = 2,
  Received = 3,
  AtRetail = 4,
  Sold = 5,
};

inline constexpr std::size_t kLifecycleStepCount = 6;
inline constexpr std::array<LifecycleStep, kLifecycleStepCount> kLifecycle = {
    LifecycleStep::Produced, LifecycleStep::Processed, LifecycleStep::Shipped,
    LifecycleStep::Received, LifecycleStep::AtRetail,  LifecycleStep::Sold,
};

constexpr std::size_t ordinal(LifecycleStep step) { return static_cast<std::size_t>(step); }

std::string_view to_string(Role role);
std::string_view to_string(ActorStatus status);
std::string_view to_string(Verdict verdict);
std::string_view to_string(LifecycleStep step);

std::optional<Role> parse_role(std::string_view text);
std::optional<ActorStatus> parse_status(std::string_view text);
std::optional<Verdict> parse_verdict(std::string_view text);
std::optional<LifecycleStep> parse_step(std::string_view text);

}  // namespace provchain
