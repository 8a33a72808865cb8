#include "provchain/types.hpp"

#include <cstdio>

#include "provchain/error.hpp"

namespace provchain {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::GasCapExceeded: return "GasCapExceeded";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::InsufficientProviders: return "InsufficientProviders";
    case ErrorCode::UnknownCid: return "UnknownCid";
    case ErrorCode::UnknownProduct: return "UnknownProduct";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NegativeDelay: return "NegativeDelay";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SuiteFailure: return "SuiteFailure";
  }
  return "Unknown";
}

std::string to_string(TxId id) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%08llx", static_cast<unsigned long long>(id.value));
  return buf;
}

std::optional<Cid> Cid::parse(std::string_view text) {
  if (text.size() != kPrefix.size() + 64 || text.substr(0, kPrefix.size()) != kPrefix) {
    return std::nullopt;
  }
  for (char c : text.substr(kPrefix.size())) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return std::nullopt;
  }
  return Cid(std::string(text));
}

Cid cid_from_digest(const std::array<std::uint8_t, 32>& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string text(Cid::kPrefix);
  text.reserve(Cid::kPrefix.size() + 64);
  for (auto b : digest) {
    text.push_back(kHex[b >> 4]);
    text.push_back(kHex[b & 0x0f]);
  }
  return Cid(std::move(text));
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Producer: return "Producer";
    case Role::Processor: return "Processor";
    case Role::Retailer: return "Retailer";
    case Role::Certifier: return "Certifier";
    case Role::Regulator: return "Regulator";
    case Role::Consumer: return "Consumer";
  }
  return "?";
}

std::string_view to_string(ActorStatus status) {
  switch (status) {
    case ActorStatus::Active: return "Active";
    case ActorStatus::Suspended: return "Suspended";
    case ActorStatus::Revoked: return "Revoked";
  }
  return "?";
}

std::string_view to_string(Verdict verdict) {
  return verdict == Verdict::Approve ? "Approve" : "Reject";
}

std::string_view to_string(LifecycleStep step) {
  switch (step) {
    case LifecycleStep::Produced: return "Produced";
    case LifecycleStep::Processed: return "Processed";
    case LifecycleStep::Shipped: return "Shipped";
    case LifecycleStep::Received: return "Received";
    case LifecycleStep::AtRetail: return "AtRetail";
    case LifecycleStep::Sold: return "Sold";
  }
  return "?";
}

namespace {

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view text, const std::array<E, N>& values) {
  for (E v : values) {
    if (to_string(v) == text) return v;
  }
  return std::nullopt;
}

}  // namespace

std::optional<Role> parse_role(std::string_view text) {
  return parse_enum(text, std::array{Role::Producer, Role::Processor, Role::Retailer,
                                     Role::Certifier, Role::Regulator, Role::Consumer});
}

std::optional<ActorStatus> parse_status(std::string_view text) {
  return parse_enum(text,
                    std::array{ActorStatus::Active, ActorStatus::Suspended, ActorStatus::Revoked});
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  return parse_enum(text, std::array{Verdict::Approve, Verdict::Reject});
}

std::optional<LifecycleStep> parse_step(std::string_view text) {
  return parse_enum(text, kLifecycle);
}

}  // namespace provchain
