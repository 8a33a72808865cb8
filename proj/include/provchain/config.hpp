#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "provchain/analytics.hpp"
#include "provchain/batcher.hpp"
#include "provchain/evidence.hpp"
#include "provchain/ledger.hpp"
#include "provchain/scenario.hpp"

namespace provchain {

enum class OutputFormat { Json, Csv, Markdown };

struct OutputConfig {
  std::filesystem::path directory = "out";
  std::vector<OutputFormat> formats = {OutputFormat::Json};
};

struct FairnessConfig {
  std::optional<double> premium_usd_per_lb;  // required for stress fairness
  double alpha = 0.01;
  double batch_mass_lb = 1'000.0;
};

struct RunConfig {
  std::uint64_t seed = 42;
  ChainConfig chain{};
  std::vector<ProviderModel> providers = {ProviderModel{"provider-a", 1.0}};
  PinPolicy pin{};
  BatchPolicy batcher{};
  double s_include = 2.0;
  RpcModel rpc{};
  CostParams cost{};
  std::vector<double> gas_prices = kDefaultGasPrices;
  FairnessConfig fairness{};
  ScenarioConfig scenario{};
  OutputConfig output{};
};

/// Loads YAML or JSON (by extension; YAML parsing also accepts JSON).
/// Missing keys keep defaults. Throws Error(InvalidConfig).
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& json);

nlohmann::json to_json(const RunConfig& config);

std::optional<OutputFormat> parse_format(std::string_view text);
std::string_view to_string(OutputFormat format);

}  // namespace provchain
