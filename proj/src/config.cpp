#include "provchain/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "provchain/error.hpp"

namespace provchain {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

json scalar_to_json(const YAML::Node& node) {
  const std::string& text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted in the source
  if (text == "null" || text == "~" || text.empty()) return nullptr;
  if (text == "true" || text == "false") return text == "true";
  try {
    std::size_t used = 0;
    long long i = std::stoll(text, &used);
    if (used == text.size()) return i;
  } catch (const std::exception&) {
  }
  try {
    std::size_t used = 0;
    double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  return text;
}

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      json out = json::object();
      for (const auto& kv : node) out[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return out;
    }
    case YAML::NodeType::Sequence: {
      json out = json::array();
      for (const auto& item : node) out.push_back(yaml_to_json(item));
      return out;
    }
    case YAML::NodeType::Scalar:
      return scalar_to_json(node);
    default:
      return nullptr;
  }
}

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  if (!obj.is_object()) invalid(where + " must be a mapping");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) invalid("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) out = it->get<T>();
}

LatencyDist latency_from_json(const json& j, LatencyDist base, const std::string& where) {
  only_keys(j, {"kind", "median_ms", "sigma"}, where);
  std::string kind = base.kind == LatencyDist::Kind::Constant ? "constant" : "lognormal";
  read(j, "kind", kind);
  read(j, "median_ms", base.median_ms);
  read(j, "sigma", base.sigma);
  if (kind == "constant") {
    base.kind = LatencyDist::Kind::Constant;
    base.sigma = 0.0;
  } else if (kind == "lognormal") {
    base.kind = LatencyDist::Kind::LogNormal;
  } else {
    invalid(where + ".kind must be constant or lognormal");
  }
  if (base.median_ms < 0.0 || base.sigma < 0.0) invalid(where + " must be non-negative");
  return base;
}

json latency_to_json(const LatencyDist& d) {
  return {{"kind", d.kind == LatencyDist::Kind::Constant ? "constant" : "lognormal"},
          {"median_ms", d.median_ms},
          {"sigma", d.sigma}};
}

void apply(const json& root, RunConfig& c) {
  only_keys(root,
            {"seed", "chain", "providers", "pin", "batcher", "s_include", "rpc", "cost", "gas_prices",
             "fairness", "scenario", "output"},
            "config");
  read(root, "seed", c.seed);

  if (auto it = root.find("chain"); it != root.end()) {
    only_keys(*it,
              {"block_interval", "per_tx_gas_cap", "block_gas_limit", "gas_per_commitment",
               "base_gas_price"},
              "chain");
    read(*it, "block_interval", c.chain.block_interval);
    read(*it, "per_tx_gas_cap", c.chain.per_tx_gas_cap);
    read(*it, "block_gas_limit", c.chain.block_gas_limit);
    read(*it, "gas_per_commitment", c.chain.gas_per_commitment);
    read(*it, "base_gas_price", c.chain.base_gas_price);
  }
  if (auto it = root.find("providers"); it != root.end()) {
    if (!it->is_array() || it->empty()) invalid("providers must be a non-empty list");
    c.providers.clear();
    for (const auto& p : *it) {
      only_keys(p, {"id", "availability", "upload_latency", "fetch_latency", "upload_ms_per_mib",
                    "fetch_ms_per_mib"},
                "providers[]");
      ProviderModel m;
      read(p, "id", m.provider_id);
      read(p, "availability", m.availability);
      if (auto u = p.find("upload_latency"); u != p.end()) {
        m.upload_latency = latency_from_json(*u, m.upload_latency, "upload_latency");
      }
      if (auto f = p.find("fetch_latency"); f != p.end()) {
        m.fetch_latency = latency_from_json(*f, m.fetch_latency, "fetch_latency");
      }
      read(p, "upload_ms_per_mib", m.upload_ms_per_mib);
      read(p, "fetch_ms_per_mib", m.fetch_ms_per_mib);
      if (m.provider_id.empty()) invalid("provider id missing");
      if (m.availability < 0.0 || m.availability > 1.0) invalid("availability outside [0,1]");
      c.providers.push_back(std::move(m));
    }
  }
  if (auto it = root.find("pin"); it != root.end()) {
    only_keys(*it, {"k"}, "pin");
    read(*it, "k", c.pin.k);
  }
  if (auto it = root.find("batcher"); it != root.end()) {
    only_keys(*it, {"max_batch", "max_wait"}, "batcher");
    read(*it, "max_batch", c.batcher.max_batch);
    read(*it, "max_wait", c.batcher.max_wait);
  }
  read(root, "s_include", c.s_include);
  if (auto it = root.find("rpc"); it != root.end()) {
    only_keys(*it, {"rtt", "concurrency"}, "rpc");
    if (auto r = it->find("rtt"); r != it->end()) c.rpc.rtt = latency_from_json(*r, c.rpc.rtt, "rpc.rtt");
    read(*it, "concurrency", c.rpc.concurrency);
    if (c.rpc.concurrency == 0) invalid("rpc.concurrency must be >= 1");
  }
  if (auto it = root.find("cost"); it != root.end()) {
    only_keys(*it, {"batch_gas", "gas_price_gwei", "eth_usd"}, "cost");
    read(*it, "batch_gas", c.cost.batch_gas);
    read(*it, "gas_price_gwei", c.cost.gas_price_gwei);
    read(*it, "eth_usd", c.cost.eth_usd);
  }
  read(root, "gas_prices", c.gas_prices);
  if (auto it = root.find("fairness"); it != root.end()) {
    only_keys(*it, {"premium_usd_per_lb", "alpha", "batch_mass_lb"}, "fairness");
    if (auto p = it->find("premium_usd_per_lb"); p != it->end() && !p->is_null()) {
      c.fairness.premium_usd_per_lb = p->get<double>();
    }
    read(*it, "alpha", c.fairness.alpha);
    read(*it, "batch_mass_lb", c.fairness.batch_mass_lb);
  }
  if (auto it = root.find("scenario"); it != root.end()) {
    only_keys(*it,
              {"product", "allocation", "evidence_bytes", "gating", "certify", "skip_step",
               "injection"},
              "scenario");
    ScenarioConfig& s = c.scenario;
    if (auto p = it->find("product"); p != it->end()) s.product = ProductId{p->get<std::string>()};
    if (auto a = it->find("allocation"); a != it->end()) {
      if (!a->is_array() || a->size() != kLifecycleStepCount) {
        invalid("scenario.allocation needs one count per lifecycle step");
      }
      for (std::size_t i = 0; i < kLifecycleStepCount; ++i) s.allocation[i] = (*a)[i].get<std::size_t>();
    }
    read(*it, "evidence_bytes", s.evidence_bytes);
    read(*it, "gating", s.gating);
    read(*it, "certify", s.certify);
    if (auto k = it->find("skip_step"); k != it->end() && !k->is_null()) {
      auto step = parse_step(k->get<std::string>());
      if (!step) invalid("scenario.skip_step is not a lifecycle step");
      s.skip_step = *step;
    }
    if (auto inj = it->find("injection"); inj != it->end() && !inj->is_null()) {
      only_keys(*inj, {"events", "gate", "sampling"}, "scenario.injection");
      InjectionConfig ic;
      read(*inj, "events", ic.events);
      read(*inj, "gate", ic.gate);
      read(*inj, "sampling", ic.sampling);
      s.injection = ic;
    }
  }
  if (auto it = root.find("output"); it != root.end()) {
    only_keys(*it, {"directory", "formats"}, "output");
    if (auto d = it->find("directory"); d != it->end()) c.output.directory = d->get<std::string>();
    if (auto f = it->find("formats"); f != it->end()) {
      c.output.formats.clear();
      for (const auto& name : *f) {
        auto fmt = parse_format(name.get<std::string>());
        if (!fmt) invalid("unknown output format " + name.dump());
        c.output.formats.push_back(*fmt);
      }
    }
  }
}

}  // namespace

RunConfig config_from_json(const json& root) {
  RunConfig config;
  try {
    apply(root, config);
  } catch (const json::exception& e) {
    invalid(e.what());
  }
  config.chain.validate();
  config.batcher.validate();
  if (config.pin.k == 0 || config.pin.k > config.providers.size()) {
    invalid("pin.k must be between 1 and the provider count");
  }
  if (config.s_include < 0.0) invalid("s_include must be non-negative");
  config.scenario.seed = config.seed;
  config.scenario.chain = config.chain;
  config.scenario.rpc = config.rpc;
  config.scenario.providers = config.providers;
  config.scenario.pin = config.pin;
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json root;
  if (path.extension() == ".json") {
    try {
      root = json::parse(buf.str());
    } catch (const json::exception& e) {
      invalid(e.what());
    }
  } else {
    try {
      root = yaml_to_json(YAML::Load(buf.str()));
    } catch (const YAML::Exception& e) {
      invalid(e.what());
    }
  }
  if (root.is_null()) root = json::object();
  return config_from_json(root);
}

json to_json(const RunConfig& c) {
  json providers = json::array();
  for (const auto& p : c.providers) {
    providers.push_back({{"id", p.provider_id},
                         {"availability", p.availability},
                         {"upload_latency", latency_to_json(p.upload_latency)},
                         {"fetch_latency", latency_to_json(p.fetch_latency)},
                         {"upload_ms_per_mib", p.upload_ms_per_mib},
                         {"fetch_ms_per_mib", p.fetch_ms_per_mib}});
  }
  json formats = json::array();
  for (auto f : c.output.formats) formats.push_back(to_string(f));
  const ScenarioConfig& s = c.scenario;
  json scenario{{"product", s.product.value},
                {"allocation", s.allocation},
                {"evidence_bytes", s.evidence_bytes},
                {"gating", s.gating},
                {"certify", s.certify},
                {"skip_step", s.skip_step ? json(to_string(*s.skip_step)) : json(nullptr)},
                {"injection", nullptr}};
  if (s.injection) {
    scenario["injection"] = {{"events", s.injection->events},
                             {"gate", s.injection->gate},
                             {"sampling", s.injection->sampling}};
  }
  return {{"seed", c.seed},
          {"chain",
           {{"block_interval", c.chain.block_interval},
            {"per_tx_gas_cap", c.chain.per_tx_gas_cap},
            {"block_gas_limit", c.chain.block_gas_limit},
            {"gas_per_commitment", c.chain.gas_per_commitment},
            {"base_gas_price", c.chain.base_gas_price}}},
          {"providers", providers},
          {"pin", {{"k", c.pin.k}}},
          {"batcher", {{"max_batch", c.batcher.max_batch}, {"max_wait", c.batcher.max_wait}}},
          {"s_include", c.s_include},
          {"rpc", {{"rtt", latency_to_json(c.rpc.rtt)}, {"concurrency", c.rpc.concurrency}}},
          {"cost",
           {{"batch_gas", c.cost.batch_gas},
            {"gas_price_gwei", c.cost.gas_price_gwei},
            {"eth_usd", c.cost.eth_usd}}},
          {"gas_prices", c.gas_prices},
          {"fairness",
           {{"premium_usd_per_lb", c.fairness.premium_usd_per_lb
                                       ? json(*c.fairness.premium_usd_per_lb)
                                       : json(nullptr)},
            {"alpha", c.fairness.alpha},
            {"batch_mass_lb", c.fairness.batch_mass_lb}}},
          {"scenario", scenario},
          {"output", {{"directory", c.output.directory.string()}, {"formats", formats}}}};
}

std::optional<OutputFormat> parse_format(std::string_view text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "md" || text == "markdown") return OutputFormat::Markdown;
  return std::nullopt;
}

std::string_view to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::Json: return "json";
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Markdown: return "md";
  }
  return "json";
}

}  // namespace provchain
