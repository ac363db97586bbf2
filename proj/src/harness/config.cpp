#include "novamaze/harness/config.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>

namespace novamaze::harness {
namespace {

using Field = std::variant<int*, std::int64_t*, std::uint64_t*, double*, bool*>;
using Section = std::map<std::string, Field>;

// Reflection table shared by reading and writing.
std::map<std::string, Section> sections(HarnessConfig& c) {
  auto& n = c.engine.neat;
  auto& r = c.engine.robot;
  auto& v = c.engine.novelty;
  auto& s = c.session;
  auto& p = c.script;
  return {
      {"neat",
       {{"population_size", &n.population_size},
        {"add_node_prob", &n.add_node_prob},
        {"add_link_prob", &n.add_link_prob},
        {"remove_link_prob", &n.remove_link_prob},
        {"weight_mutation_power", &n.weight_mutation_power},
        {"speciation_threshold", &n.speciation_threshold},
        {"compatibility_modifier", &n.compatibility_modifier},
        {"allow_recurrent", &n.allow_recurrent},
        {"initial_weight_range", &n.initial_weight_range},
        {"weight_limit", &n.weight_limit},
        {"disable_inherit_prob", &n.disable_inherit_prob},
        {"stagnation_limit", &n.stagnation_limit},
        {"normalization_threshold", &n.normalization_threshold}}},
      {"robot",
       {{"turn_scale", &r.turn_scale},
        {"velocity_scale", &r.velocity_scale},
        {"max_angular_velocity", &r.max_angular_velocity},
        {"max_speed", &r.max_speed},
        {"radius", &r.radius},
        {"rangefinder_range", &r.rangefinder_range},
        {"solve_radius", &r.solve_radius},
        {"max_steps", &r.max_steps},
        {"slide", &r.slide}}},
      {"novelty",
       {{"k", &v.k},
        {"initial_threshold", &v.initial_threshold},
        {"adjust_interval", &v.adjust_interval},
        {"raise_above", &v.raise_above},
        {"raise_factor", &v.raise_factor},
        {"lower_factor", &v.lower_factor},
        {"threshold_floor", &v.threshold_floor}}},
      {"session",
       {{"n", &s.n},
        {"pool_size", &s.pool_size},
        {"novelty_eval_cap", &s.novelty_eval_cap},
        {"stall_decay", &s.stall_decay},
        {"budget", &s.budget}}},
      {"script",
       {{"count", &p.policy.count},
        {"optimize_radius", &p.optimize_radius},
        {"optimize_eval_cap", &p.optimize_eval_cap}}},
  };
}

void assign(Field field, const nlohmann::json& value, const std::string& where) {
  const bool ok = std::visit(
      [&](auto* target) {
        using T = std::remove_pointer_t<decltype(target)>;
        if constexpr (std::is_same_v<T, bool>) {
          if (!value.is_boolean()) return false;
        } else if constexpr (std::is_integral_v<T>) {
          if (!value.is_number_integer()) return false;
        } else {
          if (!value.is_number()) return false;
        }
        *target = value.get<T>();
        return true;
      },
      field);
  if (!ok) throw std::invalid_argument("config value " + where + " has the wrong type");
}

}  // namespace

void ScriptConfig::validate() const {
  if (policy.count < 1) throw std::invalid_argument("script selection count must be positive");
  if (optimize_radius < 0.0) throw std::invalid_argument("script optimize radius must be non-negative");
  if (optimize_eval_cap < 1) throw std::invalid_argument("script optimize eval cap must be positive");
}

void HarnessConfig::validate() const {
  engine.validate();
  session.validate();
  script.validate();
}

HarnessConfig config_from_json(const nlohmann::json& document) {
  if (!document.is_object()) throw std::invalid_argument("config document must be a JSON object");
  HarnessConfig config;
  auto table = sections(config);
  for (const auto& [name, body] : document.items()) {
    const auto section = table.find(name);
    if (section == table.end()) throw std::invalid_argument("unknown config section '" + name + "'");
    if (!body.is_object()) throw std::invalid_argument("config section '" + name + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      if (name == "script" && key == "policy") {
        if (!value.is_string()) throw std::invalid_argument("config value script.policy must be a string");
        config.script.policy.kind = session::parse_selector_kind(value.get<std::string>());
        continue;
      }
      const auto field = section->second.find(key);
      if (field == section->second.end()) throw std::invalid_argument("unknown config key '" + name + "." + key + "'");
      assign(field->second, value, name + "." + key);
    }
  }
  config.validate();
  return config;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path.string());
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return config_from_json(document);
}

HarnessConfig config_from_env() {
  const char* path = std::getenv(kConfigEnvVar);
  if (path == nullptr || *path == '\0') return {};
  return load_config(path);
}

nlohmann::json to_json(const HarnessConfig& config) {
  HarnessConfig copy = config;
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [name, fields] : sections(copy)) {
    for (const auto& [key, field] : fields) {
      std::visit([&](auto* target) { out[name][key] = *target; }, field);
    }
  }
  out["script"]["policy"] = std::string(session::to_string(config.script.policy.kind));
  return out;
}

}  // namespace novamaze::harness
