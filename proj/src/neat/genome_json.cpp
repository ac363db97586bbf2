#include "novamaze/neat/genome_json.hpp"

#include <stdexcept>
#include <string>

namespace novamaze::neat {
namespace {

const char* kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::kInput: return "input";
    case NodeKind::kBias: return "bias";
    case NodeKind::kHidden: return "hidden";
    case NodeKind::kOutput: return "output";
  }
  return "hidden";
}

NodeKind parse_kind(const std::string& name) {
  if (name == "input") return NodeKind::kInput;
  if (name == "bias") return NodeKind::kBias;
  if (name == "hidden") return NodeKind::kHidden;
  if (name == "output") return NodeKind::kOutput;
  throw std::invalid_argument("unknown node kind '" + name + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const Genome& genome) {
  j = nlohmann::json::object();
  j["version"] = kGenomeFormatVersion;
  j["id"] = genome.id;
  j["species"] = genome.species_id ? nlohmann::json(*genome.species_id) : nlohmann::json(nullptr);
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const auto& n : genome.nodes) nodes.push_back({{"id", n.id}, {"kind", kind_name(n.kind)}});
  auto& conns = j["connections"] = nlohmann::json::array();
  for (const auto& c : genome.connections) {
    conns.push_back(
        {{"innovation", c.innovation}, {"from", c.from}, {"to", c.to}, {"weight", c.weight}, {"enabled", c.enabled}});
  }
}

void from_json(const nlohmann::json& j, Genome& genome) {
  if (j.value("version", 0) != kGenomeFormatVersion) throw std::invalid_argument("unsupported genome version");
  Genome g;
  g.id = j.at("id").get<std::int64_t>();
  if (j.contains("species") && !j["species"].is_null()) g.species_id = j["species"].get<int>();
  for (const auto& n : j.at("nodes")) g.nodes.push_back({n.at("id").get<int>(), parse_kind(n.at("kind"))});
  for (const auto& c : j.at("connections")) {
    g.connections.push_back({c.at("innovation").get<std::int64_t>(), c.at("from").get<int>(), c.at("to").get<int>(),
                             c.at("weight").get<double>(), c.at("enabled").get<bool>()});
  }
  validate(g);
  genome = std::move(g);
}

}  // namespace novamaze::neat
