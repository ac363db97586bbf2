#include "novamaze/neat/genome.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace novamaze::neat {

int Genome::hidden_count() const {
  return static_cast<int>(
      std::count_if(nodes.begin(), nodes.end(), [](const NodeGene& n) { return n.kind == NodeKind::kHidden; }));
}

int Genome::enabled_count() const {
  return static_cast<int>(
      std::count_if(connections.begin(), connections.end(), [](const ConnectionGene& c) { return c.enabled; }));
}

bool Genome::has_node(int node_id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), node_id,
                             [](const NodeGene& n, int id) { return n.id < id; });
  return it != nodes.end() && it->id == node_id;
}

bool Genome::has_connection(int from, int to) const {
  return std::any_of(connections.begin(), connections.end(),
                     [&](const ConnectionGene& c) { return c.from == from && c.to == to; });
}

bool same_structure(const Genome& a, const Genome& b) {
  if (a.nodes != b.nodes || a.connections.size() != b.connections.size()) return false;
  for (std::size_t i = 0; i < a.connections.size(); ++i) {
    const auto& ca = a.connections[i];
    const auto& cb = b.connections[i];
    if (ca.innovation != cb.innovation || ca.from != cb.from || ca.to != cb.to) return false;
  }
  return true;
}

void validate(const Genome& genome) {
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("genome " + std::to_string(genome.id) + ": " + what);
  };
  for (std::size_t i = 1; i < genome.nodes.size(); ++i) {
    if (genome.nodes[i - 1].id >= genome.nodes[i].id) fail("node ids not unique and sorted");
  }
  for (int id = 0; id < kFirstHiddenNode; ++id) {
    if (!genome.has_node(id)) fail("missing interface node " + std::to_string(id));
  }
  for (const auto& n : genome.nodes) {
    NodeKind expected = NodeKind::kHidden;
    if (n.id < kSensorCount) expected = NodeKind::kInput;
    else if (n.id == kBiasNode) expected = NodeKind::kBias;
    else if (n.id < kFirstHiddenNode) expected = NodeKind::kOutput;
    if (n.kind != expected) fail("node " + std::to_string(n.id) + " has the wrong kind");
  }
  std::set<std::pair<int, int>> enabled_pairs;
  for (std::size_t i = 0; i < genome.connections.size(); ++i) {
    const auto& c = genome.connections[i];
    if (i > 0 && genome.connections[i - 1].innovation >= c.innovation) fail("innovations not strictly increasing");
    if (!genome.has_node(c.from) || !genome.has_node(c.to)) {
      fail("connection " + std::to_string(c.innovation) + " references a missing node");
    }
    if (c.to < kInputCount) fail("connection " + std::to_string(c.innovation) + " targets an input");
    if (!std::isfinite(c.weight)) fail("non-finite weight");
    if (c.enabled && !enabled_pairs.emplace(c.from, c.to).second) fail("duplicate enabled connection");
  }
}

}  // namespace novamaze::neat
