#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace novamaze::neat {

// Fixed sensor/actuator interface shared by every genome in an experiment:
// ten sensors, one bias, two outputs (turn, velocity).
inline constexpr int kSensorCount = 10;
inline constexpr int kBiasNode = kSensorCount;        // node id 10
inline constexpr int kInputCount = kSensorCount + 1;  // sensors + bias
inline constexpr int kOutputCount = 2;
inline constexpr int kFirstOutputNode = kInputCount;  // ids 11, 12
inline constexpr int kFirstHiddenNode = kInputCount + kOutputCount;

enum class NodeKind { kInput, kBias, kHidden, kOutput };

struct NodeGene {
  int id = 0;
  NodeKind kind = NodeKind::kHidden;

  friend bool operator==(const NodeGene&, const NodeGene&) = default;
};

struct ConnectionGene {
  std::int64_t innovation = 0;
  int from = 0;
  int to = 0;
  double weight = 0.0;
  bool enabled = true;

  friend bool operator==(const ConnectionGene&, const ConnectionGene&) = default;
};

// Nodes are kept sorted by id and connections by innovation number; every
// operator in this module preserves that ordering.
struct Genome {
  std::int64_t id = 0;
  std::vector<NodeGene> nodes;
  std::vector<ConnectionGene> connections;
  std::optional<int> species_id;

  int hidden_count() const;
  int enabled_count() const;
  bool has_node(int node_id) const;
  // Any connection (enabled or not) with this endpoint pair.
  bool has_connection(int from, int to) const;

  friend bool operator==(const Genome&, const Genome&) = default;
};

// Same node ids and the same connection innovations (weights and enabled
// flags ignored).
bool same_structure(const Genome& a, const Genome& b);

// Throws std::invalid_argument when a Genome invariant is violated.
void validate(const Genome& genome);

}  // namespace novamaze::neat
