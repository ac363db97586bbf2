#include "novamaze/ann/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace novamaze::ann {

double shifted_sigmoid(double z) { return 1.0 / (1.0 + std::exp(-4.9 * z)) - 0.5; }

Network::Network(const neat::Genome& genome) {
  auto slot_of = [&](int node_id) {
    auto it = std::lower_bound(genome.nodes.begin(), genome.nodes.end(), node_id,
                               [](const neat::NodeGene& n, int id) { return n.id < id; });
    if (it == genome.nodes.end() || it->id != node_id) throw std::invalid_argument("connection to unknown node");
    return static_cast<std::size_t>(it - genome.nodes.begin());
  };

  activation_.assign(genome.nodes.size(), 0.0);
  input_sum_.assign(genome.nodes.size(), 0.0);
  for (std::size_t slot = 0; slot < genome.nodes.size(); ++slot) {
    const auto& node = genome.nodes[slot];
    switch (node.kind) {
      case neat::NodeKind::kInput: sensor_slots_.at(static_cast<std::size_t>(node.id)) = slot; break;
      case neat::NodeKind::kBias: bias_slot_ = slot; break;
      case neat::NodeKind::kOutput:
        output_slots_.at(static_cast<std::size_t>(node.id - neat::kFirstOutputNode)) = slot;
        computed_.push_back(slot);
        break;
      case neat::NodeKind::kHidden:
        ++hidden_count_;
        computed_.push_back(slot);
        break;
    }
  }
  for (const auto& c : genome.connections) {
    if (c.enabled) links_.push_back({slot_of(c.from), slot_of(c.to), c.weight});
  }
}

void Network::reset() { std::fill(activation_.begin(), activation_.end(), 0.0); }

std::array<double, 2> Network::activate(std::span<const double> sensors) {
  if (sensors.size() != neat::kSensorCount) throw std::invalid_argument("expected 10 sensor values");
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    if (!std::isfinite(sensors[i])) throw std::invalid_argument("non-finite sensor value");
    activation_[sensor_slots_[i]] = sensors[i] - 0.5;
  }
  activation_[bias_slot_] = 0.5;

  std::fill(input_sum_.begin(), input_sum_.end(), 0.0);
  for (const auto& link : links_) input_sum_[link.to] += link.weight * activation_[link.from];
  for (std::size_t slot : computed_) activation_[slot] = shifted_sigmoid(input_sum_[slot]);

  return {activation_[output_slots_[0]], activation_[output_slots_[1]]};
}

}  // namespace novamaze::ann
