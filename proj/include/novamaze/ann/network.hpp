#pragma once

#include <array>
#include <span>
#include <vector>

#include "novamaze/neat/genome.hpp"

namespace novamaze::ann {

// Steep sigmoid shifted into [-0.5, 0.5]: 1 / (1 + exp(-4.9 z)) - 0.5.
double shifted_sigmoid(double z);

// Executable phenotype of a Genome. Every node keeps one activation value;
// each activate() call is a single synchronous pass in which all non-input
// nodes read the previous activations of their sources, so a recurrent link
// (or any path through a hidden node) carries a one-step delay.
//
// Holds per-episode state: use one instance per evaluator.
class Network {
 public:
  explicit Network(const neat::Genome& genome);

  // Zero all activations.
  void reset();

  // `sensors` holds ten readings in [0, 1]. Returns (turn, velocity), each
  // in [-0.5, 0.5]. Throws std::invalid_argument on a wrong-sized or
  // non-finite input.
  std::array<double, 2> activate(std::span<const double> sensors);

  std::size_t node_count() const { return activation_.size(); }
  std::size_t link_count() const { return links_.size(); }
  std::size_t hidden_count() const { return hidden_count_; }
  std::span<const double> activations() const { return activation_; }

 private:
  struct Link {
    std::size_t from;
    std::size_t to;
    double weight;
  };

  std::vector<double> activation_;
  std::vector<double> input_sum_;
  std::vector<Link> links_;
  std::vector<std::size_t> computed_;  // hidden and output slots
  std::array<std::size_t, neat::kSensorCount> sensor_slots_{};
  std::size_t bias_slot_ = 0;
  std::array<std::size_t, neat::kOutputCount> output_slots_{};
  std::size_t hidden_count_ = 0;
};

}  // namespace novamaze::ann
