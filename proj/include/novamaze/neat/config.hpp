#pragma once

namespace novamaze::neat {

struct NeatConfig {
  int population_size = 250;
  double add_node_prob = 0.05;
  double add_link_prob = 0.10;
  double remove_link_prob = 0.01;
  double weight_mutation_power = 0.8;
  double speciation_threshold = 0.2;
  // Weight term coefficient of the compatibility distance.
  double compatibility_modifier = 0.3;
  bool allow_recurrent = true;

  double initial_weight_range = 1.0;
  double weight_limit = 8.0;
  double disable_inherit_prob = 0.75;
  int stagnation_limit = 15;
  // Genomes with fewer connection genes than this are not size-normalized.
  int normalization_threshold = 20;

  // Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

}  // namespace novamaze::neat
