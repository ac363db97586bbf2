#include "novamaze/neat/config.hpp"

#include <stdexcept>
#include <string>

namespace novamaze::neat {

void NeatConfig::validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
  };
  prob(add_node_prob, "add_node_prob");
  prob(add_link_prob, "add_link_prob");
  prob(remove_link_prob, "remove_link_prob");
  prob(disable_inherit_prob, "disable_inherit_prob");
  if (population_size < 2) throw std::invalid_argument("population_size must be at least 2");
  if (weight_mutation_power < 0.0) throw std::invalid_argument("weight_mutation_power must be non-negative");
  if (speciation_threshold <= 0.0) throw std::invalid_argument("speciation_threshold must be positive");
  if (compatibility_modifier < 0.0) throw std::invalid_argument("compatibility_modifier must be non-negative");
  if (initial_weight_range < 0.0 || weight_limit <= 0.0) throw std::invalid_argument("weight ranges must be positive");
  if (stagnation_limit < 1) throw std::invalid_argument("stagnation_limit must be at least 1");
}

}  // namespace novamaze::neat
