#pragma once

#include "novamaze/neat/config.hpp"
#include "novamaze/neat/genome.hpp"
#include "novamaze/neat/innovation.hpp"
#include "novamaze/rng.hpp"

namespace novamaze::neat {

// Fully connected input->output genome (11 x 2 = 22 links, no hidden nodes)
// with weights uniform in [-initial_weight_range, initial_weight_range].
Genome init_genome(const NeatConfig& config, InnovationRegistry& registry, Rng& rng);

// Which structural mutations fired during one mutate() call.
struct MutationEvents {
  bool added_node = false;
  bool added_link = false;
  bool removed_link = false;
};

// Returns a mutated copy. Structural mutations with no legal site are
// skipped. The genome id is left unchanged; callers assign offspring ids.
Genome mutate(const Genome& genome, const NeatConfig& config, InnovationRegistry& registry, Rng& rng,
              MutationEvents* events = nullptr);

enum class FitterParent { kA, kB };

Genome crossover(const Genome& a, const Genome& b, FitterParent fitter, const NeatConfig& config, Rng& rng);

double compatibility_distance(const Genome& a, const Genome& b, const NeatConfig& config);

}  // namespace novamaze::neat
