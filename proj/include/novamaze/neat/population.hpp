#pragma once

#include <map>
#include <span>
#include <vector>

#include "novamaze/neat/config.hpp"
#include "novamaze/neat/genome.hpp"
#include "novamaze/neat/innovation.hpp"
#include "novamaze/rng.hpp"

namespace novamaze::neat {

struct Species {
  int id = 0;
  Genome representative;           // the genome members were compared against
  std::vector<std::size_t> members;  // indices into the speciated population
  Genome next_representative;      // random member, used by the next round
};

struct SpeciesPartition {
  std::vector<Species> species;
};

// Assigns each genome to the first species whose representative lies within
// the speciation threshold, opening a new species otherwise. Species without
// members are dropped. `next_species_id` supplies ids for new species.
SpeciesPartition speciate(std::span<const Genome> population, const NeatConfig& config,
                          std::span<const Species> previous, int& next_species_id, Rng& rng);

// Per-species improvement history used to retire stagnant species.
struct SpeciesHistory {
  double best_score = 0.0;
  int stale_rounds = 0;
};
using SpeciesLedger = std::map<int, SpeciesHistory>;

// Largest-remainder apportionment of `total` slots by non-negative weights.
// All zeros when the weights sum to zero.
std::vector<int> apportion(std::span<const double> weights, int total);

// Builds the next generation of exactly config.population_size genomes: the
// best genome overall copied unchanged, the rest split across species in
// proportion to their average score.
std::vector<Genome> reproduce(const SpeciesPartition& partition, std::span<const Genome> population,
                              std::span<const double> scores, const NeatConfig& config, InnovationRegistry& registry,
                              SpeciesLedger& ledger, Rng& rng);

// Generational driver that carries species representatives and the
// stagnation ledger from one round to the next.
class Population {
 public:
  Population(std::vector<Genome> genomes, const NeatConfig& config);

  const std::vector<Genome>& genomes() const { return genomes_; }
  const SpeciesPartition& partition() const { return partition_; }

  // Replace the current generation with offspring selected by `scores`
  // (one per genome, same order).
  void advance(std::span<const double> scores, InnovationRegistry& registry, Rng& rng);

 private:
  NeatConfig config_;
  std::vector<Genome> genomes_;
  SpeciesPartition partition_;
  SpeciesLedger ledger_;
  int next_species_id_ = 1;
};

}  // namespace novamaze::neat
