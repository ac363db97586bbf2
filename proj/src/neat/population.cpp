#include "novamaze/neat/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "novamaze/neat/operators.hpp"

namespace novamaze::neat {
std::vector<int> apportion(std::span<const double> weights, int total) {
  std::vector<int> quota(weights.size(), 0);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (weights.empty() || total <= 0 || sum <= 0.0) return quota;
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = total * weights[i] / sum;
    quota[i] = static_cast<int>(std::floor(exact));
    assigned += quota[i];
    remainders.emplace_back(exact - quota[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  for (std::size_t r = 0; assigned < total; ++r, ++assigned) ++quota[remainders[r % remainders.size()].second];
  return quota;
}

SpeciesPartition speciate(std::span<const Genome> population, const NeatConfig& config,
                          std::span<const Species> previous, int& next_species_id, Rng& rng) {
  SpeciesPartition partition;
  for (const auto& s : previous) partition.species.push_back({s.id, s.next_representative, {}, {}});

  for (std::size_t i = 0; i < population.size(); ++i) {
    bool placed = false;
    for (auto& s : partition.species) {
      if (compatibility_distance(population[i], s.representative, config) < config.speciation_threshold) {
        s.members.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) partition.species.push_back({next_species_id++, population[i], {i}, {}});
  }

  std::erase_if(partition.species, [](const Species& s) { return s.members.empty(); });
  for (auto& s : partition.species) s.next_representative = population[s.members[rng.index(s.members.size())]];
  return partition;
}

std::vector<Genome> reproduce(const SpeciesPartition& partition, std::span<const Genome> population,
                              std::span<const double> scores, const NeatConfig& config, InnovationRegistry& registry,
                              SpeciesLedger& ledger, Rng& rng) {
  if (scores.size() != population.size()) throw std::invalid_argument("one score per genome required");
  if (population.empty() || partition.species.empty()) throw std::invalid_argument("empty population");
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument("scores must be finite");
  }
  // Quotas need non-negative weights; shifting preserves the ordering.
  const double lowest = *std::min_element(scores.begin(), scores.end());
  auto score = [&](std::size_t i) { return lowest < 0.0 ? scores[i] - lowest : scores[i]; };

  std::size_t elite = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (score(i) > score(elite)) elite = i;
  }

  std::vector<double> weights;
  for (const auto& s : partition.species) {
    double best = 0.0;
    double total = 0.0;
    bool holds_elite = false;
    for (std::size_t m : s.members) {
      best = std::max(best, score(m));
      total += score(m);
      holds_elite = holds_elite || m == elite;
    }
    auto [it, fresh] = ledger.try_emplace(s.id, SpeciesHistory{best, 0});
    if (!fresh) {
      if (best > it->second.best_score) it->second = {best, 0};
      else ++it->second.stale_rounds;
    }
    const bool stagnant = it->second.stale_rounds >= config.stagnation_limit && !holds_elite;
    weights.push_back(stagnant ? 0.0 : total / static_cast<double>(s.members.size()));
  }

  const int offspring_total = config.population_size - 1;
  std::vector<int> quota = apportion(weights, offspring_total);
  if (std::accumulate(quota.begin(), quota.end(), 0) != offspring_total) {
    // Degenerate scores (all zero, or only stagnant species scored): uniform split.
    const std::vector<double> uniform(partition.species.size(), 1.0);
    quota = apportion(uniform, offspring_total);
  }

  std::vector<Genome> next;
  next.reserve(static_cast<std::size_t>(config.population_size));
  next.push_back(population[elite]);
  next.back().species_id.reset();

  for (std::size_t s = 0; s < partition.species.size(); ++s) {
    if (quota[s] == 0) continue;
    std::vector<std::size_t> ranked = partition.species[s].members;
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t x, std::size_t y) { return score(x) > score(y); });
    ranked.resize((ranked.size() + 1) / 2);

    for (int k = 0; k < quota[s]; ++k) {
      Genome child;
      if (ranked.size() >= 2) {
        const std::size_t pa = ranked[rng.index(ranked.size())];
        std::size_t pb = ranked[rng.index(ranked.size() - 1)];
        if (pb == pa) pb = ranked.back();
        const FitterParent fitter = score(pb) > score(pa) ? FitterParent::kB : FitterParent::kA;
        child = crossover(population[pa], population[pb], fitter, config, rng);
        child = mutate(child, config, registry, rng);
      } else {
        child = mutate(population[ranked.front()], config, registry, rng);
      }
      child.id = registry.next_genome_id();
      child.species_id.reset();
      next.push_back(std::move(child));
    }
  }
  return next;
}

Population::Population(std::vector<Genome> genomes, const NeatConfig& config)
    : config_(config), genomes_(std::move(genomes)) {
  config_.validate();
  if (genomes_.empty()) throw std::invalid_argument("population must be nonempty");
}

void Population::advance(std::span<const double> scores, InnovationRegistry& registry, Rng& rng) {
  partition_ = speciate(genomes_, config_, partition_.species, next_species_id_, rng);
  for (const auto& s : partition_.species) {
    for (std::size_t m : s.members) genomes_[m].species_id = s.id;
  }
  genomes_ = reproduce(partition_, genomes_, scores, config_, registry, ledger_, rng);
}

}  // namespace novamaze::neat
