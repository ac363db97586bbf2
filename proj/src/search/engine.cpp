#include "novamaze/search/engine.hpp"

#include <stdexcept>

#include "novamaze/neat/operators.hpp"
#include "novamaze/neat/population.hpp"

namespace novamaze::search {

void EngineConfig::validate() const {
  neat.validate();
  robot.validate();
  novelty.validate();
}

std::string_view to_string(SearchMode mode) {
  switch (mode) {
    case SearchMode::kFitness: return "fitness";
    case SearchMode::kNovelty: return "novelty";
    case SearchMode::kWaypoint: return "waypoint";
  }
  return "fitness";
}

SearchMode parse_search_mode(std::string_view name) {
  if (name == "fitness") return SearchMode::kFitness;
  if (name == "novelty") return SearchMode::kNovelty;
  if (name == "waypoint") return SearchMode::kWaypoint;
  throw std::invalid_argument("unknown search mode '" + std::string(name) + "'");
}

namespace {

void score_generation(EvolutionContext& ctx, std::vector<Individual>& gen, SearchMode mode, bool feed_archive) {
  if (feed_archive) {
    std::vector<BehaviorDescriptor> behaviors;
    behaviors.reserve(gen.size());
    for (const auto& ind : gen) behaviors.push_back(ind.evaluation.behavior);
    const std::vector<double> novelty = novelty::score_population(behaviors, ctx.archive);
    for (std::size_t i = 0; i < gen.size(); ++i) {
      gen[i].novelty = novelty[i];
      gen[i].archived = ctx.archive.maybe_archive(gen[i].evaluation.behavior, novelty[i]);
    }
    if (ctx.archive.adjust_due()) ctx.archive.adjust_threshold();
  }
  for (auto& ind : gen) {
    switch (mode) {
      case SearchMode::kFitness: ind.score = ind.fitness; break;
      case SearchMode::kNovelty: ind.score = ind.novelty; break;
      case SearchMode::kWaypoint:
        ind.score = maze::waypoint_fitness(ind.evaluation.trajectory, ctx.map, ctx.config.robot.solve_radius);
        break;
    }
  }
}

}  // namespace

EvolutionOutcome evolve(EvolutionContext& ctx, std::vector<neat::Genome> initial, SearchMode mode,
                        const EvolutionLimits& limits, const GenerationHook& on_generation,
                        const ProgressSink& progress, std::stop_token stop) {
  const bool feed_archive = limits.feed_archive || mode == SearchMode::kNovelty;
  neat::Population population(std::move(initial), ctx.config.neat);
  EvolutionOutcome outcome;

  for (int generation = 0;; ++generation) {
    const auto& genomes = population.genomes();
    std::vector<Individual> gen;
    gen.reserve(genomes.size());
    bool complete = true;
    for (const auto& genome : genomes) {
      if (stop.stop_requested()) {
        outcome.reason = StopReason::kCancelled;
        complete = false;
        break;
      }
      if (outcome.evaluations >= limits.max_evaluations) {
        outcome.reason = StopReason::kBudget;
        complete = false;
        break;
      }
      Individual ind;
      ind.genome = genome;
      ind.evaluation = ctx.evaluator.evaluate(genome);
      ind.fitness = maze::goal_distance_fitness(ind.evaluation.behavior, ctx.map);
      ++outcome.evaluations;
      if (progress) progress(outcome.evaluations);
      gen.push_back(std::move(ind));
      if (gen.back().solved()) {
        outcome.reason = StopReason::kSolved;
        outcome.solution = gen.back();
        complete = gen.size() == genomes.size();
        break;
      }
    }

    score_generation(ctx, gen, mode, feed_archive);
    if (outcome.solution) outcome.solution = gen.back();
    const GenerationView view{gen, complete, generation, outcome.evaluations};
    const bool keep_going = on_generation ? on_generation(view) : true;
    if (outcome.solution || !complete) return outcome;
    outcome.generations = generation + 1;
    if (!keep_going) {
      outcome.reason = StopReason::kHook;
      return outcome;
    }
    if (outcome.evaluations >= limits.max_evaluations) {
      outcome.reason = StopReason::kBudget;
      return outcome;
    }

    std::vector<double> scores;
    scores.reserve(gen.size());
    for (const auto& ind : gen) scores.push_back(ind.score);
    population.advance(scores, ctx.registry, ctx.rng);
  }
}

std::vector<neat::Genome> seeded_pool(std::span<const neat::Genome> seeds, std::size_t size,
                                      const neat::NeatConfig& config, neat::InnovationRegistry& registry, Rng& rng) {
  if (seeds.empty()) throw std::invalid_argument("seeded pool needs at least one seed genome");
  std::vector<neat::Genome> pool;
  pool.reserve(size);
  for (std::size_t i = 0; i < seeds.size() && pool.size() < size; ++i) pool.push_back(seeds[i]);
  for (std::size_t i = 0; pool.size() < size; ++i) {
    neat::Genome child = neat::mutate(seeds[i % seeds.size()], config, registry, rng);
    child.id = registry.next_genome_id();
    child.species_id.reset();
    pool.push_back(std::move(child));
  }
  return pool;
}

std::vector<neat::Genome> random_population(std::size_t size, const neat::NeatConfig& config,
                                            neat::InnovationRegistry& registry, Rng& rng) {
  std::vector<neat::Genome> pop;
  pop.reserve(size);
  for (std::size_t i = 0; i < size; ++i) pop.push_back(neat::init_genome(config, registry, rng));
  return pop;
}

}  // namespace novamaze::search
