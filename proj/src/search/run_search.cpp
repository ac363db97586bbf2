#include "novamaze/search/run_search.hpp"

#include <chrono>
#include <stdexcept>

namespace novamaze::search {

RunRecord run_search(const maze::MazeMap& map, const EngineConfig& config, const SearchOptions& options,
                     std::stop_token stop, const ProgressSink& progress) {
  config.validate();
  if (options.budget < config.neat.population_size) {
    throw std::invalid_argument("budget must cover at least one population");
  }
  const auto started = std::chrono::steady_clock::now();

  Rng rng(options.seed);
  neat::InnovationRegistry registry;
  novelty::NoveltyArchive archive(config.novelty);
  maze::Evaluator evaluator(map, config.robot);
  EvolutionContext ctx{map, config, evaluator, registry, archive, rng};

  const auto size = static_cast<std::size_t>(config.neat.population_size);
  std::vector<neat::Genome> initial = options.seeds.empty()
                                          ? random_population(size, config.neat, registry, rng)
                                          : seeded_pool(options.seeds, size, config.neat, registry, rng);

  RunRecord record;
  record.mode = std::string(to_string(options.mode));
  record.map_name = map.name;
  record.seed = options.seed;
  record.budget = options.budget;

  auto collect = [&](const GenerationView& view) {
    for (const auto& ind : view.individuals) record.final_positions.push_back(ind.evaluation.behavior);
    return true;
  };
  const EvolutionOutcome outcome =
      evolve(ctx, std::move(initial), options.mode, {options.budget, false}, collect, progress, stop);

  record.evaluations_used = outcome.evaluations;
  if (outcome.solution) {
    record.solved = true;
    record.solution = outcome.solution->genome;
    record.solution_hidden_nodes = outcome.solution->genome.hidden_count();
  }
  if (options.mode == SearchMode::kNovelty) record.threshold_history = archive.threshold_history();
  record.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return record;
}

bool replays_solved(const RunRecord& record, const maze::MazeMap& map, const EngineConfig& config) {
  if (!record.solution) return false;
  maze::Evaluator evaluator(map, config.robot);
  return evaluator.evaluate(*record.solution).trajectory.solved;
}

}  // namespace novamaze::search
