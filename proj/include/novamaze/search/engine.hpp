#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "novamaze/maze/evaluator.hpp"
#include "novamaze/maze/map.hpp"
#include "novamaze/neat/config.hpp"
#include "novamaze/neat/genome.hpp"
#include "novamaze/neat/innovation.hpp"
#include "novamaze/novelty/archive.hpp"
#include "novamaze/rng.hpp"

namespace novamaze::search {

// Every tunable constant of the engine, grouped by module.
struct EngineConfig {
  neat::NeatConfig neat;
  maze::RobotConfig robot;
  novelty::NoveltyConfig novelty;

  void validate() const;
};

enum class SearchMode { kFitness, kNovelty, kWaypoint };

std::string_view to_string(SearchMode mode);
// Accepts "fitness", "novelty", "waypoint"; throws std::invalid_argument otherwise.
SearchMode parse_search_mode(std::string_view name);

struct Individual {
  neat::Genome genome;
  maze::Evaluation evaluation;
  double fitness = 0.0;  // goal-distance fitness, always filled in
  double novelty = 0.0;  // sparseness; only when the archive is in use
  double score = 0.0;    // what selection sees under the active mode
  bool archived = false;

  bool solved() const { return evaluation.trajectory.solved; }
};

// Shared state one search (or one interactive session) operates on.
struct EvolutionContext {
  const maze::MazeMap& map;
  const EngineConfig& config;
  maze::Evaluator& evaluator;
  neat::InnovationRegistry& registry;
  novelty::NoveltyArchive& archive;
  Rng& rng;
};

struct EvolutionLimits {
  std::int64_t max_evaluations = 0;
  // Score every individual for novelty and offer it to the archive, even
  // when selection uses another objective.
  bool feed_archive = false;
};

// One scored generation. `complete` is false when the loop stopped before
// evaluating the whole population.
struct GenerationView {
  std::span<const Individual> individuals;
  bool complete = true;
  int generation = 0;
  std::int64_t evaluations = 0;  // spent so far in this evolve() call
};

// Return false to end the search after this generation.
using GenerationHook = std::function<bool(const GenerationView&)>;
// Receives the running evaluation count after every evaluation.
using ProgressSink = std::function<void(std::int64_t evaluations)>;

enum class StopReason { kSolved, kBudget, kCancelled, kHook };

struct EvolutionOutcome {
  StopReason reason = StopReason::kBudget;
  std::int64_t evaluations = 0;
  int generations = 0;  // completed generations
  std::optional<Individual> solution;
};

// Generational NEAT: evaluate, score by `mode`, speciate, reproduce. Stops
// at the first solving individual, at the evaluation limit, on a stop
// request (checked between evaluations) or when the hook declines.
EvolutionOutcome evolve(EvolutionContext& ctx, std::vector<neat::Genome> initial, SearchMode mode,
                        const EvolutionLimits& limits, const GenerationHook& on_generation = {},
                        const ProgressSink& progress = {}, std::stop_token stop = {});

// `size` genomes built from `seeds`: the seeds verbatim, then mutated copies
// cycling through the seeds, each with a fresh id.
std::vector<neat::Genome> seeded_pool(std::span<const neat::Genome> seeds, std::size_t size,
                                      const neat::NeatConfig& config, neat::InnovationRegistry& registry, Rng& rng);

std::vector<neat::Genome> random_population(std::size_t size, const neat::NeatConfig& config,
                                            neat::InnovationRegistry& registry, Rng& rng);

}  // namespace novamaze::search
