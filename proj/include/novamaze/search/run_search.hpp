#pragma once

#include <cstdint>
#include <stop_token>
#include <vector>

#include "novamaze/maze/map.hpp"
#include "novamaze/neat/genome.hpp"
#include "novamaze/search/engine.hpp"
#include "novamaze/search/run_record.hpp"

namespace novamaze::search {

struct SearchOptions {
  SearchMode mode = SearchMode::kNovelty;
  std::int64_t budget = 250000;
  std::uint64_t seed = 0;
  // When nonempty, the initial population is a seeded pool built from these.
  std::vector<neat::Genome> seeds;
};

// One automated run from a fresh random (or seeded) population until the
// first solution, budget exhaustion or a stop request.
RunRecord run_search(const maze::MazeMap& map, const EngineConfig& config, const SearchOptions& options,
                     std::stop_token stop = {}, const ProgressSink& progress = {});

// Re-evaluates the record's solution genome; true when it still solves.
bool replays_solved(const RunRecord& record, const maze::MazeMap& map, const EngineConfig& config);

}  // namespace novamaze::search
