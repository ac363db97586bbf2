#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stop_token>
#include <string>
#include <vector>

#include "novamaze/harness/config.hpp"
#include "novamaze/maze/map.hpp"
#include "novamaze/search/run_record.hpp"
#include "novamaze/search/statistics.hpp"

namespace novamaze::harness {

// One NA-IEC session driven by the script in `config.script`, published as
// a record. The session seed is `seed`.
search::RunRecord run_scripted_session(const maze::MazeMap& map, const HarnessConfig& config, std::uint64_t seed,
                                       std::stop_token stop = {});

// Accepts the search modes plus "naiec-scripted".
void validate_mode(const std::string& mode);

// Runs a single seeded run of `mode` on `map`, never throwing: failures come
// back as records with `error` set.
search::RunRecord run_one(const std::string& mode, const maze::MazeMap& map, const HarnessConfig& config,
                          std::int64_t budget, std::uint64_t seed, std::stop_token stop = {});

struct PlanEntry {
  std::string mode;
  std::string map;
  int runs = 1;
  std::int64_t budget = 250000;
  std::uint64_t base_seed = 0;  // run i uses base_seed + i
};

struct ExperimentPlan {
  std::vector<PlanEntry> entries;
  std::filesystem::path maps_dir;
  std::filesystem::path out_dir;
  int threads = 1;

  void validate() const;
};

struct EntryResult {
  PlanEntry entry;
  search::AggregateStats stats;
  std::vector<search::RunRecord> records;  // in seed order
};

using RunCallback = std::function<void(const PlanEntry&, const search::RunRecord&)>;

// Executes every run, writing into out_dir:
//   records/<mode>-<map>-<seed>.json   one record per run
//   scatter/<mode>-<map>-<seed>.csv    final positions (x,y) of every evaluation
//   summary.csv                        aggregate table over the plan
EntryResult run_entry(const PlanEntry& entry, const ExperimentPlan& plan, const HarnessConfig& config,
                      const RunCallback& on_run = {}, std::stop_token stop = {});
std::vector<EntryResult> run_experiment(const ExperimentPlan& plan, const HarnessConfig& config,
                                        const RunCallback& on_run = {}, std::stop_token stop = {});

struct SummaryRow {
  std::string mode;
  std::string map;
  search::AggregateStats stats;
};

inline constexpr const char* kSummaryHeader =
    "mode,map,runs,successes,mean_evals,sd_evals,mean_hidden,sd_hidden,mean_seconds";

// CSV with kSummaryHeader; absent statistics are empty cells.
std::string summary_csv(const std::vector<SummaryRow>& rows);

// Groups the records under `dir` (or `dir`/records) by (mode, map).
std::vector<SummaryRow> summarize_directory(const std::filesystem::path& dir);

// Human-readable table plus Welch's t-test on successful evaluation counts
// between every pair of modes on the same map.
std::string stats_report(const std::filesystem::path& dir);

}  // namespace novamaze::harness
