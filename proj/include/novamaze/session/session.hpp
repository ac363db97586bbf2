#pragma once

#include <chrono>
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
#include "novamaze/neat/genome.hpp"
#include "novamaze/neat/innovation.hpp"
#include "novamaze/novelty/archive.hpp"
#include "novamaze/rng.hpp"
#include "novamaze/search/engine.hpp"
#include "novamaze/search/record_store.hpp"
#include "novamaze/search/run_record.hpp"

namespace novamaze::session {

struct SessionConfig {
  int n = 12;
  int pool_size = 250;
  // Evaluations a novelty burst may spend before the threshold is decayed.
  std::int64_t novelty_eval_cap = 25000;
  double stall_decay = 0.95;
  std::int64_t budget = 250000;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Status { kAwaitingSelection, kRunningNovelty, kRunningOptimize, kSolved, kBudgetExhausted };

std::string_view to_string(Status status);

struct Candidate {
  neat::Genome genome;
  maze::Trajectory trajectory;
  BehaviorDescriptor behavior;
  double novelty = 0.0;
  double fitness = 0.0;  // goal-distance fitness

  std::int64_t id() const { return genome.id; }
  bool solved() const { return trajectory.solved; }
};

// Reported during Novelty and Optimize, at most every `progress_interval`
// evaluations and once when the operation ends.
struct Progress {
  std::string_view op;
  std::int64_t evaluations = 0;     // session total
  std::int64_t op_evaluations = 0;  // spent by this operation
  int collected = 0;                // novelty only
};
using ProgressCallback = std::function<void(const Progress&)>;

inline constexpr std::int64_t kProgressInterval = 50;

// One interactive run: an on-screen population, the user's selection and a
// shared archive and evaluation ledger. Not thread-safe; callers serialize
// operations.
class Session {
 public:
  // Evaluates a fresh random screen of n candidates.
  Session(const maze::MazeMap& map, const search::EngineConfig& engine, const SessionConfig& config);
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const SessionConfig& config() const { return config_; }
  const maze::MazeMap& map() const { return map_; }
  const search::EngineConfig& engine() const { return engine_; }
  Status status() const { return status_; }
  const std::vector<Candidate>& population() const { return screen_; }
  const std::vector<std::int64_t>& selection() const { return selection_; }
  std::int64_t evaluations_used() const { return evaluator_.count(); }
  std::int64_t budget_remaining() const { return config_.budget - evaluations_used(); }
  const novelty::NoveltyArchive& archive() const { return archive_; }
  const std::vector<search::SessionEvent>& events() const { return events_; }
  int restarts() const { return restarts_; }
  bool terminal() const { return status_ == Status::kSolved || status_ == Status::kBudgetExhausted; }

  // Replaces the selection. Throws std::invalid_argument on an empty set or
  // an id not on screen, leaving the selection unchanged.
  void select(std::span<const std::int64_t> ids);

  // Keeps the selected parents and fills the screen with their offspring.
  void step();

  // Seeded novelty search until n candidates clear the archive threshold.
  // A stop request leaves the screen unchanged.
  void novelty(std::stop_token stop = {}, const ProgressCallback& progress = {});

  // Seeded goal-distance search until solved, out of budget or stopped; the
  // fittest distinct individuals seen replace the screen.
  void optimize(std::stop_token stop = {}, const ProgressCallback& progress = {});

  // Fresh random screen; archive, ledger and event log carry over.
  void restart();

  // The session as a run record (mode "naiec"); logs a publish event.
  search::RunRecord publish();
  // Persists publish() through `store`; returns the stored record.
  search::RunRecord publish(search::RecordStore& store);

 private:
  void require_operable(std::string_view op) const;
  std::vector<neat::Genome> selected_genomes() const;
  Candidate evaluate(const neat::Genome& genome);
  Candidate adopt(const search::Individual& individual);
  void score_new(std::vector<Candidate>& screen, std::size_t first_new);
  void fill_random_screen();
  void log(std::string_view op, std::vector<std::int64_t> ids, std::int64_t before);
  void finish(std::string_view op, std::int64_t before, const ProgressCallback& progress, int collected);
  void settle_status();

  maze::MazeMap map_;
  search::EngineConfig engine_;
  SessionConfig config_;
  Rng rng_;
  neat::InnovationRegistry registry_;
  novelty::NoveltyArchive archive_;
  maze::Evaluator evaluator_;
  std::vector<Candidate> screen_;
  std::vector<std::int64_t> selection_;
  std::vector<search::SessionEvent> events_;
  std::vector<BehaviorDescriptor> final_positions_;
  std::optional<Candidate> solution_;
  Status status_ = Status::kAwaitingSelection;
  int restarts_ = 0;
  std::chrono::steady_clock::time_point created_;
};

enum class SelectorKind { kRandom, kGreedyGoal, kWaypointOracle };

std::string_view to_string(SelectorKind kind);
SelectorKind parse_selector_kind(std::string_view name);

struct SelectorPolicy {
  SelectorKind kind = SelectorKind::kWaypointOracle;
  int count = 2;
};

// Headless stand-in for a human selector. Ties keep screen order.
std::vector<std::int64_t> scripted_select(const SelectorPolicy& policy, const Session& session, Rng& rng);

}  // namespace novamaze::session
