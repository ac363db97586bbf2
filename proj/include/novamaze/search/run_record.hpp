#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "novamaze/geometry.hpp"
#include "novamaze/neat/genome.hpp"

namespace novamaze::search {

// One entry of an interactive session's operation log.
struct SessionEvent {
  double t = 0.0;  // seconds since the session was created (wall clock)
  std::string op;  // select | step | novelty | optimize | restart | publish
  std::vector<std::int64_t> ids;
  std::int64_t evals_before = 0;
  std::int64_t evals_after = 0;

  friend bool operator==(const SessionEvent&, const SessionEvent&) = default;
};

struct RunRecord {
  std::string record_id;
  std::string mode;  // fitness | novelty | waypoint | naiec
  std::string map_name;
  std::uint64_t seed = 0;
  std::int64_t budget = 0;
  std::int64_t evaluations_used = 0;
  bool solved = false;
  std::optional<neat::Genome> solution;
  std::optional<int> solution_hidden_nodes;
  std::vector<BehaviorDescriptor> final_positions;
  std::vector<double> threshold_history;
  double wall_clock_seconds = 0.0;
  std::vector<SessionEvent> events;
  int restarts = 0;
  std::string error;  // set when the run failed instead of completing
};

inline constexpr int kRunRecordVersion = 1;

nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);

// Serialized record without wall-clock fields (run time, event timestamps)
// and without the record id, for reproducibility comparisons.
std::string canonical_content(const RunRecord& record);

// Share of each operation among step/novelty/optimize events, in percent.
std::map<std::string, double> operation_shares(const std::vector<SessionEvent>& events);

// Throws std::logic_error when the record breaks a RunRecord invariant
// (budget ceiling, solution presence). Replay is checked separately.
void check_invariants(const RunRecord& record);

}  // namespace novamaze::search
