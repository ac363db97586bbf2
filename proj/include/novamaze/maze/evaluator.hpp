#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include "novamaze/maze/map.hpp"
#include "novamaze/maze/robot.hpp"
#include "novamaze/neat/genome.hpp"

namespace novamaze::maze {

struct Trajectory {
  std::vector<RobotState> states;  // initial state plus one per step, at most max_steps + 1
  bool solved = false;
  std::optional<int> solve_step;
};

struct Evaluation {
  Trajectory trajectory;
  BehaviorDescriptor behavior;
  int hidden_nodes = 0;
};

// Runs genomes through the maze and counts every evaluation. The map must
// outlive the evaluator. evaluate() may be called concurrently.
class Evaluator {
 public:
  explicit Evaluator(const MazeMap& map, RobotConfig config = {});

  Evaluation evaluate(const neat::Genome& genome);

  std::int64_t count() const { return count_.load(); }
  const MazeMap& map() const { return *map_; }
  const RobotConfig& config() const { return config_; }

 private:
  const MazeMap* map_;
  RobotConfig config_;
  std::atomic<std::int64_t> count_{0};
};

// Dmax - |final - goal| with Dmax the diagonal of the map bounds.
double goal_distance_fitness(BehaviorDescriptor behavior, const MazeMap& map);

// Ordered-waypoint progress f = n + (1 - d) over the map's waypoints with the
// goal appended; a full traversal scores the waypoint count. Throws
// std::invalid_argument on an empty trajectory.
double waypoint_fitness(const Trajectory& trajectory, const MazeMap& map, double reach_radius = 5.0);

}  // namespace novamaze::maze
