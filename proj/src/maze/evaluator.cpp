#include "novamaze/maze/evaluator.hpp"

#include <algorithm>
#include <stdexcept>

#include "novamaze/ann/network.hpp"

namespace novamaze::maze {

Evaluator::Evaluator(const MazeMap& map, RobotConfig config) : map_(&map), config_(config) { config_.validate(); }

Evaluation Evaluator::evaluate(const neat::Genome& genome) {
  ++count_;
  ann::Network net(genome);
  net.reset();

  Evaluation result;
  result.hidden_nodes = genome.hidden_count();
  auto& traj = result.trajectory;
  traj.states.reserve(static_cast<std::size_t>(config_.max_steps) + 1);

  RobotState state;
  state.position = map_->start.position;
  state.heading = map_->start.heading;
  traj.states.push_back(state);
  for (int t = 1; t <= config_.max_steps; ++t) {
    const SensorReadings sensors = sense(state, *map_, config_);
    state = step(state, net.activate(sensors), *map_, config_);
    traj.states.push_back(state);
    if (distance(state.position, map_->goal) <= config_.solve_radius) {
      traj.solved = true;
      traj.solve_step = t;
      break;
    }
  }
  result.behavior = state.position;
  return result;
}

double goal_distance_fitness(BehaviorDescriptor behavior, const MazeMap& map) {
  return map.diagonal() - distance(behavior, map.goal);
}

double waypoint_fitness(const Trajectory& trajectory, const MazeMap& map, double reach_radius) {
  const auto& states = trajectory.states;
  if (states.empty()) throw std::invalid_argument("waypoint fitness needs a nonempty trajectory");

  std::vector<Vec2> targets = map.waypoints;
  targets.push_back(map.goal);
  const std::size_t total = targets.size();

  std::size_t reached = 0;
  std::size_t reached_at = 0;  // state index at which the last waypoint was reached
  for (std::size_t i = 0; i < states.size() && reached < total; ++i) {
    while (reached < total && distance(states[i].position, targets[reached]) <= reach_radius) {
      ++reached;
      reached_at = i;
    }
  }
  if (reached == total) return static_cast<double>(total);

  const Vec2 from = reached == 0 ? map.start.position : targets[reached - 1];
  const Vec2 next = targets[reached];
  const double spacing = distance(from, next);
  double closest = spacing;
  for (std::size_t i = reached_at; i < states.size(); ++i) closest = std::min(closest, distance(states[i].position, next));
  const double d = spacing > 0.0 ? std::clamp(closest / spacing, 0.0, 1.0) : 0.0;
  return static_cast<double>(reached) + (1.0 - d);
}

}  // namespace novamaze::maze
