#pragma once

#include <array>

#include "novamaze/geometry.hpp"

namespace novamaze::maze {

struct MazeMap;

// Kinematic and sensor constants. Angles in radians, lengths in map units,
// rates per timestep.
struct RobotConfig {
  double turn_scale = 0.01745;
  double velocity_scale = 1.0;
  double max_angular_velocity = 0.0524;
  double max_speed = 3.0;
  double radius = 8.0;
  double rangefinder_range = 100.0;
  double solve_radius = 5.0;
  int max_steps = 400;
  // When false, a move into a wall ends at the contact point and the robot
  // keeps pressing against it until it turns away.
  bool slide = false;

  void validate() const;
};

struct RobotState {
  Vec2 position;
  double heading = 0.0;
  double speed = 0.0;
  double angular_velocity = 0.0;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

inline constexpr int kRangefinderCount = 6;
// Rangefinder directions relative to the heading, in degrees.
inline constexpr std::array<double, kRangefinderCount> kRangefinderAngles = {-90.0, -45.0, 0.0, 45.0, 90.0, 180.0};

using SensorReadings = std::array<double, 10>;

// Slots 0-5: rangefinder distance / range, clamped to 1. Slots 6-9: goal
// pie slices over relative bearings [-45, 45), [45, 135), [135, 225),
// [225, 315) degrees; exactly one reads 1.
SensorReadings sense(const RobotState& state, const MazeMap& map, const RobotConfig& config);

// One kinematic update for network outputs (turn, velocity) in [-0.5, 0.5].
// A move that would bring the body into a wall stops at the contact point.
// With sliding enabled the remaining motion continues along the wall and
// the speed loses its into-wall component.
RobotState step(const RobotState& state, std::array<double, 2> outputs, const MazeMap& map, const RobotConfig& config);

// Distance from p to the nearest wall.
double wall_clearance(Vec2 p, const MazeMap& map);

}  // namespace novamaze::maze
