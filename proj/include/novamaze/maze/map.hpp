#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "novamaze/geometry.hpp"
#include "novamaze/maze/robot.hpp"

namespace novamaze::maze {

struct Pose {
  Vec2 position;
  double heading = 0.0;
};

struct MazeMap {
  std::string name;
  double width = 0.0;
  double height = 0.0;
  Pose start;
  Vec2 goal;
  std::vector<Vec2> waypoints;  // ordered; the goal is not included
  std::vector<Segment> walls;

  double diagonal() const;
};

inline constexpr int kMapFormatVersion = 1;

// Parses and validates a map document:
// {"version":1,"name":..,"bounds":[w,h],"start":[x,y,heading],"goal":[x,y],
//  "waypoints":[[x,y],..],"walls":[[x1,y1,x2,y2],..]}
// Throws std::invalid_argument naming the offending field or invariant.
MazeMap load_map(const nlohmann::json& document, const RobotConfig& robot = {});
MazeMap load_map_file(const std::filesystem::path& path, const RobotConfig& robot = {});

nlohmann::json to_json(const MazeMap& map);

// Maps named by file stem ("medium" for medium.maze.json) in `dir`.
std::vector<std::string> list_maps(const std::filesystem::path& dir);
MazeMap load_named_map(const std::filesystem::path& dir, const std::string& name, const RobotConfig& robot = {});

}  // namespace novamaze::maze
