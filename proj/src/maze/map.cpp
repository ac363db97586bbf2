#include "novamaze/maze/map.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <stdexcept>
#include <string>

namespace novamaze::maze {
namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* name) {
  if (!doc.contains(name)) throw std::invalid_argument(std::string("map document missing required field '") + name + "'");
  return doc.at(name);
}

std::vector<double> numbers(const nlohmann::json& value, std::size_t count, const std::string& what) {
  if (!value.is_array() || value.size() != count) {
    throw std::invalid_argument(what + " must be an array of " + std::to_string(count) + " numbers");
  }
  std::vector<double> out;
  for (const auto& v : value) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) throw std::invalid_argument(what + " must hold finite numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// Occupancy grid at unit resolution: a cell is free when its center keeps
// the robot radius from every wall.
class FreeSpace {
 public:
  FreeSpace(const MazeMap& map, double radius)
      : cols_(static_cast<int>(std::ceil(map.width))), rows_(static_cast<int>(std::ceil(map.height))) {
    free_.resize(static_cast<std::size_t>(cols_ * rows_));
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) free_[index(c, r)] = wall_clearance({c + 0.5, r + 0.5}, map) >= radius;
    }
  }

  // Flood fill from `from`; returns false when the region touches the map
  // border (walls do not enclose it).
  bool fill(Vec2 from) {
    reached_.assign(free_.size(), false);
    std::deque<std::pair<int, int>> queue;
    const auto [c0, r0] = cell(from);
    queue.emplace_back(c0, r0);
    reached_[index(c0, r0)] = true;
    bool enclosed = true;
    while (!queue.empty()) {
      const auto [c, r] = queue.front();
      queue.pop_front();
      if (c == 0 || r == 0 || c == cols_ - 1 || r == rows_ - 1) enclosed = false;
      for (int dc = -1; dc <= 1; ++dc) {
        for (int dr = -1; dr <= 1; ++dr) {
          const int nc = c + dc;
          const int nr = r + dr;
          if (nc < 0 || nr < 0 || nc >= cols_ || nr >= rows_) continue;
          if (!free_[index(nc, nr)] || reached_[index(nc, nr)]) continue;
          // Diagonal moves must not cut a blocked corner.
          if (dc != 0 && dr != 0 && (!free_[index(c + dc, r)] || !free_[index(c, r + dr)])) continue;
          reached_[index(nc, nr)] = true;
          queue.emplace_back(nc, nr);
        }
      }
    }
    return enclosed;
  }

  bool reached(Vec2 p) const {
    const auto [c, r] = cell(p);
    return reached_[index(c, r)];
  }

 private:
  std::pair<int, int> cell(Vec2 p) const {
    return {std::clamp(static_cast<int>(p.x), 0, cols_ - 1), std::clamp(static_cast<int>(p.y), 0, rows_ - 1)};
  }
  std::size_t index(int c, int r) const { return static_cast<std::size_t>(r * cols_ + c); }

  int cols_;
  int rows_;
  std::vector<bool> free_;
  std::vector<bool> reached_;
};

void check_point(const MazeMap& map, Vec2 p, const std::string& what, double radius) {
  if (p.x < 0.0 || p.y < 0.0 || p.x > map.width || p.y > map.height) {
    throw std::invalid_argument(what + " lies outside the map bounds");
  }
  if (wall_clearance(p, map) < radius) throw std::invalid_argument(what + " lies inside a wall");
}

}  // namespace

double MazeMap::diagonal() const { return std::hypot(width, height); }

MazeMap load_map(const nlohmann::json& doc, const RobotConfig& robot) {
  if (!doc.is_object()) throw std::invalid_argument("map document must be a JSON object");
  if (field(doc, "version") != kMapFormatVersion) throw std::invalid_argument("unsupported map version");

  MazeMap map;
  map.name = field(doc, "name").get<std::string>();
  const auto bounds = numbers(field(doc, "bounds"), 2, "bounds");
  map.width = bounds[0];
  map.height = bounds[1];
  if (map.width <= 0.0 || map.height <= 0.0) throw std::invalid_argument("bounds must be positive");
  const auto start = numbers(field(doc, "start"), 3, "start");
  map.start = {{start[0], start[1]}, start[2]};
  const auto goal = numbers(field(doc, "goal"), 2, "goal");
  map.goal = {goal[0], goal[1]};
  if (doc.contains("waypoints")) {
    for (const auto& w : doc["waypoints"]) {
      const auto p = numbers(w, 2, "waypoint");
      map.waypoints.push_back({p[0], p[1]});
    }
  }
  for (const auto& w : field(doc, "walls")) {
    const auto s = numbers(w, 4, "wall");
    map.walls.push_back({{s[0], s[1]}, {s[2], s[3]}});
  }

  if (distance(map.start.position, map.goal) <= robot.solve_radius) {
    throw std::invalid_argument("start lies within the solve radius of the goal");
  }
  check_point(map, map.start.position, "start", robot.radius);
  check_point(map, map.goal, "goal", robot.radius);
  for (std::size_t i = 0; i < map.waypoints.size(); ++i) {
    check_point(map, map.waypoints[i], "waypoint " + std::to_string(i), robot.radius);
  }

  FreeSpace space(map, robot.radius);
  if (!space.fill(map.start.position)) throw std::invalid_argument("walls do not enclose the start");
  for (std::size_t i = 0; i < map.waypoints.size(); ++i) {
    if (!space.reached(map.waypoints[i])) throw std::invalid_argument("waypoint " + std::to_string(i) + " is unreachable");
  }
  if (!space.reached(map.goal)) throw std::invalid_argument("goal is unreachable from the start");
  return map;
}

MazeMap load_map_file(const std::filesystem::path& path, const RobotConfig& robot) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open map file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument("malformed map file " + path.string() + ": " + e.what());
  }
  return load_map(doc, robot);
}

nlohmann::json to_json(const MazeMap& map) {
  nlohmann::json doc;
  doc["version"] = kMapFormatVersion;
  doc["name"] = map.name;
  doc["bounds"] = {map.width, map.height};
  doc["start"] = {map.start.position.x, map.start.position.y, map.start.heading};
  doc["goal"] = {map.goal.x, map.goal.y};
  doc["waypoints"] = nlohmann::json::array();
  for (const auto& w : map.waypoints) doc["waypoints"].push_back({w.x, w.y});
  doc["walls"] = nlohmann::json::array();
  for (const auto& w : map.walls) doc["walls"].push_back({w.a.x, w.a.y, w.b.x, w.b.y});
  return doc;
}

std::vector<std::string> list_maps(const std::filesystem::path& dir) {
  constexpr std::string_view kSuffix = ".maze.json";
  std::vector<std::string> names;
  if (!std::filesystem::is_directory(dir)) return names;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string file = entry.path().filename().string();
    if (file.size() > kSuffix.size() && file.ends_with(kSuffix)) names.push_back(file.substr(0, file.size() - kSuffix.size()));
  }
  std::sort(names.begin(), names.end());
  return names;
}

MazeMap load_named_map(const std::filesystem::path& dir, const std::string& name, const RobotConfig& robot) {
  const auto path = dir / (name + ".maze.json");
  if (!std::filesystem::exists(path)) throw std::invalid_argument("unknown map '" + name + "'");
  return load_map_file(path, robot);
}

}  // namespace novamaze::maze
