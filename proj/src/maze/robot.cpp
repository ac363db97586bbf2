#include "novamaze/maze/robot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "novamaze/maze/map.hpp"

namespace novamaze::maze {
namespace {

constexpr double kPi = std::numbers::pi;
// Contact positions are pulled back by this much to stay clear of the wall.
constexpr double kContactSkin = 1e-9;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

// Distance along the unit ray to the segment, or +inf when missed.
double ray_hit(Vec2 origin, Vec2 dir, const Segment& wall) {
  const Vec2 d = wall.b - wall.a;
  double denom = cross(dir, d);
  if (std::abs(denom) < 1e-12) return std::numeric_limits<double>::infinity();
  const Vec2 ao = wall.a - origin;
  double t = cross(ao, d);
  double s = cross(ao, dir);
  if (denom < 0.0) {
    denom = -denom;
    t = -t;
    s = -s;
  }
  if (t < 0.0 || s < 0.0 || s > denom) return std::numeric_limits<double>::infinity();
  return t / denom;
}

struct Contact {
  double t = std::numeric_limits<double>::infinity();
  Vec2 normal;  // unit, pointing from the wall toward the robot
};

// Earliest fraction t in [0, 1] of `motion` at which a disc of `radius`
// starting at p touches the wall.
Contact sweep(Vec2 p, Vec2 motion, double radius, const Segment& wall) {
  Contact best;
  const Vec2 closest = closest_point(wall, p);
  const double gap = distance(closest, p);
  if (gap < radius + kContactSkin) {
    // Already touching: only motion into the wall is blocked.
    Vec2 n = gap > 0.0 ? (1.0 / gap) * (p - closest) : Vec2{0.0, 0.0};
    if (gap == 0.0) {
      const Vec2 d = wall.b - wall.a;
      n = (1.0 / norm(d)) * Vec2{-d.y, d.x};
      if (dot(n, motion) > 0.0) n = -1.0 * n;
    }
    // Tangential motion left over from a previous slide is not blocked.
    if (dot(n, motion) < -1e-9 * norm(motion)) best = {0.0, n};
    return best;
  }

  const Vec2 d = wall.b - wall.a;
  const double len = norm(d);
  if (len > 0.0) {
    Vec2 n = (1.0 / len) * Vec2{-d.y, d.x};
    double side = dot(p - wall.a, n);
    if (side < 0.0) {
      n = -1.0 * n;
      side = -side;
    }
    const double approach = dot(motion, n);
    if (approach < 0.0) {
      const double t = (radius - side) / approach;
      if (t >= 0.0 && t <= 1.0) {
        const Vec2 at = p + t * motion;
        const double u = dot(at - wall.a, d) / (len * len);
        if (u >= 0.0 && u <= 1.0) best = {t, n};
      }
    }
  }
  for (Vec2 end : {wall.a, wall.b}) {
    const Vec2 rel = p - end;
    const double a = dot(motion, motion);
    const double b = 2.0 * dot(motion, rel);
    const double c = dot(rel, rel) - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (a == 0.0 || b >= 0.0 || disc < 0.0) continue;
    const double t = (-b - std::sqrt(disc)) / (2.0 * a);
    if (t >= 0.0 && t <= 1.0 && t < best.t) best = {t, (1.0 / radius) * (rel + t * motion)};
  }
  return best;
}

const std::array<Vec2, kRangefinderCount> kRangefinderOffsets = [] {
  std::array<Vec2, kRangefinderCount> out{};
  for (int i = 0; i < kRangefinderCount; ++i) {
    const double a = kRangefinderAngles[static_cast<std::size_t>(i)] * kPi / 180.0;
    out[static_cast<std::size_t>(i)] = {std::cos(a), std::sin(a)};
  }
  return out;
}();

}  // namespace

void RobotConfig::validate() const {
  if (radius <= 0.0 || rangefinder_range <= 0.0 || solve_radius <= 0.0) {
    throw std::invalid_argument("robot radius, rangefinder range and solve radius must be positive");
  }
  if (max_speed < 0.0 || max_angular_velocity < 0.0) throw std::invalid_argument("velocity caps must be non-negative");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
}

double wall_clearance(Vec2 p, const MazeMap& map) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : map.walls) best = std::min(best, distance(w, p));
  return best;
}

SensorReadings sense(const RobotState& state, const MazeMap& map, const RobotConfig& config) {
  SensorReadings out{};
  const Vec2 forward{std::cos(state.heading), std::sin(state.heading)};
  for (int i = 0; i < kRangefinderCount; ++i) {
    const Vec2 offset = kRangefinderOffsets[static_cast<std::size_t>(i)];
    const Vec2 dir{forward.x * offset.x - forward.y * offset.y, forward.x * offset.y + forward.y * offset.x};
    double nearest = config.rangefinder_range;
    for (const auto& w : map.walls) nearest = std::min(nearest, ray_hit(state.position, dir, w));
    out[static_cast<std::size_t>(i)] = nearest / config.rangefinder_range;
  }
  const Vec2 to_goal = map.goal - state.position;
  double bearing = std::atan2(to_goal.y, to_goal.x) - state.heading;
  // Shift into [0, 2pi) measured from -45 degrees.
  bearing = std::fmod(bearing + kPi / 4.0, 2.0 * kPi);
  if (bearing < 0.0) bearing += 2.0 * kPi;
  const int slice = std::min(3, static_cast<int>(bearing / (kPi / 2.0)));
  out[static_cast<std::size_t>(kRangefinderCount + slice)] = 1.0;
  return out;
}

RobotState step(const RobotState& state, std::array<double, 2> outputs, const MazeMap& map,
                const RobotConfig& config) {
  const double turn = std::clamp(outputs[0], -0.5, 0.5);
  const double thrust = std::clamp(outputs[1], -0.5, 0.5);

  RobotState next = state;
  next.angular_velocity = std::clamp(state.angular_velocity + turn * config.turn_scale,
                                     -config.max_angular_velocity, config.max_angular_velocity);
  next.speed = std::clamp(state.speed + thrust * config.velocity_scale, -config.max_speed, config.max_speed);
  next.heading = wrap_angle(state.heading + next.angular_velocity);

  const Vec2 dir{std::cos(next.heading), std::sin(next.heading)};
  Vec2 motion = next.speed * dir;
  Vec2 position = state.position;
  for (int pass = 0; pass < 4 && dot(motion, motion) > 0.0; ++pass) {
    const double reach = norm(motion) + config.radius + kContactSkin;
    Contact first;
    for (const auto& w : map.walls) {
      if (distance(w, position) > reach) continue;
      const Contact c = sweep(position, motion, config.radius, w);
      if (c.t < first.t) first = c;
    }
    if (!std::isfinite(first.t)) {
      position = position + motion;
      break;
    }
    const double t = std::max(0.0, first.t - kContactSkin / norm(motion));
    position = position + t * motion;
    if (!config.slide) break;
    Vec2 rest = (1.0 - t) * motion;
    const double into = dot(rest, first.normal);
    if (into < 0.0) rest = rest - into * first.normal;
    const double facing = dot(dir, first.normal);
    if (next.speed * facing < 0.0) next.speed *= 1.0 - facing * facing;
    motion = rest;
  }
  next.position = position;
  return next;
}

}  // namespace novamaze::maze
