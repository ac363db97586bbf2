#include "novamaze/novelty/archive.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace novamaze::novelty {

void NoveltyConfig::validate() const {
  if (k < 1) throw std::invalid_argument("novelty k must be at least 1");
  if (initial_threshold <= 0.0 || threshold_floor <= 0.0) throw std::invalid_argument("novelty thresholds must be positive");
  if (adjust_interval < 1) throw std::invalid_argument("adjust_interval must be positive");
  if (raise_factor < 1.0 || lower_factor <= 0.0 || lower_factor > 1.0) throw std::invalid_argument("bad threshold factors");
}

NoveltyArchive::NoveltyArchive(const NoveltyConfig& config) : config_(config), threshold_(config.initial_threshold) {
  config_.validate();
  history_.push_back(threshold_);
}

bool NoveltyArchive::maybe_archive(BehaviorDescriptor x, double score) {
  ++evals_since_adjust_;
  if (!(score > threshold_)) return false;
  entries_.push_back(x);
  ++archived_since_adjust_;
  return true;
}

double NoveltyArchive::adjust_threshold() {
  if (archived_since_adjust_ > config_.raise_above) set_threshold(threshold_ * config_.raise_factor);
  else if (archived_since_adjust_ == 0) set_threshold(threshold_ * config_.lower_factor);
  evals_since_adjust_ = 0;
  archived_since_adjust_ = 0;
  return threshold_;
}

double NoveltyArchive::scale_threshold(double factor) {
  set_threshold(threshold_ * factor);
  return threshold_;
}

void NoveltyArchive::set_threshold(double value) {
  threshold_ = std::max(value, config_.threshold_floor);
  history_.push_back(threshold_);
}

double sparseness(BehaviorDescriptor x, std::span<const BehaviorDescriptor> population, std::optional<std::size_t> self,
                  const NoveltyArchive& archive) {
  const auto k = static_cast<std::size_t>(archive.k());
  // Max-heap of the k smallest squared distances seen so far.
  std::priority_queue<double> nearest;
  auto offer = [&](BehaviorDescriptor y) {
    const double d2 = squared_distance(x, y);
    if (nearest.size() < k) nearest.push(d2);
    else if (d2 < nearest.top()) {
      nearest.pop();
      nearest.push(d2);
    }
  };
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (self && *self == i) continue;
    offer(population[i]);
  }
  for (const auto& y : archive.entries()) offer(y);

  if (nearest.empty()) return 2.0 * archive.threshold();
  const double count = static_cast<double>(nearest.size());
  double sum = 0.0;
  while (!nearest.empty()) {
    sum += std::sqrt(nearest.top());
    nearest.pop();
  }
  return sum / count;
}

std::vector<double> score_population(std::span<const BehaviorDescriptor> population, const NoveltyArchive& archive) {
  std::vector<double> scores(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) scores[i] = sparseness(population[i], population, i, archive);
  return scores;
}

nlohmann::json to_json(const NoveltyArchive& archive) {
  nlohmann::json j;
  auto& entries = j["entries"] = nlohmann::json::array();
  for (const auto& e : archive.entries()) entries.push_back({e.x, e.y});
  j["threshold"] = archive.threshold();
  j["threshold_history"] = archive.threshold_history();
  return j;
}

}  // namespace novamaze::novelty
