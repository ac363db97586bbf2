#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "novamaze/geometry.hpp"

namespace novamaze::novelty {

struct NoveltyConfig {
  int k = 15;
  double initial_threshold = 3.0;
  std::int64_t adjust_interval = 2500;
  int raise_above = 4;  // archived-since-adjust strictly above this raises the threshold
  double raise_factor = 1.2;
  double lower_factor = 0.95;
  double threshold_floor = 0.3;

  void validate() const;
};

// Append-only behavior archive plus the adaptive admission threshold.
// Single writer: score against a snapshot, then archive from one thread.
class NoveltyArchive {
 public:
  explicit NoveltyArchive(const NoveltyConfig& config = {});

  const std::vector<BehaviorDescriptor>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double threshold() const { return threshold_; }
  int k() const { return config_.k; }
  const NoveltyConfig& config() const { return config_; }
  std::int64_t evals_since_adjust() const { return evals_since_adjust_; }
  std::int64_t archived_since_adjust() const { return archived_since_adjust_; }
  // Threshold after every change, starting with the initial value.
  const std::vector<double>& threshold_history() const { return history_; }

  // Appends x iff score > threshold. Counts one evaluation either way.
  bool maybe_archive(BehaviorDescriptor x, double score);

  bool adjust_due() const { return evals_since_adjust_ >= config_.adjust_interval; }

  // Periodic schedule: raise when many were archived since the last
  // adjustment, lower when none were, then reset both counters.
  double adjust_threshold();

  // Multiplicative decay used when a novelty burst stalls; honors the floor.
  double scale_threshold(double factor);

 private:
  void set_threshold(double value);

  NoveltyConfig config_;
  std::vector<BehaviorDescriptor> entries_;
  double threshold_;
  std::int64_t evals_since_adjust_ = 0;
  std::int64_t archived_since_adjust_ = 0;
  std::vector<double> history_;
};

// Mean distance from x to its k nearest neighbors among `population`
// (skipping index `self`, if given) and the archive entries. With fewer
// than k neighbors, averages over those available; with none, returns
// twice the archive threshold.
double sparseness(BehaviorDescriptor x, std::span<const BehaviorDescriptor> population, std::optional<std::size_t> self,
                  const NoveltyArchive& archive);

// Sparseness of every population member against the rest plus the archive.
std::vector<double> score_population(std::span<const BehaviorDescriptor> population, const NoveltyArchive& archive);

// {"entries":[[x,y],..],"threshold":..,"threshold_history":[..]}
nlohmann::json to_json(const NoveltyArchive& archive);

}  // namespace novamaze::novelty
