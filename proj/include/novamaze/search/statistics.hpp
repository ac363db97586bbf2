#pragma once

#include <optional>
#include <span>
#include <string>

#include "novamaze/search/run_record.hpp"

namespace novamaze::search {

struct AggregateStats {
  int runs = 0;
  int successes = 0;
  // Over successful runs only; absent when there are none (or, for the
  // standard deviations, fewer than two).
  std::optional<double> mean_evaluations;
  std::optional<double> sd_evaluations;
  std::optional<double> mean_hidden;
  std::optional<double> sd_hidden;
  double mean_seconds = 0.0;  // over all runs
};

// Throws std::invalid_argument on an empty record set.
AggregateStats run_statistics(std::span<const RunRecord> records);

double mean(std::span<const double> xs);
// Sample (n - 1) standard deviation.
double sample_sd(std::span<const double> xs);
double median(std::span<const double> xs);

// Welch's unequal-variance two-sample t-test.
struct WelchTest {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
};
WelchTest welch_t_test(std::span<const double> a, std::span<const double> b);

// Successful-run evaluation counts and solution hidden-node counts.
std::vector<double> successful_evaluations(std::span<const RunRecord> records);
std::vector<double> solution_hidden_nodes(std::span<const RunRecord> records);

}  // namespace novamaze::search
