#include "novamaze/search/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

namespace novamaze::search {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("sample standard deviation needs two values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of an empty sample");
  std::vector<double> v(xs.begin(), xs.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> successful_evaluations(std::span<const RunRecord> records) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.solved) out.push_back(static_cast<double>(r.evaluations_used));
  }
  return out;
}

std::vector<double> solution_hidden_nodes(std::span<const RunRecord> records) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (r.solved && r.solution_hidden_nodes) out.push_back(*r.solution_hidden_nodes);
  }
  return out;
}

AggregateStats run_statistics(std::span<const RunRecord> records) {
  if (records.empty()) throw std::invalid_argument("statistics need at least one record");
  AggregateStats s;
  s.runs = static_cast<int>(records.size());
  const auto evals = successful_evaluations(records);
  const auto hidden = solution_hidden_nodes(records);
  s.successes = static_cast<int>(evals.size());
  if (!evals.empty()) s.mean_evaluations = mean(evals);
  if (evals.size() >= 2) s.sd_evaluations = sample_sd(evals);
  if (!hidden.empty()) s.mean_hidden = mean(hidden);
  if (hidden.size() >= 2) s.sd_hidden = sample_sd(hidden);
  double seconds = 0.0;
  for (const auto& r : records) seconds += r.wall_clock_seconds;
  s.mean_seconds = seconds / s.runs;
  return s;
}

WelchTest welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("Welch's t-test needs two values per sample");
  const double va = std::pow(sample_sd(a), 2) / static_cast<double>(a.size());
  const double vb = std::pow(sample_sd(b), 2) / static_cast<double>(b.size());
  WelchTest result;
  if (va + vb == 0.0) {
    result.t = mean(a) == mean(b) ? 0.0 : std::copysign(INFINITY, mean(a) - mean(b));
    result.df = static_cast<double>(a.size() + b.size() - 2);
    result.p_two_sided = mean(a) == mean(b) ? 1.0 : 0.0;
    return result;
  }
  result.t = (mean(a) - mean(b)) / std::sqrt(va + vb);
  result.df = std::pow(va + vb, 2) /
              (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  const boost::math::students_t dist(result.df);
  result.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(result.t)));
  return result;
}

}  // namespace novamaze::search
