#pragma once

#include <cstdint>
#include <map>
#include <utility>

namespace novamaze::neat {

// Experiment-wide structural bookkeeping. One (from, to) pair maps to one
// innovation number for the lifetime of the registry, and one split of a
// given connection maps to one hidden node id, so identical structural
// events in different lineages line up during crossover.
//
// Not thread-safe: confine to the coordinator that runs reproduction.
class InnovationRegistry {
 public:
  InnovationRegistry();

  std::int64_t link(int from, int to);

  // Hidden node produced by splitting `innovation`. `occurrence` separates
  // repeated splits of the same gene inside one lineage.
  int split_node(std::int64_t innovation, int occurrence);

  std::int64_t next_genome_id() { return next_genome_id_++; }

  std::int64_t innovation_count() const { return next_innovation_ - 1; }
  const std::map<std::pair<int, int>, std::int64_t>& links() const { return links_; }

 private:
  std::map<std::pair<int, int>, std::int64_t> links_;
  std::map<std::pair<std::int64_t, int>, int> splits_;
  std::int64_t next_innovation_ = 1;
  int next_node_;
  std::int64_t next_genome_id_ = 1;
};

}  // namespace novamaze::neat
