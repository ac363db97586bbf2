#include "novamaze/neat/innovation.hpp"

#include "novamaze/neat/genome.hpp"

namespace novamaze::neat {

InnovationRegistry::InnovationRegistry() : next_node_(kFirstHiddenNode) {}

std::int64_t InnovationRegistry::link(int from, int to) {
  auto [it, inserted] = links_.try_emplace({from, to}, next_innovation_);
  if (inserted) ++next_innovation_;
  return it->second;
}

int InnovationRegistry::split_node(std::int64_t innovation, int occurrence) {
  auto [it, inserted] = splits_.try_emplace({innovation, occurrence}, next_node_);
  if (inserted) ++next_node_;
  return it->second;
}

}  // namespace novamaze::neat
