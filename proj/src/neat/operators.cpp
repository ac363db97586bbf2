#include "novamaze/neat/operators.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace novamaze::neat {
namespace {

void insert_node(Genome& g, NodeGene node) {
  auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), node.id,
                             [](const NodeGene& n, int id) { return n.id < id; });
  g.nodes.insert(it, node);
}

void insert_connection(Genome& g, ConnectionGene gene) {
  auto it = std::lower_bound(g.connections.begin(), g.connections.end(), gene.innovation,
                             [](const ConnectionGene& c, std::int64_t innov) { return c.innovation < innov; });
  g.connections.insert(it, gene);
}

// True when following existing connections from `start` reaches `target`.
bool reaches(const Genome& g, int start, int target) {
  std::vector<int> stack{start};
  std::vector<int> seen;
  while (!stack.empty()) {
    const int node = stack.back();
    stack.pop_back();
    if (node == target) return true;
    if (std::find(seen.begin(), seen.end(), node) != seen.end()) continue;
    seen.push_back(node);
    for (const auto& c : g.connections) {
      if (c.from == node) stack.push_back(c.to);
    }
  }
  return false;
}

void add_node(Genome& g, InnovationRegistry& registry, Rng& rng) {
  std::vector<std::size_t> enabled;
  for (std::size_t i = 0; i < g.connections.size(); ++i) {
    if (g.connections[i].enabled) enabled.push_back(i);
  }
  if (enabled.empty()) return;
  ConnectionGene& split = g.connections[enabled[rng.index(enabled.size())]];
  split.enabled = false;
  const ConnectionGene old = split;

  int occurrence = 0;
  int node = registry.split_node(old.innovation, occurrence);
  while (g.has_node(node)) node = registry.split_node(old.innovation, ++occurrence);

  insert_node(g, {node, NodeKind::kHidden});
  insert_connection(g, {registry.link(old.from, node), old.from, node, 1.0, true});
  insert_connection(g, {registry.link(node, old.to), node, old.to, old.weight, true});
}

void add_link(Genome& g, const NeatConfig& config, InnovationRegistry& registry, Rng& rng) {
  std::vector<std::pair<int, int>> candidates;
  for (const auto& src : g.nodes) {
    for (const auto& dst : g.nodes) {
      if (dst.kind != NodeKind::kHidden && dst.kind != NodeKind::kOutput) continue;
      if (g.has_connection(src.id, dst.id)) continue;
      if (!config.allow_recurrent && (src.id == dst.id || reaches(g, dst.id, src.id))) continue;
      candidates.emplace_back(src.id, dst.id);
    }
  }
  if (candidates.empty()) return;
  const auto [from, to] = candidates[rng.index(candidates.size())];
  const double w = rng.uniform(-config.initial_weight_range, config.initial_weight_range);
  insert_connection(g, {registry.link(from, to), from, to, w, true});
}

}  // namespace

Genome init_genome(const NeatConfig& config, InnovationRegistry& registry, Rng& rng) {
  Genome g;
  g.id = registry.next_genome_id();
  for (int id = 0; id < kSensorCount; ++id) g.nodes.push_back({id, NodeKind::kInput});
  g.nodes.push_back({kBiasNode, NodeKind::kBias});
  for (int k = 0; k < kOutputCount; ++k) g.nodes.push_back({kFirstOutputNode + k, NodeKind::kOutput});
  for (int in = 0; in < kInputCount; ++in) {
    for (int k = 0; k < kOutputCount; ++k) {
      const int out = kFirstOutputNode + k;
      const double w = rng.uniform(-config.initial_weight_range, config.initial_weight_range);
      g.connections.push_back({registry.link(in, out), in, out, w, true});
    }
  }
  std::sort(g.connections.begin(), g.connections.end(),
            [](const ConnectionGene& x, const ConnectionGene& y) { return x.innovation < y.innovation; });
  return g;
}

Genome mutate(const Genome& genome, const NeatConfig& config, InnovationRegistry& registry, Rng& rng,
              MutationEvents* events) {
  Genome g = genome;
  MutationEvents fired;
  if (rng.bernoulli(config.add_node_prob)) {
    const int before = g.hidden_count();
    add_node(g, registry, rng);
    fired.added_node = g.hidden_count() > before;
  }
  if (rng.bernoulli(config.add_link_prob)) {
    const auto before = g.connections.size();
    add_link(g, config, registry, rng);
    fired.added_link = g.connections.size() > before;
  }
  if (rng.bernoulli(config.remove_link_prob) && !g.connections.empty()) {
    g.connections.erase(g.connections.begin() + static_cast<std::ptrdiff_t>(rng.index(g.connections.size())));
    fired.removed_link = true;
  }
  const double power = config.weight_mutation_power;
  for (auto& c : g.connections) {
    c.weight = std::clamp(c.weight + rng.uniform(-power, power), -config.weight_limit, config.weight_limit);
  }
  if (events != nullptr) *events = fired;
  return g;
}

Genome crossover(const Genome& a, const Genome& b, FitterParent fitter, const NeatConfig& config, Rng& rng) {
  const bool a_fitter = fitter == FitterParent::kA;
  Genome child;
  child.nodes = a_fitter ? a.nodes : b.nodes;

  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.connections.size() || j < b.connections.size()) {
    const ConnectionGene* ga = i < a.connections.size() ? &a.connections[i] : nullptr;
    const ConnectionGene* gb = j < b.connections.size() ? &b.connections[j] : nullptr;
    if (ga != nullptr && gb != nullptr && ga->innovation == gb->innovation) {
      ConnectionGene gene = rng.bernoulli(0.5) ? *ga : *gb;
      gene.enabled = true;
      if (!ga->enabled || !gb->enabled) gene.enabled = !rng.bernoulli(config.disable_inherit_prob);
      child.connections.push_back(gene);
      ++i;
      ++j;
    } else if (gb == nullptr || (ga != nullptr && ga->innovation < gb->innovation)) {
      if (a_fitter) child.connections.push_back(*ga);
      ++i;
    } else {
      if (!a_fitter) child.connections.push_back(*gb);
      ++j;
    }
  }
  return child;
}

double compatibility_distance(const Genome& a, const Genome& b, const NeatConfig& config) {
  const auto& ca = a.connections;
  const auto& cb = b.connections;
  const std::int64_t max_a = ca.empty() ? 0 : ca.back().innovation;
  const std::int64_t max_b = cb.empty() ? 0 : cb.back().innovation;

  int matching = 0;
  int disjoint = 0;
  int excess = 0;
  double weight_diff = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < ca.size() || j < cb.size()) {
    if (i < ca.size() && j < cb.size() && ca[i].innovation == cb[j].innovation) {
      ++matching;
      weight_diff += std::abs(ca[i].weight - cb[j].weight);
      ++i;
      ++j;
    } else if (j >= cb.size() || (i < ca.size() && ca[i].innovation < cb[j].innovation)) {
      (ca[i].innovation > max_b ? excess : disjoint) += 1;
      ++i;
    } else {
      (cb[j].innovation > max_a ? excess : disjoint) += 1;
      ++j;
    }
  }

  const auto larger = static_cast<double>(std::max(ca.size(), cb.size()));
  const bool small = static_cast<int>(ca.size()) < config.normalization_threshold &&
                     static_cast<int>(cb.size()) < config.normalization_threshold;
  const double n = (small || larger == 0.0) ? 1.0 : larger;
  const double mean_diff = matching > 0 ? weight_diff / matching : 0.0;
  return (excess + disjoint) / n + config.compatibility_modifier * mean_diff;
}

}  // namespace novamaze::neat
