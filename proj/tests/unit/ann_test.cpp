#include <cmath>
#include <limits>
#include <vector>

#include <doctest.h>

#include "novamaze/ann/network.hpp"
#include "novamaze/neat/genome_json.hpp"
#include "novamaze/neat/operators.hpp"

using namespace novamaze;
using namespace novamaze::neat;

namespace {

double sigma(double z) { return 1.0 / (1.0 + std::exp(-4.9 * z)) - 0.5; }

Genome bare_genome() {
  Genome g;
  for (int id = 0; id < kSensorCount; ++id) g.nodes.push_back({id, NodeKind::kInput});
  g.nodes.push_back({kBiasNode, NodeKind::kBias});
  g.nodes.push_back({kFirstOutputNode, NodeKind::kOutput});
  g.nodes.push_back({kFirstOutputNode + 1, NodeKind::kOutput});
  return g;
}

void link(Genome& g, std::int64_t innovation, int from, int to, double w, bool enabled = true) {
  g.connections.push_back({innovation, from, to, w, enabled});
}

const std::vector<double> kHalf(kSensorCount, 0.5);

}  // namespace

TEST_CASE("phenotype of the initial genome") {
  InnovationRegistry reg;
  Rng rng(1);
  const Genome g = init_genome({}, reg, rng);
  const std::string before = nlohmann::json(g).dump();
  ann::Network net(g);
  CHECK(net.link_count() == 22);
  CHECK(net.hidden_count() == 0);
  CHECK(net.node_count() == 13);
  for (double a : net.activations()) CHECK(a == 0.0);
  CHECK(nlohmann::json(g).dump() == before);
}

TEST_CASE("disabled connections are not decoded") {
  InnovationRegistry reg;
  Rng rng(2);
  Genome g = init_genome({}, reg, rng);
  g.connections[3].enabled = false;
  CHECK(ann::Network(g).link_count() == 21);
}

TEST_CASE("zero weights give zero outputs") {
  InnovationRegistry reg;
  Rng rng(3);
  Genome g = init_genome({}, reg, rng);
  for (auto& c : g.connections) c.weight = 0.0;
  ann::Network net(g);
  Rng inputs(4);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> s(kSensorCount);
    for (auto& v : s) v = inputs.uniform();
    const auto out = net.activate(s);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
  }
}

TEST_CASE("saturated bias link") {
  Genome g = bare_genome();
  link(g, 1, kBiasNode, kFirstOutputNode, 8.0);
  ann::Network net(g);
  const auto out = net.activate(kHalf);
  CHECK(out[0] == doctest::Approx(sigma(8.0 * 0.5)).epsilon(1e-15));
  CHECK(std::abs(out[0] - 0.5) < 1e-6);
  CHECK(out[1] == 0.0);
}

TEST_CASE("recurrent self loop follows the one-step-delay trace") {
  const double w_in = 1.3, w_self = -2.1, w_out = 0.7, w_sensor = 0.9;
  Genome g = bare_genome();
  g.nodes.push_back({kFirstHiddenNode, NodeKind::kHidden});
  link(g, 1, kBiasNode, kFirstHiddenNode, w_in);
  link(g, 2, 0, kFirstHiddenNode, w_sensor);
  link(g, 3, kFirstHiddenNode, kFirstHiddenNode, w_self);
  link(g, 4, kFirstHiddenNode, kFirstOutputNode + 1, w_out);
  ann::Network net(g);

  const std::vector<double> inputs{0.2, 0.9, 0.4};
  double h = 0.0, out = 0.0;
  for (double x : inputs) {
    std::vector<double> s(kSensorCount, 0.0);
    s[0] = x;
    const double h_next = sigma(w_in * 0.5 + w_sensor * (x - 0.5) + w_self * h);
    const double out_next = sigma(w_out * h);
    h = h_next;
    out = out_next;
    const auto got = net.activate(s);
    CHECK(got[1] == doctest::Approx(out).epsilon(1e-14));
    CHECK(got[0] == 0.0);
  }
}

TEST_CASE("activations stay bounded and reset restores the episode") {
  NeatConfig c;
  c.add_node_prob = 0.2;
  c.add_link_prob = 0.3;
  c.weight_mutation_power = 3.0;
  InnovationRegistry reg;
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Genome g = init_genome(c, reg, rng);
    for (int i = 0; i < 15; ++i) g = mutate(g, c, reg, rng);
    ann::Network net(g);
    std::vector<std::vector<double>> stream;
    for (int t = 0; t < 30; ++t) {
      std::vector<double> s(kSensorCount);
      for (auto& v : s) v = rng.uniform();
      stream.push_back(s);
    }
    std::vector<std::array<double, 2>> first;
    for (const auto& s : stream) {
      first.push_back(net.activate(s));
      for (double a : net.activations()) REQUIRE(std::abs(a) <= 0.5);
    }
    net.reset();
    for (double a : net.activations()) CHECK(a == 0.0);
    for (std::size_t t = 0; t < stream.size(); ++t) REQUIRE(net.activate(stream[t]) == first[t]);
  }
}

TEST_CASE("malformed sensor input is rejected") {
  Genome g = bare_genome();
  ann::Network net(g);
  CHECK_THROWS_AS(net.activate(std::vector<double>(9, 0.5)), std::invalid_argument);
  std::vector<double> s(kSensorCount, 0.5);
  s[4] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(net.activate(s), std::invalid_argument);
  s[4] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(net.activate(s), std::invalid_argument);
}
