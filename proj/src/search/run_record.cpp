#include "novamaze/search/run_record.hpp"

#include <stdexcept>

#include "novamaze/neat/genome_json.hpp"

namespace novamaze::search {

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j;
  j["version"] = kRunRecordVersion;
  j["record_id"] = r.record_id;
  j["mode"] = r.mode;
  j["map"] = r.map_name;
  j["seed"] = r.seed;
  j["budget"] = r.budget;
  j["evaluations_used"] = r.evaluations_used;
  j["solved"] = r.solved;
  j["solution"] = r.solution ? nlohmann::json(*r.solution) : nlohmann::json(nullptr);
  j["solution_hidden_nodes"] = r.solution_hidden_nodes ? nlohmann::json(*r.solution_hidden_nodes) : nlohmann::json(nullptr);
  auto& points = j["final_positions"] = nlohmann::json::array();
  for (const auto& p : r.final_positions) points.push_back({p.x, p.y});
  j["threshold_history"] = r.threshold_history;
  j["wall_clock_seconds"] = r.wall_clock_seconds;
  auto& events = j["events"] = nlohmann::json::array();
  for (const auto& e : r.events) {
    events.push_back({{"t", e.t}, {"op", e.op}, {"ids", e.ids}, {"evals_before", e.evals_before}, {"evals_after", e.evals_after}});
  }
  j["operation_shares"] = operation_shares(r.events);
  j["restarts"] = r.restarts;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  if (j.value("version", 0) != kRunRecordVersion) throw std::invalid_argument("unsupported run record version");
  RunRecord r;
  r.record_id = j.at("record_id").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.map_name = j.at("map").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.budget = j.at("budget").get<std::int64_t>();
  r.evaluations_used = j.at("evaluations_used").get<std::int64_t>();
  r.solved = j.at("solved").get<bool>();
  if (!j.at("solution").is_null()) r.solution = j["solution"].get<neat::Genome>();
  if (!j.at("solution_hidden_nodes").is_null()) r.solution_hidden_nodes = j["solution_hidden_nodes"].get<int>();
  for (const auto& p : j.at("final_positions")) r.final_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
  r.threshold_history = j.value("threshold_history", std::vector<double>{});
  r.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  for (const auto& e : j.value("events", nlohmann::json::array())) {
    r.events.push_back({e.at("t").get<double>(), e.at("op").get<std::string>(), e.at("ids").get<std::vector<std::int64_t>>(),
                        e.at("evals_before").get<std::int64_t>(), e.at("evals_after").get<std::int64_t>()});
  }
  r.restarts = j.value("restarts", 0);
  r.error = j.value("error", std::string{});
  return r;
}

std::string canonical_content(const RunRecord& record) {
  nlohmann::json j = to_json(record);
  j.erase("record_id");
  j.erase("wall_clock_seconds");
  for (auto& e : j["events"]) e.erase("t");
  return j.dump();
}

std::map<std::string, double> operation_shares(const std::vector<SessionEvent>& events) {
  std::map<std::string, double> shares;
  int total = 0;
  for (const auto& e : events) {
    if (e.op == "step" || e.op == "novelty" || e.op == "optimize") {
      shares[e.op] += 1.0;
      ++total;
    }
  }
  for (auto& [op, count] : shares) count = 100.0 * count / total;
  return shares;
}

void check_invariants(const RunRecord& r) {
  if (r.evaluations_used < 0 || r.evaluations_used > r.budget) {
    throw std::logic_error("record " + r.record_id + ": evaluations exceed the budget");
  }
  if (r.solved && !r.solution) throw std::logic_error("record " + r.record_id + ": solved without a solution genome");
  if (r.solution && r.solution_hidden_nodes != r.solution->hidden_count()) {
    throw std::logic_error("record " + r.record_id + ": hidden-node count does not match the solution");
  }
  for (std::size_t i = 1; i < r.events.size(); ++i) {
    if (r.events[i].evals_before < r.events[i - 1].evals_after) {
      throw std::logic_error("record " + r.record_id + ": evaluation ledger is not monotone");
    }
  }
}

}  // namespace novamaze::search
