#include "novamaze/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "novamaze/search/record_store.hpp"
#include "novamaze/search/run_search.hpp"
#include "novamaze/session/session.hpp"

namespace novamaze::harness {
namespace fs = std::filesystem;

search::RunRecord run_scripted_session(const maze::MazeMap& map, const HarnessConfig& config, std::uint64_t seed,
                                       std::stop_token stop) {
  config.validate();
  session::SessionConfig session_config = config.session;
  session_config.seed = seed;
  session::Session s(map, config.engine, session_config);
  Rng policy_rng(seed ^ 0x6a09e667f3bcc908ULL);
  const ScriptConfig& script = config.script;

  bool novelty_next = true;
  while (!s.terminal() && !stop.stop_requested()) {
    s.select(session::scripted_select(script.policy, s, policy_rng));
    const bool near_goal = std::any_of(s.population().begin(), s.population().end(), [&](const session::Candidate& c) {
      return distance(c.behavior, map.goal) <= script.optimize_radius;
    });
    if (near_goal) {
      std::stop_source cap;
      std::stop_callback forward(stop, [&] { cap.request_stop(); });
      s.optimize(cap.get_token(), [&](const session::Progress& p) {
        if (p.op_evaluations >= script.optimize_eval_cap) cap.request_stop();
      });
    } else if (novelty_next || s.budget_remaining() < session_config.n) {
      s.novelty(stop);
      novelty_next = false;
    } else {
      s.step();
      novelty_next = true;
    }
  }
  return s.publish();
}

void validate_mode(const std::string& mode) {
  if (mode == "naiec-scripted") return;
  search::parse_search_mode(mode);
}

search::RunRecord run_one(const std::string& mode, const maze::MazeMap& map, const HarnessConfig& config,
                          std::int64_t budget, std::uint64_t seed, std::stop_token stop) {
  try {
    if (mode == "naiec-scripted") {
      HarnessConfig c = config;
      c.session.budget = budget;
      return run_scripted_session(map, c, seed, stop);
    }
    search::SearchOptions options{search::parse_search_mode(mode), budget, seed, {}};
    return search::run_search(map, config.engine, options, stop);
  } catch (const std::exception& e) {
    search::RunRecord failed;
    failed.mode = mode == "naiec-scripted" ? "naiec" : mode;
    failed.map_name = map.name;
    failed.seed = seed;
    failed.budget = budget;
    failed.error = e.what();
    return failed;
  }
}

void ExperimentPlan::validate() const {
  if (entries.empty()) throw std::invalid_argument("experiment plan has no entries");
  if (threads < 1) throw std::invalid_argument("thread count must be positive");
  for (const auto& e : entries) {
    validate_mode(e.mode);
    if (e.runs < 1) throw std::invalid_argument("run count must be at least 1");
    if (e.budget < 1) throw std::invalid_argument("budget must be positive");
  }
}

namespace {

std::string record_name(const PlanEntry& entry, std::uint64_t seed) {
  return entry.mode + "-" + entry.map + "-" + std::to_string(seed);
}

void write_scatter(const fs::path& path, const search::RunRecord& record) {
  std::ofstream out(path, std::ios::trunc);
  out << "x,y\n";
  char line[64];
  for (const auto& p : record.final_positions) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", p.x, p.y);
    out << line;
  }
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::vector<search::RunRecord> completed(const std::vector<search::RunRecord>& records) {
  std::vector<search::RunRecord> out;
  std::copy_if(records.begin(), records.end(), std::back_inserter(out),
               [](const search::RunRecord& r) { return r.error.empty(); });
  return out;
}

std::string cell(const std::optional<double>& v, const char* format) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, format, *v);
  return buf;
}

}  // namespace

EntryResult run_entry(const PlanEntry& entry, const ExperimentPlan& plan, const HarnessConfig& config,
                      const RunCallback& on_run, std::stop_token stop) {
  const maze::MazeMap map = maze::load_named_map(plan.maps_dir, entry.map, config.engine.robot);
  search::RecordStore store(plan.out_dir / "records");
  fs::create_directories(plan.out_dir / "scatter");

  EntryResult result{entry, {}, std::vector<search::RunRecord>(static_cast<std::size_t>(entry.runs))};
  std::atomic<int> next{0};
  std::mutex report;
  auto worker = [&] {
    for (int i = next++; i < entry.runs; i = next++) {
      if (stop.stop_requested()) return;
      const std::uint64_t seed = entry.base_seed + static_cast<std::uint64_t>(i);
      search::RunRecord record = run_one(entry.mode, map, config, entry.budget, seed, stop);
      record.record_id = record_name(entry, seed);
      store.save_as(record);
      write_scatter(plan.out_dir / "scatter" / (record.record_id + ".csv"), record);
      std::lock_guard lock(report);
      if (on_run) on_run(entry, record);
      result.records[static_cast<std::size_t>(i)] = std::move(record);
    }
  };
  const int threads = std::min(plan.threads, entry.runs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  std::erase_if(result.records, [](const search::RunRecord& r) { return r.mode.empty(); });
  const auto done = completed(result.records);
  if (!done.empty()) result.stats = search::run_statistics(done);
  return result;
}

std::vector<EntryResult> run_experiment(const ExperimentPlan& plan, const HarnessConfig& config,
                                        const RunCallback& on_run, std::stop_token stop) {
  plan.validate();
  config.validate();
  fs::create_directories(plan.out_dir);
  std::vector<EntryResult> results;
  std::vector<SummaryRow> rows;
  for (const auto& entry : plan.entries) {
    results.push_back(run_entry(entry, plan, config, on_run, stop));
    const auto& records = results.back().records;
    const std::string mode = records.empty() ? entry.mode : records.front().mode;
    rows.push_back({mode, entry.map, results.back().stats});
  }
  std::ofstream out(plan.out_dir / "summary.csv", std::ios::trunc);
  out << summary_csv(rows);
  if (!out) throw std::runtime_error("failed writing summary.csv");
  return results;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << kSummaryHeader << '\n';
  for (const auto& row : rows) {
    const auto& s = row.stats;
    out << row.mode << ',' << row.map << ',' << s.runs << ',' << s.successes << ','
        << cell(s.mean_evaluations, "%.1f") << ',' << cell(s.sd_evaluations, "%.1f") << ','
        << cell(s.mean_hidden, "%.3f") << ',' << cell(s.sd_hidden, "%.3f") << ',' << cell(s.mean_seconds, "%.3f")
        << '\n';
  }
  return out.str();
}

namespace {

std::map<std::pair<std::string, std::string>, std::vector<search::RunRecord>> group_records(const fs::path& dir) {
  const fs::path records_dir = fs::is_directory(dir / "records") ? dir / "records" : dir;
  if (!fs::is_directory(records_dir)) throw std::invalid_argument("no record directory at " + dir.string());
  search::RecordStore store(records_dir);
  std::map<std::pair<std::string, std::string>, std::vector<search::RunRecord>> groups;
  for (auto& r : store.load_all()) {
    if (!r.error.empty()) continue;
    groups[{r.map_name, r.mode}].push_back(std::move(r));
  }
  if (groups.empty()) throw std::invalid_argument("no completed run records under " + dir.string());
  return groups;
}

}  // namespace

std::vector<SummaryRow> summarize_directory(const fs::path& dir) {
  std::vector<SummaryRow> rows;
  for (const auto& [key, records] : group_records(dir)) {
    rows.push_back({key.second, key.first, search::run_statistics(records)});
  }
  return rows;
}

std::string stats_report(const fs::path& dir) {
  const auto groups = group_records(dir);
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-8s %5s %9s %12s %12s %8s %8s %9s\n", "map", "mode", "runs", "successes",
                "mean_evals", "sd_evals", "hidden", "sd_hid", "seconds");
  out << line;
  for (const auto& [key, records] : groups) {
    const auto s = search::run_statistics(records);
    std::snprintf(line, sizeof line, "%-10s %-8s %5d %9d %12s %12s %8s %8s %9.2f\n", key.first.c_str(),
                  key.second.c_str(), s.runs, s.successes, cell(s.mean_evaluations, "%.1f").c_str(),
                  cell(s.sd_evaluations, "%.1f").c_str(), cell(s.mean_hidden, "%.2f").c_str(),
                  cell(s.sd_hidden, "%.2f").c_str(), s.mean_seconds);
    out << line;
  }
  out << "\nWelch's t-test on evaluations of successful runs:\n";
  bool any = false;
  for (auto a = groups.begin(); a != groups.end(); ++a) {
    for (auto b = std::next(a); b != groups.end(); ++b) {
      if (a->first.first != b->first.first) continue;
      const auto xa = search::successful_evaluations(a->second);
      const auto xb = search::successful_evaluations(b->second);
      if (xa.size() < 2 || xb.size() < 2) continue;
      const auto w = search::welch_t_test(xa, xb);
      std::snprintf(line, sizeof line, "  %s: %s vs %s  t=%.3f df=%.1f p=%.4g\n", a->first.first.c_str(),
                    a->first.second.c_str(), b->first.second.c_str(), w.t, w.df, w.p_two_sided);
      out << line;
      any = true;
    }
  }
  if (!any) out << "  (no pair of modes with at least two successes each)\n";
  return out.str();
}

}  // namespace novamaze::harness
