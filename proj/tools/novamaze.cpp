#include <csignal>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <pthread.h>

#include <CLI11.hpp>

#include "novamaze/harness/config.hpp"
#include "novamaze/harness/experiment.hpp"
#include "novamaze/harness/service.hpp"

namespace fs = std::filesystem;
using namespace novamaze;

namespace {

harness::HarnessConfig resolve_config(const std::string& path) {
  return path.empty() ? harness::config_from_env() : harness::load_config(path);
}

int run_command(const harness::ExperimentPlan& plan, const std::string& config_path) {
  const auto config = resolve_config(config_path);
  auto on_run = [](const harness::PlanEntry& entry, const search::RunRecord& r) {
    if (!r.error.empty()) {
      std::printf("%s %s seed=%llu FAILED: %s\n", entry.mode.c_str(), entry.map.c_str(),
                  static_cast<unsigned long long>(r.seed), r.error.c_str());
    } else {
      std::printf("%s %s seed=%llu solved=%d evals=%lld hidden=%s seconds=%.1f\n", entry.mode.c_str(),
                  entry.map.c_str(), static_cast<unsigned long long>(r.seed), r.solved ? 1 : 0,
                  static_cast<long long>(r.evaluations_used),
                  r.solution_hidden_nodes ? std::to_string(*r.solution_hidden_nodes).c_str() : "-",
                  r.wall_clock_seconds);
    }
    std::fflush(stdout);
  };
  const auto results = harness::run_experiment(plan, config, on_run);
  std::vector<harness::SummaryRow> rows;
  int failures = 0;
  for (const auto& r : results) {
    rows.push_back({r.records.empty() ? r.entry.mode : r.records.front().mode, r.entry.map, r.stats});
    for (const auto& rec : r.records) failures += rec.error.empty() ? 0 : 1;
  }
  std::cout << '\n' << harness::summary_csv(rows);
  if (failures > 0) std::cout << failures << " run(s) failed; see their records\n";
  return failures > 0 ? 1 : 0;
}

int serve_command(const std::string& bind, const std::string& maps, const std::string& records,
                  const std::string& config_path) {
  const auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--bind", "expected HOST:PORT");
  const std::string host = bind.substr(0, colon);
  const int port = std::stoi(bind.substr(colon + 1));

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  harness::Service service({maps, records, resolve_config(config_path)});
  const int bound = service.start(host, port);
  std::printf("serving on %s:%d (maps %s, records %s)\n", host.c_str(), bound, maps.c_str(), records.c_str());
  std::fflush(stdout);
  int received = 0;
  sigwait(&signals, &received);
  std::printf("shutting down\n");
  service.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maze navigation experiments with NEAT, novelty search and interactive evolution"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (default: $NOVAMAZE_CONFIG)")->check(CLI::ExistingFile);

  harness::PlanEntry entry;
  harness::ExperimentPlan plan;
  plan.maps_dir = NOVAMAZE_MAPS_DIR;
  std::string maps_dir = NOVAMAZE_MAPS_DIR;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "Run seeded experiments and write records, scatter files and summary.csv");
  run->add_option("--mode", entry.mode, "fitness | novelty | waypoint | naiec-scripted")
      ->required()
      ->check(CLI::IsMember({"fitness", "novelty", "waypoint", "naiec-scripted"}));
  run->add_option("--map", entry.map, "Map name (file stem in the maps directory)")->required();
  run->add_option("--runs", entry.runs, "Number of runs")->default_val(30)->check(CLI::PositiveNumber);
  run->add_option("--budget", entry.budget, "Evaluation budget per run")->default_val(250000)->check(CLI::PositiveNumber);
  run->add_option("--seed", entry.base_seed, "Base seed; run i uses seed + i")->default_val(0);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--maps", maps_dir, "Map directory")->check(CLI::ExistingDirectory);
  run->add_option("--threads", plan.threads, "Runs executed in parallel")->default_val(1)->check(CLI::PositiveNumber);

  std::string stats_dir;
  bool csv = false;
  auto* stats = app.add_subcommand("stats", "Summarize the run records in a directory");
  stats->add_option("dir", stats_dir, "Output directory of a previous run")->required()->check(CLI::ExistingDirectory);
  stats->add_flag("--csv", csv, "Print the CSV summary table instead of the report");

  std::string bind = "127.0.0.1:8080";
  std::string serve_maps = NOVAMAZE_MAPS_DIR;
  std::string records_dir = "records";
  auto* serve = app.add_subcommand("serve", "Serve the interactive session API");
  serve->add_option("--bind", bind, "HOST:PORT")->default_val(bind);
  serve->add_option("--maps", serve_maps, "Map directory")->check(CLI::ExistingDirectory);
  serve->add_option("--records", records_dir, "Directory for published records")->default_val(records_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      plan.entries = {entry};
      plan.maps_dir = maps_dir;
      plan.out_dir = out_dir;
      return run_command(plan, config_path);
    }
    if (stats->parsed()) {
      if (csv) {
        std::cout << harness::summary_csv(harness::summarize_directory(stats_dir));
      } else {
        std::cout << harness::stats_report(stats_dir);
      }
      return 0;
    }
    return serve_command(bind, serve_maps, records_dir, config_path);
  } catch (const std::exception& e) {
    std::cerr << "novamaze: " << e.what() << '\n';
    return 2;
  }
}
