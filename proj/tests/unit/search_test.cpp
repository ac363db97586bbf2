#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include <doctest.h>

#include "novamaze/maze/map.hpp"
#include "novamaze/neat/operators.hpp"
#include "novamaze/search/engine.hpp"
#include "novamaze/search/record_store.hpp"
#include "novamaze/search/run_search.hpp"
#include "novamaze/search/statistics.hpp"

using namespace novamaze;
using namespace novamaze::search;

namespace {

maze::MazeMap shipped(const std::string& name) { return maze::load_named_map(NOVAMAZE_MAPS_DIR, name); }

// Open box with the goal a short drive ahead of the start.
maze::MazeMap easy_map() {
  return maze::load_map({{"version", 1},
                         {"name", "easy"},
                         {"bounds", {100, 100}},
                         {"start", {30, 50, 0.0}},
                         {"goal", {60, 50}},
                         {"waypoints", {{45, 50}}},
                         {"walls", {{0, 0, 100, 0}, {100, 0, 100, 100}, {100, 100, 0, 100}, {0, 100, 0, 0}}}});
}

RunRecord solved_record(std::int64_t evals, int hidden) {
  RunRecord r;
  r.solved = true;
  r.evaluations_used = evals;
  neat::InnovationRegistry reg;
  Rng rng(static_cast<std::uint64_t>(evals));
  r.solution = neat::init_genome({}, reg, rng);
  r.solution_hidden_nodes = hidden;
  r.wall_clock_seconds = 1.0;
  return r;
}

// Two-sided tail of Student's t by Simpson integration of the density.
double t_tail_oracle(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * std::numbers::pi);
  auto pdf = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const int n = 200000;
  const double a = 0.0, b = std::abs(t), h = (b - a) / n;
  double s = pdf(a) + pdf(b);
  for (int i = 1; i < n; ++i) s += pdf(a + i * h) * (i % 2 ? 4 : 2);
  return 1.0 - 2.0 * s * h / 3.0;
}

}  // namespace

TEST_CASE("search mode names") {
  for (const auto m : {SearchMode::kFitness, SearchMode::kNovelty, SearchMode::kWaypoint}) {
    CHECK(parse_search_mode(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_search_mode("random"), std::invalid_argument);
}

TEST_CASE("budget equal to the population evaluates one generation") {
  const auto map = shipped("medium");
  const EngineConfig config;
  for (const auto mode : {SearchMode::kFitness, SearchMode::kNovelty, SearchMode::kWaypoint}) {
    SearchOptions opt;
    opt.mode = mode;
    opt.budget = config.neat.population_size;
    opt.seed = 5;
    const RunRecord r = run_search(map, config, opt);
    CHECK(r.evaluations_used == config.neat.population_size);
    CHECK(r.final_positions.size() == static_cast<std::size_t>(config.neat.population_size));
    CHECK_NOTHROW(check_invariants(r));
  }
  SearchOptions small;
  small.budget = config.neat.population_size - 1;
  CHECK_THROWS_AS(run_search(map, config, small), std::invalid_argument);
}

TEST_CASE("runs are reproducible and never exceed the budget") {
  const auto map = shipped("hard");
  const EngineConfig config;
  for (const auto mode : {SearchMode::kFitness, SearchMode::kNovelty, SearchMode::kWaypoint}) {
    SearchOptions opt;
    opt.mode = mode;
    opt.budget = 1100;  // not a multiple of the population size
    opt.seed = 77;
    const RunRecord a = run_search(map, config, opt);
    const RunRecord b = run_search(map, config, opt);
    CHECK(canonical_content(a) == canonical_content(b));
    CHECK(a.evaluations_used <= opt.budget);
    if (!a.solved) CHECK(a.evaluations_used == opt.budget);
    CHECK(a.final_positions.size() == static_cast<std::size_t>(a.evaluations_used));
    if (mode == SearchMode::kNovelty) {
      CHECK_FALSE(a.threshold_history.empty());
    } else {
      CHECK(a.threshold_history.empty());
    }
    opt.seed = 78;
    CHECK(canonical_content(run_search(map, config, opt)) != canonical_content(a));
  }
}

TEST_CASE("progress sink sees every evaluation in order") {
  const auto map = shipped("medium");
  std::vector<std::int64_t> seen;
  SearchOptions opt;
  opt.budget = 500;
  run_search(map, {}, opt, {}, [&](std::int64_t n) { seen.push_back(n); });
  REQUIRE(seen.size() == 500);
  for (std::size_t i = 0; i < seen.size(); ++i) CHECK(seen[i] == static_cast<std::int64_t>(i + 1));
}

TEST_CASE("solutions replay and stop the run") {
  const auto map = easy_map();
  for (const auto mode : {SearchMode::kFitness, SearchMode::kNovelty, SearchMode::kWaypoint}) {
    SearchOptions opt;
    opt.mode = mode;
    opt.budget = 20000;
    opt.seed = 1;
    const RunRecord r = run_search(map, {}, opt);
    REQUIRE(r.solved);
    CHECK(r.solution_hidden_nodes == r.solution->hidden_count());
    CHECK(replays_solved(r, map, {}));
    CHECK(r.evaluations_used < opt.budget);
    CHECK_NOTHROW(check_invariants(r));
  }
}

TEST_CASE("stop before the first generation") {
  std::stop_source stop;
  stop.request_stop();
  SearchOptions opt;
  opt.budget = 5000;
  const RunRecord r = run_search(shipped("medium"), {}, opt, stop.get_token());
  CHECK_FALSE(r.solved);
  CHECK(r.evaluations_used < 250);
  CHECK(r.final_positions.empty());

  std::stop_source later;
  std::int64_t spent = 0;
  const RunRecord partial = run_search(shipped("medium"), {}, opt, later.get_token(), [&](std::int64_t n) {
    spent = n;
    if (n == 100) later.request_stop();
  });
  CHECK(partial.evaluations_used == spent);
  CHECK(partial.evaluations_used == 100);
  CHECK_FALSE(partial.solved);
}

TEST_CASE("fitness mode never touches the archive") {
  const auto map = shipped("medium");
  const EngineConfig config;
  Rng rng(3);
  neat::InnovationRegistry reg;
  novelty::NoveltyArchive archive(config.novelty);
  maze::Evaluator ev(map, config.robot);
  EvolutionContext ctx{map, config, ev, reg, archive, rng};
  auto pop = random_population(250, config.neat, reg, rng);
  const auto out = evolve(ctx, pop, SearchMode::kFitness, {750, false});
  CHECK(out.evaluations == 750);
  CHECK(archive.size() == 0);
  CHECK(archive.evals_since_adjust() == 0);

  const auto fed = evolve(ctx, pop, SearchMode::kFitness, {250, true}, [](const GenerationView& v) {
    for (const auto& ind : v.individuals) {
      CHECK(ind.score == ind.fitness);
    }
    return true;
  });
  CHECK(archive.evals_since_adjust() == 250);
  CHECK(fed.generations == 1);
}

TEST_CASE("novelty mode selects on sparseness") {
  const auto map = shipped("medium");
  const EngineConfig config;
  Rng rng(4);
  neat::InnovationRegistry reg;
  novelty::NoveltyArchive archive(config.novelty);
  maze::Evaluator ev(map, config.robot);
  EvolutionContext ctx{map, config, ev, reg, archive, rng};
  int gens = 0;
  evolve(ctx, random_population(250, config.neat, reg, rng), SearchMode::kNovelty, {500, false},
         [&](const GenerationView& v) {
           ++gens;
           for (const auto& ind : v.individuals) CHECK(ind.score == ind.novelty);
           return true;
         });
  CHECK(gens == 2);
  CHECK(archive.size() > 0);
}

TEST_CASE("hook can end the search") {
  const auto map = shipped("medium");
  const EngineConfig config;
  Rng rng(4);
  neat::InnovationRegistry reg;
  novelty::NoveltyArchive archive(config.novelty);
  maze::Evaluator ev(map, config.robot);
  EvolutionContext ctx{map, config, ev, reg, archive, rng};
  const auto out = evolve(ctx, random_population(250, config.neat, reg, rng), SearchMode::kWaypoint, {5000, false},
                          [](const GenerationView&) { return false; });
  CHECK(out.reason == StopReason::kHook);
  CHECK(out.evaluations == 250);
}

TEST_CASE("seeded pool keeps seeds and cycles mutations") {
  const neat::NeatConfig config;
  neat::InnovationRegistry reg;
  Rng rng(9);
  const auto seeds = random_population(3, config, reg, rng);
  const auto pool = seeded_pool(seeds, 250, config, reg, rng);
  REQUIRE(pool.size() == 250);
  for (std::size_t i = 0; i < seeds.size(); ++i) CHECK(pool[i] == seeds[i]);
  std::set<std::int64_t> ids;
  for (const auto& g : pool) ids.insert(g.id);
  CHECK(ids.size() == 250);
  for (const auto& g : pool) CHECK_NOTHROW(neat::validate(g));
}

TEST_CASE("aggregate statistics") {
  std::vector<RunRecord> three{solved_record(10, 1), solved_record(20, 2), solved_record(30, 3)};
  const auto s = run_statistics(three);
  CHECK(s.runs == 3);
  CHECK(s.successes == 3);
  CHECK(*s.mean_evaluations == doctest::Approx(20));
  CHECK(*s.sd_evaluations == doctest::Approx(10));
  CHECK(*s.mean_hidden == doctest::Approx(2));
  CHECK(s.mean_seconds == doctest::Approx(1.0));

  std::vector<RunRecord> thirty;
  for (int i = 0; i < 26; ++i) {
    RunRecord r;
    r.evaluations_used = 250000;
    thirty.push_back(r);
  }
  for (int i = 0; i < 4; ++i) thirty.push_back(solved_record(1000 * (i + 1), i));
  const auto f = run_statistics(thirty);
  CHECK(f.runs == 30);
  CHECK(f.successes == 4);
  CHECK(*f.mean_evaluations == doctest::Approx(2500));
  CHECK(successful_evaluations(thirty).size() == 4);

  std::vector<RunRecord> dup{solved_record(40, 2), solved_record(40, 2)};
  CHECK(*run_statistics(dup).sd_evaluations == 0.0);

  std::vector<RunRecord> none(5);
  const auto z = run_statistics(none);
  CHECK(z.successes == 0);
  CHECK_FALSE(z.mean_evaluations.has_value());
  CHECK_FALSE(z.sd_evaluations.has_value());
  CHECK_FALSE(z.mean_hidden.has_value());

  std::vector<RunRecord> one{solved_record(7, 1)};
  CHECK(*run_statistics(one).mean_evaluations == 7);
  CHECK_FALSE(run_statistics(one).sd_evaluations.has_value());

  CHECK_THROWS_AS(run_statistics(std::vector<RunRecord>{}), std::invalid_argument);
}

TEST_CASE("descriptive helpers") {
  const std::vector<double> odd{3, 1, 2};
  const std::vector<double> even{4, 1, 3, 2};
  CHECK(median(odd) == 2);
  CHECK(median(even) == 2.5);
  CHECK(mean(even) == 2.5);
  CHECK(sample_sd(std::vector<double>{2, 4, 4, 4, 5, 5, 7, 9}) == doctest::Approx(std::sqrt(32.0 / 7.0)));
}

TEST_CASE("Welch t-test against an independent computation") {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 4, 6, 8, 10};
  const auto w = welch_t_test(a, b);
  CHECK(w.t == doctest::Approx(-3.0 / std::sqrt(2.5)).epsilon(1e-12));
  CHECK(w.df == doctest::Approx(6.25 / (0.0625 + 1.0)).epsilon(1e-12));
  CHECK(w.p_two_sided == doctest::Approx(t_tail_oracle(w.t, w.df)).epsilon(1e-6));

  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 8 + trial; ++i) x.push_back(rng.uniform(0, 10));
    for (int i = 0; i < 5 + 2 * trial; ++i) y.push_back(rng.uniform(2, 15));
    const auto r = welch_t_test(x, y);
    CHECK(r.p_two_sided == doctest::Approx(t_tail_oracle(r.t, r.df)).epsilon(1e-6));
    CHECK(welch_t_test(y, x).t == doctest::Approx(-r.t));
  }
  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1}, b), std::invalid_argument);
}

TEST_CASE("run records round-trip and enforce invariants") {
  RunRecord r = solved_record(1234, 2);
  r.mode = "novelty";
  r.map_name = "medium";
  r.budget = 250000;
  r.final_positions = {{1, 2}, {3, 4}};
  r.threshold_history = {3.0, 2.85};
  r.events = {{0.5, "novelty", {1, 2}, 12, 400}};
  const RunRecord back = run_record_from_json(to_json(r));
  CHECK(canonical_content(back) == canonical_content(r));
  CHECK(back.events == r.events);

  RunRecord over = r;
  over.evaluations_used = 250001;
  CHECK_THROWS_AS(check_invariants(over), std::logic_error);
  RunRecord missing = r;
  missing.solution.reset();
  CHECK_THROWS_AS(check_invariants(missing), std::logic_error);

  std::vector<SessionEvent> log;
  for (int i = 0; i < 15; ++i) log.push_back({0, "novelty", {}, 0, 0});
  for (int i = 0; i < 10; ++i) log.push_back({0, "step", {}, 0, 0});
  for (int i = 0; i < 5; ++i) log.push_back({0, "optimize", {}, 0, 0});
  log.push_back({0, "select", {}, 0, 0});
  const auto shares = operation_shares(log);
  CHECK(shares.at("novelty") == doctest::Approx(50.0));
  CHECK(shares.at("step") == doctest::Approx(100.0 / 3));
}

TEST_CASE("record store persists and reloads") {
  const auto dir = std::filesystem::temp_directory_path() / "novamaze-store-test";
  std::filesystem::remove_all(dir);
  {
    RecordStore store(dir);
    RunRecord a = solved_record(5, 1);
    a.mode = "fitness";
    const RunRecord saved = store.save(a);
    CHECK(saved.record_id == "record-000001");
    const RunRecord second = store.save(a);
    CHECK(second.record_id == "record-000002");
    RunRecord named = a;
    named.record_id = "custom";
    store.save_as(named);
    named.evaluations_used = 6;
    store.save_as(named);
    CHECK(store.load("custom").evaluations_used == 6);
    CHECK(store.ids().size() == 3);
  }
  RecordStore reopened(dir);
  CHECK(reopened.load_all().size() == 3);
  CHECK(reopened.save(solved_record(1, 0)).record_id == "record-000003");
  CHECK_THROWS(reopened.load("absent"));
  std::filesystem::remove_all(dir);
}
