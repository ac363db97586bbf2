#include "novamaze/session/session.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "novamaze/neat/operators.hpp"

namespace novamaze::session {

void SessionConfig::validate() const {
  if (n < 2) throw std::invalid_argument("session population size n must be at least 2");
  if (pool_size < n) throw std::invalid_argument("pool size must be at least n");
  if (novelty_eval_cap < 1) throw std::invalid_argument("novelty eval cap must be positive");
  if (!(stall_decay > 0.0 && stall_decay < 1.0)) throw std::invalid_argument("stall decay must be in (0, 1)");
  if (budget < n) throw std::invalid_argument("session budget must cover the initial population");
}

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kAwaitingSelection: return "awaiting-selection";
    case Status::kRunningNovelty: return "running-novelty";
    case Status::kRunningOptimize: return "running-optimize";
    case Status::kSolved: return "solved";
    case Status::kBudgetExhausted: return "budget-exhausted";
  }
  return "awaiting-selection";
}

Session::Session(const maze::MazeMap& map, const search::EngineConfig& engine, const SessionConfig& config)
    : map_(map),
      engine_(engine),
      config_(config),
      rng_(config.seed),
      archive_(engine.novelty),
      evaluator_(map_, engine.robot),
      created_(std::chrono::steady_clock::now()) {
  config_.validate();
  engine_.validate();
  fill_random_screen();
  settle_status();
}

void Session::require_operable(std::string_view op) const {
  if (status_ != Status::kAwaitingSelection) {
    throw std::logic_error(std::string(op) + " needs status awaiting-selection, session is " +
                           std::string(to_string(status_)));
  }
  if (selection_.empty()) throw std::invalid_argument(std::string(op) + " needs a nonempty selection");
  if (budget_remaining() <= 0) throw std::logic_error("session budget exhausted");
}

std::vector<neat::Genome> Session::selected_genomes() const {
  std::vector<neat::Genome> out;
  for (const auto& c : screen_) {
    if (std::find(selection_.begin(), selection_.end(), c.id()) != selection_.end()) out.push_back(c.genome);
  }
  return out;
}

Candidate Session::evaluate(const neat::Genome& genome) {
  maze::Evaluation e = evaluator_.evaluate(genome);
  Candidate c{genome, std::move(e.trajectory), e.behavior, 0.0, maze::goal_distance_fitness(e.behavior, map_)};
  final_positions_.push_back(c.behavior);
  if (c.solved() && !solution_) solution_ = c;
  return c;
}

Candidate Session::adopt(const search::Individual& ind) {
  return {ind.genome, ind.evaluation.trajectory, ind.evaluation.behavior, ind.novelty, ind.fitness};
}

void Session::score_new(std::vector<Candidate>& screen, std::size_t first_new) {
  std::vector<BehaviorDescriptor> behaviors;
  for (const auto& c : screen) behaviors.push_back(c.behavior);
  for (std::size_t i = first_new; i < screen.size(); ++i) {
    screen[i].novelty = novelty::sparseness(behaviors[i], behaviors, i, archive_);
  }
  for (std::size_t i = first_new; i < screen.size(); ++i) archive_.maybe_archive(behaviors[i], screen[i].novelty);
  if (archive_.adjust_due()) archive_.adjust_threshold();
}

void Session::fill_random_screen() {
  std::vector<Candidate> screen;
  for (int i = 0; i < config_.n; ++i) screen.push_back(evaluate(neat::init_genome(engine_.neat, registry_, rng_)));
  score_new(screen, 0);
  screen_ = std::move(screen);
}

void Session::log(std::string_view op, std::vector<std::int64_t> ids, std::int64_t before) {
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - created_).count();
  events_.push_back({t, std::string(op), std::move(ids), before, evaluations_used()});
}

void Session::settle_status() {
  if (solution_) {
    status_ = Status::kSolved;
  } else if (budget_remaining() <= 0) {
    status_ = Status::kBudgetExhausted;
  } else {
    status_ = Status::kAwaitingSelection;
  }
}

void Session::select(std::span<const std::int64_t> ids) {
  if (status_ == Status::kRunningNovelty || status_ == Status::kRunningOptimize) {
    throw std::logic_error("cannot select while an operation is running");
  }
  if (ids.empty()) throw std::invalid_argument("selection must be nonempty");
  std::vector<std::int64_t> chosen;
  for (const auto id : ids) {
    const bool on_screen = std::any_of(screen_.begin(), screen_.end(), [&](const Candidate& c) { return c.id() == id; });
    if (!on_screen) throw std::invalid_argument("candidate " + std::to_string(id) + " is not on screen");
  }
  for (const auto& c : screen_) {
    if (std::find(ids.begin(), ids.end(), c.id()) != ids.end()) chosen.push_back(c.id());
  }
  selection_ = chosen;
  log("select", std::move(chosen), evaluations_used());
}

void Session::step() {
  require_operable("step");
  if (budget_remaining() < config_.n) throw std::logic_error("step needs at least n evaluations of budget left");
  const std::int64_t before = evaluations_used();

  std::vector<Candidate> next;
  for (const auto& c : screen_) {
    if (std::find(selection_.begin(), selection_.end(), c.id()) != selection_.end()) next.push_back(c);
  }
  const std::size_t parents = next.size();
  while (next.size() < static_cast<std::size_t>(config_.n)) {
    neat::Genome child;
    if (parents >= 2) {
      const std::size_t a = rng_.index(parents);
      std::size_t b = rng_.index(parents - 1);
      if (b >= a) ++b;
      const auto fitter = rng_.bernoulli(0.5) ? neat::FitterParent::kA : neat::FitterParent::kB;
      child = neat::crossover(next[a].genome, next[b].genome, fitter, engine_.neat, rng_);
      child = neat::mutate(child, engine_.neat, registry_, rng_);
    } else {
      child = neat::mutate(next[0].genome, engine_.neat, registry_, rng_);
    }
    child.id = registry_.next_genome_id();
    child.species_id.reset();
    next.push_back(evaluate(child));
  }
  score_new(next, parents);
  screen_ = std::move(next);
  log("step", std::move(selection_), before);
  selection_.clear();
  settle_status();
}

void Session::finish(std::string_view op, std::int64_t before, const ProgressCallback& progress, int collected) {
  if (progress) progress({op, evaluations_used(), evaluations_used() - before, collected});
}

void Session::novelty(std::stop_token stop, const ProgressCallback& progress) {
  require_operable("novelty");
  const std::int64_t before = evaluations_used();
  status_ = Status::kRunningNovelty;

  const auto seeds = selected_genomes();
  auto pool = search::seeded_pool(seeds, static_cast<std::size_t>(config_.pool_size), engine_.neat, registry_, rng_);
  const std::int64_t limit = budget_remaining();
  const auto n = static_cast<std::size_t>(config_.n);

  std::vector<Candidate> collected;
  std::unordered_set<std::int64_t> collected_ids;
  std::vector<Candidate> leftovers;  // most novel uncollected of the last generation
  std::int64_t decay_mark = 0;

  auto hook = [&](const search::GenerationView& view) {
    for (const auto& ind : view.individuals) {
      final_positions_.push_back(ind.evaluation.behavior);
      if ((ind.archived || ind.solved()) && collected_ids.insert(ind.genome.id).second) {
        collected.push_back(adopt(ind));
      }
    }
    const bool last = !view.complete || view.evaluations >= limit || collected.size() >= n ||
                      std::any_of(view.individuals.begin(), view.individuals.end(),
                                  [](const search::Individual& i) { return i.solved(); });
    if (last) {
      leftovers.clear();
      for (const auto& ind : view.individuals) {
        if (!collected_ids.contains(ind.genome.id)) leftovers.push_back(adopt(ind));
      }
      std::stable_sort(leftovers.begin(), leftovers.end(),
                       [](const Candidate& a, const Candidate& b) { return a.novelty > b.novelty; });
    }
    if (collected.size() >= n) return false;
    if (view.evaluations - decay_mark >= config_.novelty_eval_cap) {
      archive_.scale_threshold(config_.stall_decay);
      decay_mark = view.evaluations;
    }
    return true;
  };
  auto sink = [&](std::int64_t e) {
    if (progress && e % kProgressInterval == 0) {
      progress({"novelty", before + e, e, static_cast<int>(collected.size())});
    }
  };

  search::EvolutionContext ctx{map_, engine_, evaluator_, registry_, archive_, rng_};
  const auto outcome = search::evolve(ctx, std::move(pool), search::SearchMode::kNovelty, {limit, true}, hook, sink, stop);

  if (outcome.reason == search::StopReason::kCancelled) {
    status_ = Status::kAwaitingSelection;
    log("novelty", selection_, before);
    finish("novelty", before, progress, static_cast<int>(collected.size()));
    return;
  }
  if (outcome.solution && !solution_) solution_ = adopt(*outcome.solution);

  auto by_novelty = [](const Candidate& a, const Candidate& b) { return a.novelty > b.novelty; };
  std::stable_sort(collected.begin(), collected.end(), by_novelty);
  std::vector<Candidate> next;
  if (outcome.solution) {
    const auto solver = std::find_if(collected.begin(), collected.end(),
                                     [&](const Candidate& c) { return c.id() == outcome.solution->genome.id; });
    next.push_back(*solver);
    collected.erase(solver);
  }
  for (auto& c : collected) {
    if (next.size() >= n) break;
    next.push_back(std::move(c));
  }
  for (auto& c : leftovers) {
    if (next.size() >= n) break;
    next.push_back(std::move(c));
  }
  std::stable_sort(next.begin(), next.end(), by_novelty);
  if (!next.empty()) screen_ = std::move(next);

  log("novelty", std::move(selection_), before);
  selection_.clear();
  settle_status();
  finish("novelty", before, progress, static_cast<int>(std::min(collected_ids.size(), n)));
}

void Session::optimize(std::stop_token stop, const ProgressCallback& progress) {
  require_operable("optimize");
  const std::int64_t before = evaluations_used();
  status_ = Status::kRunningOptimize;

  const auto seeds = selected_genomes();
  auto pool = search::seeded_pool(seeds, static_cast<std::size_t>(config_.pool_size), engine_.neat, registry_, rng_);
  const std::int64_t limit = budget_remaining();
  const auto n = static_cast<std::size_t>(config_.n);

  // Fittest distinct genomes seen so far, best first.
  std::vector<Candidate> best;
  auto by_fitness = [](const Candidate& a, const Candidate& b) { return a.fitness > b.fitness; };
  auto hook = [&](const search::GenerationView& view) {
    for (const auto& ind : view.individuals) {
      final_positions_.push_back(ind.evaluation.behavior);
      if (best.size() == n && ind.fitness <= best.back().fitness) continue;
      if (std::any_of(best.begin(), best.end(), [&](const Candidate& c) { return c.id() == ind.genome.id; })) continue;
      const auto at = std::upper_bound(best.begin(), best.end(), adopt(ind), by_fitness);
      best.insert(at, adopt(ind));
      if (best.size() > n) best.pop_back();
    }
    return true;
  };
  auto sink = [&](std::int64_t e) {
    if (progress && e % kProgressInterval == 0) progress({"optimize", before + e, e, 0});
  };

  search::EvolutionContext ctx{map_, engine_, evaluator_, registry_, archive_, rng_};
  const auto outcome = search::evolve(ctx, std::move(pool), search::SearchMode::kFitness, {limit, true}, hook, sink, stop);

  if (outcome.reason == search::StopReason::kCancelled && outcome.generations == 0) {
    status_ = Status::kAwaitingSelection;
    log("optimize", selection_, before);
    finish("optimize", before, progress, 0);
    return;
  }
  if (outcome.solution && !solution_) solution_ = adopt(*outcome.solution);
  if (!best.empty()) screen_ = std::move(best);

  log("optimize", std::move(selection_), before);
  selection_.clear();
  settle_status();
  finish("optimize", before, progress, 0);
}

void Session::restart() {
  if (status_ != Status::kAwaitingSelection) {
    throw std::logic_error("restart needs status awaiting-selection, session is " + std::string(to_string(status_)));
  }
  if (budget_remaining() < config_.n) throw std::logic_error("restart needs at least n evaluations of budget left");
  const std::int64_t before = evaluations_used();
  fill_random_screen();
  ++restarts_;
  selection_.clear();
  log("restart", {}, before);
  settle_status();
}

search::RunRecord Session::publish() {
  search::RunRecord record;
  record.mode = "naiec";
  record.map_name = map_.name;
  record.seed = config_.seed;
  record.budget = config_.budget;
  record.evaluations_used = evaluations_used();
  if (solution_) {
    record.solved = true;
    record.solution = solution_->genome;
    record.solution_hidden_nodes = solution_->genome.hidden_count();
  }
  record.final_positions = final_positions_;
  record.threshold_history = archive_.threshold_history();
  record.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - created_).count();
  // Earlier publishes are left out so repeated publishes store equal content.
  std::copy_if(events_.begin(), events_.end(), std::back_inserter(record.events),
               [](const search::SessionEvent& e) { return e.op != "publish"; });
  record.restarts = restarts_;
  search::check_invariants(record);
  log("publish", {}, evaluations_used());
  return record;
}

search::RunRecord Session::publish(search::RecordStore& store) {
  search::RunRecord record = publish();
  return store.save(std::move(record));
}

std::string_view to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::kRandom: return "random";
    case SelectorKind::kGreedyGoal: return "greedy-goal";
    case SelectorKind::kWaypointOracle: return "waypoint-oracle";
  }
  return "random";
}

SelectorKind parse_selector_kind(std::string_view name) {
  if (name == "random") return SelectorKind::kRandom;
  if (name == "greedy-goal") return SelectorKind::kGreedyGoal;
  if (name == "waypoint-oracle") return SelectorKind::kWaypointOracle;
  throw std::invalid_argument("unknown selector policy '" + std::string(name) + "'");
}

std::vector<std::int64_t> scripted_select(const SelectorPolicy& policy, const Session& session, Rng& rng) {
  if (policy.count < 1) throw std::invalid_argument("selection count must be positive");
  const auto& screen = session.population();
  std::vector<std::size_t> order(screen.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  switch (policy.kind) {
    case SelectorKind::kRandom:
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
      break;
    case SelectorKind::kGreedyGoal: {
      std::vector<double> d;
      for (const auto& c : screen) d.push_back(distance(c.behavior, session.map().goal));
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
      break;
    }
    case SelectorKind::kWaypointOracle: {
      std::vector<double> f;
      const double radius = session.engine().robot.solve_radius;
      for (const auto& c : screen) f.push_back(maze::waypoint_fitness(c.trajectory, session.map(), radius));
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] > f[b]; });
      break;
    }
  }
  order.resize(std::min(order.size(), static_cast<std::size_t>(policy.count)));
  std::vector<std::int64_t> ids;
  for (const auto i : order) ids.push_back(screen[i].id());
  return ids;
}

}  // namespace novamaze::session
