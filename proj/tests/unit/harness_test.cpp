#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <doctest.h>
#include <httplib.h>

#include "novamaze/harness/config.hpp"
#include "novamaze/harness/experiment.hpp"
#include "novamaze/harness/service.hpp"
#include "novamaze/search/run_search.hpp"

using namespace novamaze;
using namespace novamaze::harness;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("novamaze-" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// summary.csv without the timing column.
std::string untimed(const std::string& csv) {
  std::stringstream in(csv), out;
  std::string line;
  while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
  return out.str();
}

json body_of(const httplib::Result& r) {
  REQUIRE(r);
  return json::parse(r->body);
}

struct Running {
  Service service;
  int port;
  httplib::Client client;
  Running(const fs::path& records, HarnessConfig config = {})
      : service({NOVAMAZE_MAPS_DIR, records, config}), port(service.start("127.0.0.1", 0)), client("127.0.0.1", port) {
    client.set_read_timeout(60, 0);
  }
  ~Running() { service.stop(); }

  httplib::Result post(const std::string& path, const json& body = json::object()) {
    return client.Post(path, body.dump(), "application/json");
  }

  json wait_idle(const std::string& id) {
    for (int i = 0; i < 6000; ++i) {
      json p = body_of(client.Get("/api/sessions/" + id));
      if (!p["status"].get<std::string>().starts_with("running")) return p;
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
    FAIL("operation did not finish");
    return {};
  }
};

}  // namespace

TEST_CASE("config overlays JSON onto defaults") {
  const HarnessConfig d = config_from_json(json::object());
  CHECK(d.session.n == 12);
  CHECK(d.engine.neat.population_size == 250);
  CHECK(d.engine.novelty.k == 15);

  const auto c = config_from_json({{"neat", {{"population_size", 100}}},
                                   {"novelty", {{"k", 5}}},
                                   {"robot", {{"slide", true}}},
                                   {"script", {{"policy", "greedy-goal"}, {"count", 4}}}});
  CHECK(c.engine.neat.population_size == 100);
  CHECK(c.engine.neat.add_node_prob == d.engine.neat.add_node_prob);
  CHECK(c.engine.novelty.k == 5);
  CHECK(c.engine.robot.slide);
  CHECK(c.script.policy.kind == session::SelectorKind::kGreedyGoal);
  CHECK(c.script.policy.count == 4);

  CHECK(to_json(config_from_json(to_json(c))) == to_json(c));

  CHECK_THROWS_AS(config_from_json({{"neat", {{"population", 1}}}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json({{"genetics", json::object()}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json({{"novelty", {{"k", "many"}}}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json({{"novelty", {{"k", 0}}}}), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json({{"script", {{"policy", "psychic"}}}}), std::invalid_argument);
}

TEST_CASE("config file from the environment") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  const fs::path file = dir / "cfg.json";
  std::ofstream(file) << R"({"session": {"n": 6}})";
  ::setenv(kConfigEnvVar, file.c_str(), 1);
  CHECK(config_from_env().session.n == 6);
  ::unsetenv(kConfigEnvVar);
  CHECK(config_from_env().session.n == 12);
  CHECK_THROWS(load_config(dir / "absent.json"));
  fs::remove_all(dir);
}

TEST_CASE("scripted sessions are reproducible and valid") {
  const auto map = maze::load_named_map(NOVAMAZE_MAPS_DIR, "medium");
  HarnessConfig config;
  config.session.budget = 3000;
  const auto a = run_scripted_session(map, config, 4);
  const auto b = run_scripted_session(map, config, 4);
  CHECK(a.mode == "naiec");
  CHECK(a.evaluations_used <= 3000);
  CHECK(search::canonical_content(a) == search::canonical_content(b));
  CHECK_NOTHROW(search::check_invariants(a));
  CHECK(!a.events.empty());
  CHECK(a.events.front().op == "select");
  if (a.solved) CHECK(search::replays_solved(a, map, config.engine));
}

TEST_CASE("run_one reports failures instead of throwing") {
  const auto map = maze::load_named_map(NOVAMAZE_MAPS_DIR, "medium");
  const auto r = run_one("fitness", map, {}, 10, 0);
  CHECK_FALSE(r.error.empty());
  CHECK_THROWS_AS(validate_mode("genetic"), std::invalid_argument);
  CHECK_NOTHROW(validate_mode("naiec-scripted"));
}

TEST_CASE("experiment writes records, scatter files and a summary") {
  const fs::path out = scratch("experiment");
  ExperimentPlan plan;
  plan.maps_dir = NOVAMAZE_MAPS_DIR;
  plan.out_dir = out;
  plan.threads = 2;
  plan.entries = {{"fitness", "medium", 1, 500, 3}, {"novelty", "hard", 2, 500, 7}};
  const auto results = run_experiment(plan, {});
  REQUIRE(results.size() == 2);
  CHECK(results[0].records.size() == 1);
  CHECK(results[1].records.size() == 2);
  CHECK(results[1].records[0].seed == 7);
  CHECK(results[1].records[1].seed == 8);
  CHECK(fs::exists(out / "records" / "fitness-medium-3.json"));
  CHECK(fs::exists(out / "records" / "novelty-hard-8.json"));
  const std::string scatter = slurp(out / "scatter" / "novelty-hard-7.csv");
  CHECK(scatter.starts_with("x,y\n"));
  CHECK(std::count(scatter.begin(), scatter.end(), '\n') == 1 + results[1].records[0].evaluations_used);

  const std::string summary = slurp(out / "summary.csv");
  CHECK(summary.starts_with(std::string(kSummaryHeader) + "\n"));
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 3);

  const fs::path again = scratch("experiment-again");
  plan.out_dir = again;
  run_experiment(plan, {});
  CHECK(untimed(slurp(again / "summary.csv")) == untimed(summary));
  CHECK(search::canonical_content(
            search::run_record_from_json(json::parse(slurp(again / "records" / "novelty-hard-8.json")))) ==
        search::canonical_content(results[1].records[1]));

  const auto rows = summarize_directory(out);
  REQUIRE(rows.size() == 2);
  CHECK(stats_report(out).find("fitness") != std::string::npos);
  fs::remove_all(out);
  fs::remove_all(again);
}

TEST_CASE("summary CSV leaves absent statistics empty") {
  SummaryRow row{"fitness", "hard", {}};
  row.stats.runs = 30;
  row.stats.mean_seconds = 1.5;
  const std::string csv = summary_csv({row});
  CHECK(csv == std::string(kSummaryHeader) + "\nfitness,hard,30,0,,,,,1.500\n");
}

TEST_CASE("trail downsampling keeps the ends") {
  maze::Trajectory t;
  for (int i = 0; i <= 400; ++i) t.states.push_back({{static_cast<double>(i), 0.0}, 0, 0, 0});
  const auto trail = downsample_trail(t);
  CHECK(trail.size() <= kMaxTrailPoints);
  CHECK(trail.front().x == 0.0);
  CHECK(trail.back().x == 400.0);
  maze::Trajectory shorter;
  for (int i = 0; i < 10; ++i) shorter.states.push_back({{static_cast<double>(i), 0.0}, 0, 0, 0});
  CHECK(downsample_trail(shorter).size() == 10);
}

TEST_CASE("service: maps and session lifecycle over HTTP") {
  const fs::path records = scratch("service");
  Running srv(records);
  auto& cli = srv.client;

  CHECK(body_of(cli.Get("/api/maps")) == json::array({"hard", "medium"}));
  const json medium = body_of(cli.Get("/api/maps/medium"));
  CHECK(medium["name"] == "medium");
  CHECK(cli.Get("/api/maps/nowhere")->status == 404);

  CHECK(srv.post("/api/sessions", {{"map", "nowhere"}})->status == 404);
  CHECK(srv.post("/api/sessions", json::object())->status == 400);
  CHECK(cli.Post("/api/sessions", "not json", "application/json")->status == 400);

  const auto created = srv.post("/api/sessions", {{"map", "medium"}, {"seed", 3}});
  REQUIRE(created->status == 201);
  const json pop = json::parse(created->body);
  const std::string id = pop["session"];
  REQUIRE(pop["candidates"].size() == 12);
  CHECK(pop["evals"] == 12);
  CHECK(pop["status"] == "awaiting-selection");
  for (const auto& c : pop["candidates"]) {
    CHECK(c["trail"].size() <= kMaxTrailPoints);
    CHECK(c.contains("novelty"));
    CHECK(c.contains("solved"));
  }
  const std::string base = "/api/sessions/" + id;
  CHECK(cli.Get("/api/sessions/none")->status == 404);

  CHECK(srv.post(base + "/step")->status == 400);
  CHECK(srv.post(base + "/novelty")->status == 400);
  CHECK(srv.post(base + "/select", {{"ids", {123456}}})->status == 400);
  CHECK(srv.post(base + "/cancel")->status == 409);

  const auto a = pop["candidates"][0]["id"].get<std::int64_t>();
  const auto b = pop["candidates"][1]["id"].get<std::int64_t>();
  REQUIRE(srv.post(base + "/select", {{"ids", {a, b}}})->status == 200);
  CHECK(body_of(cli.Get(base))["selection"] == json::array({a, b}));
  const auto stepped = srv.post(base + "/step");
  REQUIRE(stepped->status == 200);
  CHECK(json::parse(stepped->body)["evals"] == 22);

  const json after_step = body_of(cli.Get(base));
  const auto c0 = after_step["candidates"][0]["id"].get<std::int64_t>();
  REQUIRE(srv.post(base + "/select", {{"ids", {c0}}})->status == 200);
  const auto started = srv.post(base + "/novelty");
  REQUIRE(started->status == 202);
  const json done = srv.wait_idle(id);
  REQUIRE(done["candidates"].size() == 12);
  for (std::size_t i = 1; i < 12; ++i) {
    CHECK(done["candidates"][i - 1]["novelty"].get<double>() >= done["candidates"][i]["novelty"].get<double>());
  }

  const json messages = body_of(cli.Get(base + "/messages?since=0"));
  std::int64_t last = 0;
  int progress = 0;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    const auto& m = messages[i];
    CHECK(m["seq"] == i);
    CHECK(m["session"] == id);
    CHECK(m["evals"].get<std::int64_t>() >= last);
    last = m["evals"];
    if (m["type"] == "progress") ++progress;
  }
  CHECK(progress >= 1);
  CHECK(messages.back()["type"] == "population");
  CHECK(body_of(cli.Get(base + "/messages?since=" + std::to_string(messages.size()))).empty());

  const auto restarted = srv.post(base + "/restart");
  REQUIRE(restarted->status == 200);
  CHECK(json::parse(restarted->body)["restarts"] == 1);

  const auto published = srv.post(base + "/publish");
  REQUIRE(published->status == 200);
  const std::string record_id = json::parse(published->body)["record_id"];
  CHECK(fs::exists(records / (record_id + ".json")));
  fs::remove_all(records);
}

TEST_CASE("service: cancel stops a background search") {
  const fs::path records = scratch("service-cancel");
  HarnessConfig config;
  config.engine.novelty.initial_threshold = 1e6;  // the search never finishes on its own
  Running srv(records, config);
  const json pop = body_of(srv.post("/api/sessions", {{"map", "hard"}}));
  const std::string base = "/api/sessions/" + pop["session"].get<std::string>();
  const auto before = pop["candidates"];
  srv.post(base + "/select", {{"ids", {pop["candidates"][0]["id"]}}});
  REQUIRE(srv.post(base + "/novelty")->status == 202);
  CHECK(srv.post(base + "/step")->status == 409);
  CHECK(srv.post(base + "/novelty")->status == 409);
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  CHECK(srv.post(base + "/cancel")->status == 202);
  const json after = srv.wait_idle(pop["session"]);
  CHECK(after["status"] == "awaiting-selection");
  CHECK(after["candidates"] == before);
  CHECK(after["evals"].get<std::int64_t>() > 12);
  fs::remove_all(records);
}

TEST_CASE("service: concurrent sessions stay independent") {
  const fs::path records = scratch("service-pair");
  Running srv(records);
  std::vector<std::string> ids;
  for (int i = 0; i < 2; ++i) {
    const json pop = body_of(srv.post("/api/sessions", {{"map", "medium"}, {"seed", 40 + i}}));
    ids.push_back(pop["session"]);
    srv.post("/api/sessions/" + ids.back() + "/select", {{"ids", {pop["candidates"][0]["id"]}}});
  }
  CHECK(ids[0] != ids[1]);
  for (const auto& id : ids) REQUIRE(srv.post("/api/sessions/" + id + "/novelty")->status == 202);
  std::vector<json> done;
  for (const auto& id : ids) done.push_back(srv.wait_idle(id));
  for (const auto& d : done) CHECK(d["candidates"].size() == 12);

  // Each ledger matches a session driven alone with the same seed.
  const auto map = maze::load_named_map(NOVAMAZE_MAPS_DIR, "medium");
  for (int i = 0; i < 2; ++i) {
    session::SessionConfig sc;
    sc.seed = 40 + i;
    session::Session alone(map, {}, sc);
    alone.select(std::vector<std::int64_t>{alone.population()[0].id()});
    alone.novelty();
    CHECK(done[i]["evals"] == alone.evaluations_used());
    CHECK(done[i]["candidates"][0]["id"] == alone.population()[0].id());
  }
  fs::remove_all(records);
}

TEST_CASE("service: the push stream delivers messages") {
  const fs::path records = scratch("service-stream");
  Running srv(records);
  const json pop = body_of(srv.post("/api/sessions", {{"map", "medium"}}));
  const std::string base = "/api/sessions/" + pop["session"].get<std::string>();
  httplib::Client reader("127.0.0.1", srv.port);
  std::string received;
  reader.Get(base + "/stream", [&](const char* data, std::size_t len) {
    received.append(data, len);
    return received.find("\"population\"") == std::string::npos;
  });
  CHECK(received.find("id: 0\n") != std::string::npos);
  CHECK(received.find("data: {") != std::string::npos);
  fs::remove_all(records);
}

TEST_CASE("service: bind failure is reported") {
  const fs::path records = scratch("service-bind");
  Service first({NOVAMAZE_MAPS_DIR, records, {}});
  const int port = first.start("127.0.0.1", 0);
  Service second({NOVAMAZE_MAPS_DIR, records, {}});
  CHECK_THROWS_AS(second.start("127.0.0.1", port), std::runtime_error);
  first.stop();
  fs::remove_all(records);
}
