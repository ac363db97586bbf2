#include "novamaze/harness/service.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <httplib.h>

#include "novamaze/maze/map.hpp"
#include "novamaze/search/record_store.hpp"

namespace novamaze::harness {

using nlohmann::json;

std::vector<Vec2> downsample_trail(const maze::Trajectory& trajectory, std::size_t max_points) {
  const auto& states = trajectory.states;
  std::vector<Vec2> out;
  if (states.empty() || max_points == 0) return out;
  if (states.size() <= max_points || max_points == 1) {
    const std::size_t count = std::min(states.size(), max_points);
    for (std::size_t i = 0; i < count; ++i) out.push_back(states[i].position);
    if (max_points == 1) out.back() = states.back().position;
    return out;
  }
  const std::size_t last = states.size() - 1;
  for (std::size_t i = 0; i < max_points; ++i) {
    out.push_back(states[(i * last + (max_points - 1) / 2) / (max_points - 1)].position);
  }
  return out;
}

json population_payload(const std::string& session_id, const session::Session& s) {
  json candidates = json::array();
  for (const auto& c : s.population()) {
    json trail = json::array();
    for (const auto& p : downsample_trail(c.trajectory, kMaxTrailPoints)) trail.push_back({p.x, p.y});
    candidates.push_back({{"id", c.id()},
                          {"novelty", c.novelty},
                          {"fitness", c.fitness},
                          {"solved", c.solved()},
                          {"hidden_nodes", c.genome.hidden_count()},
                          {"final", {c.behavior.x, c.behavior.y}},
                          {"trail", std::move(trail)}});
  }
  return {{"session", session_id},
          {"map", s.map().name},
          {"status", std::string(session::to_string(s.status()))},
          {"evals", s.evaluations_used()},
          {"budget", s.config().budget},
          {"restarts", s.restarts()},
          {"archive_size", s.archive().size()},
          {"threshold", s.archive().threshold()},
          {"selection", s.selection()},
          {"candidates", std::move(candidates)}};
}

namespace {

struct HttpError : std::runtime_error {
  HttpError(int status, const std::string& what) : std::runtime_error(what), status(status) {}
  int status;
};

struct Hosted {
  std::string id;
  std::mutex mu;
  std::condition_variable arrived;
  std::unique_ptr<session::Session> session;
  std::string running;  // "novelty" or "optimize" while a background operation runs
  std::stop_source stop;
  std::jthread worker;
  std::vector<json> messages;

  // Caller holds mu.
  void push(std::string_view type, json payload) {
    messages.push_back({{"seq", messages.size()},
                        {"type", type},
                        {"session", id},
                        {"evals", session->evaluations_used()},
                        {"payload", std::move(payload)}});
    arrived.notify_all();
  }

  // Caller holds mu. Population message, plus a solved message the first
  // time a solution appears.
  void announce(json payload) {
    push("population", std::move(payload));
    if (session->status() != session::Status::kSolved) return;
    for (const auto& m : messages) {
      if (m["type"] == "solved") return;
    }
    for (const auto& c : session->population()) {
      if (c.solved()) {
        push("solved", {{"id", c.id()}, {"hidden_nodes", c.genome.hidden_count()}});
        return;
      }
    }
  }

  // Caller holds mu.
  json snapshot() const {
    json p = population_payload(id, *session);
    if (!running.empty()) {
      p["status"] = "running-" + running;
      p["evals"] = session->evaluations_used();
    }
    return p;
  }
};

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw HttpError(400, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error&) {
    throw HttpError(400, "request body is not valid JSON");
  }
}

}  // namespace

struct Service::Impl {
  ServiceOptions options;
  search::RecordStore store;
  httplib::Server server;
  std::thread listener;
  std::mutex mu;
  std::map<std::string, std::shared_ptr<Hosted>> sessions;
  std::map<std::string, maze::MazeMap> maps;
  std::uint64_t created = 0;
  std::atomic<bool> shutting_down{false};
  std::mutex stop_mu;
  std::condition_variable stopped_cv;
  bool stopped = false;

  explicit Impl(ServiceOptions o) : options(std::move(o)), store(options.records_dir) {
    options.config.validate();
    routes();
  }

  const maze::MazeMap& map(const std::string& name) {
    std::lock_guard lock(mu);
    auto it = maps.find(name);
    if (it == maps.end()) {
      const auto names = maze::list_maps(options.maps_dir);
      if (std::find(names.begin(), names.end(), name) == names.end()) throw HttpError(404, "unknown map '" + name + "'");
      it = maps.emplace(name, maze::load_named_map(options.maps_dir, name, options.config.engine.robot)).first;
    }
    return it->second;
  }

  std::shared_ptr<Hosted> find(const std::string& id) {
    std::lock_guard lock(mu);
    const auto it = sessions.find(id);
    if (it == sessions.end()) throw HttpError(404, "unknown session '" + id + "'");
    return it->second;
  }

  template <typename F>
  httplib::Server::Handler guarded(F body) {
    return [body](const httplib::Request& req, httplib::Response& res) {
      try {
        body(req, res);
      } catch (const HttpError& e) {
        reply(res, e.status, {{"error", e.what()}});
      } catch (const json::exception& e) {
        reply(res, 400, {{"error", e.what()}});
      } catch (const std::invalid_argument& e) {
        reply(res, 400, {{"error", e.what()}});
      } catch (const std::logic_error& e) {
        reply(res, 409, {{"error", e.what()}});
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
      }
    };
  }

  void create(const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    if (!body.contains("map") || !body["map"].is_string()) throw HttpError(400, "field 'map' is required");
    const maze::MazeMap& m = map(body["map"].get<std::string>());
    session::SessionConfig config = options.config.session;
    auto hosted = std::make_shared<Hosted>();
    {
      std::lock_guard lock(mu);
      ++created;
      hosted->id = "s" + std::to_string(created);
      config.seed = created;
    }
    if (body.contains("seed")) config.seed = body["seed"].get<std::uint64_t>();
    if (body.contains("n")) config.n = body["n"].get<int>();
    hosted->session = std::make_unique<session::Session>(m, options.config.engine, config);
    json payload;
    {
      std::lock_guard lock(hosted->mu);
      payload = hosted->snapshot();
      hosted->push("population", payload);
    }
    {
      std::lock_guard lock(mu);
      sessions[hosted->id] = hosted;
    }
    reply(res, 201, payload);
  }

  void command(const std::string& id, const std::string& op, const httplib::Request& req, httplib::Response& res) {
    auto h = find(id);
    std::unique_lock lock(h->mu);
    if (op == "cancel") {
      if (h->running.empty()) throw HttpError(409, "no operation is running");
      h->stop.request_stop();
      reply(res, 202, {{"cancelling", h->running}});
      return;
    }
    if (!h->running.empty()) throw HttpError(409, "operation '" + h->running + "' is still running");
    auto& s = *h->session;
    if (op == "select") {
      const json body = parse_body(req);
      if (!body.contains("ids") || !body["ids"].is_array()) throw HttpError(400, "field 'ids' must be an array");
      const auto ids = body["ids"].get<std::vector<std::int64_t>>();
      s.select(ids);
    } else if (op == "step") {
      s.step();
    } else if (op == "restart") {
      s.restart();
    } else if (op == "publish") {
      const auto record = s.publish(store);
      reply(res, 200, {{"record_id", record.record_id}, {"solved", record.solved}, {"evals", record.evaluations_used}});
      return;
    } else {
      start_background(h, op);
      reply(res, 202, h->snapshot());
      return;
    }
    json payload = h->snapshot();
    if (op != "select") h->announce(payload);
    reply(res, 200, payload);
  }

  // Caller holds h->mu.
  void start_background(const std::shared_ptr<Hosted>& h, const std::string& op) {
    if (shutting_down) throw HttpError(503, "service is shutting down");
    auto& s = *h->session;
    if (s.status() != session::Status::kAwaitingSelection) {
      throw HttpError(409, op + " needs status awaiting-selection, session is " + std::string(session::to_string(s.status())));
    }
    if (s.selection().empty()) throw HttpError(400, op + " needs a nonempty selection");
    if (h->worker.joinable()) h->worker.join();
    h->running = op;
    h->stop = std::stop_source();
    h->worker = std::jthread([h, op] {
      std::string error;
      auto progress = [&](const session::Progress& p) {
        std::lock_guard lock(h->mu);
        h->push("progress", {{"op", p.op}, {"op_evals", p.op_evaluations}, {"collected", p.collected}});
      };
      try {
        if (op == "novelty") {
          h->session->novelty(h->stop.get_token(), progress);
        } else {
          h->session->optimize(h->stop.get_token(), progress);
        }
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard lock(h->mu);
      h->running.clear();
      json payload = h->snapshot();
      if (!error.empty()) payload["error"] = error;
      h->announce(std::move(payload));
    });
  }

  void messages(const std::string& id, const httplib::Request& req, httplib::Response& res) {
    auto h = find(id);
    std::size_t since = 0;
    if (req.has_param("since")) since = std::stoul(req.get_param_value("since"));
    std::lock_guard lock(h->mu);
    json out = json::array();
    for (std::size_t i = since; i < h->messages.size(); ++i) out.push_back(h->messages[i]);
    reply(res, 200, out);
  }

  void stream(const std::string& id, const httplib::Request& req, httplib::Response& res) {
    auto h = find(id);
    auto cursor = std::make_shared<std::size_t>(0);
    if (req.has_param("since")) *cursor = std::stoul(req.get_param_value("since"));
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [this, h, cursor](std::size_t, httplib::DataSink& sink) {
      std::vector<std::string> batch;
      {
        std::unique_lock lock(h->mu);
        h->arrived.wait_for(lock, std::chrono::milliseconds(500),
                            [&] { return *cursor < h->messages.size() || shutting_down.load(); });
        for (; *cursor < h->messages.size(); ++*cursor) {
          batch.push_back("id: " + std::to_string(*cursor) + "\ndata: " + h->messages[*cursor].dump() + "\n\n");
        }
      }
      if (batch.empty()) batch.push_back(": keepalive\n\n");
      for (const auto& chunk : batch) {
        if (!sink.write(chunk.data(), chunk.size())) return false;
      }
      if (shutting_down) {
        sink.done();
        return false;
      }
      return true;
    });
  }

  void routes() {
    server.Get("/api/maps", guarded([this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, maze::list_maps(options.maps_dir));
    }));
    server.Get(R"(/api/maps/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      reply(res, 200, maze::to_json(map(req.matches[1])));
    }));
    server.Post("/api/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
      create(req, res);
    }));
    server.Get(R"(/api/sessions/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto h = find(req.matches[1]);
      std::lock_guard lock(h->mu);
      reply(res, 200, h->snapshot());
    }));
    server.Post(R"(/api/sessions/([^/]+)/(select|step|novelty|optimize|cancel|restart|publish))",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  command(req.matches[1], req.matches[2], req, res);
                }));
    server.Get(R"(/api/sessions/([^/]+)/messages)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      messages(req.matches[1], req, res);
    }));
    server.Get(R"(/api/sessions/([^/]+)/stream)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      stream(req.matches[1], req, res);
    }));
  }

  void shutdown() {
    if (shutting_down.exchange(true)) return;
    std::vector<std::shared_ptr<Hosted>> all;
    {
      std::lock_guard lock(mu);
      for (auto& [id, h] : sessions) all.push_back(h);
    }
    for (auto& h : all) {
      h->stop.request_stop();
      std::jthread worker;
      {
        std::lock_guard lock(h->mu);
        worker = std::move(h->worker);
        h->arrived.notify_all();
      }
      if (worker.joinable()) worker.join();
    }
    server.stop();
    if (listener.joinable()) listener.join();
    std::lock_guard lock(stop_mu);
    stopped = true;
    stopped_cv.notify_all();
  }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

int Service::start(const std::string& host, int port) {
  // SO_REUSEADDR only, so a port already in use fails to bind.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->listener = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stopped_cv.wait(lock, [this] { return impl_->stopped; });
}

void Service::stop() {
  if (impl_) impl_->shutdown();
}

}  // namespace novamaze::harness
