#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "novamaze/harness/config.hpp"
#include "novamaze/session/session.hpp"

namespace novamaze::harness {

// Trail points for rendering: at most `max_points`, always keeping the first
// and last state.
std::vector<Vec2> downsample_trail(const maze::Trajectory& trajectory, std::size_t max_points = 200);

inline constexpr std::size_t kMaxTrailPoints = 200;

// Population payload shared by the REST responses and push messages.
nlohmann::json population_payload(const std::string& session_id, const session::Session& session);

struct ServiceOptions {
  std::filesystem::path maps_dir;
  std::filesystem::path records_dir;
  HarnessConfig config;
};

// HTTP+JSON session service.
//
//   GET  /api/maps                       map names
//   GET  /api/maps/{name}                map geometry
//   POST /api/sessions                   {"map", "seed"?, "n"?} -> population
//   GET  /api/sessions/{id}              population, selection, status
//   POST /api/sessions/{id}/select       {"ids": [...]}
//   POST /api/sessions/{id}/step
//   POST /api/sessions/{id}/novelty      starts in the background (202)
//   POST /api/sessions/{id}/optimize     starts in the background (202)
//   POST /api/sessions/{id}/cancel
//   POST /api/sessions/{id}/restart
//   POST /api/sessions/{id}/publish      -> {"record_id"}
//   GET  /api/sessions/{id}/messages?since=N   push messages from sequence N
//   GET  /api/sessions/{id}/stream       the same messages as server-sent events
//
// Push messages are {"seq", "type": progress|population|solved, "session",
// "evals", "payload"}.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  // Returns the bound port; throws std::runtime_error when binding fails.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from elsewhere.
  void wait();
  // Cancels background operations, waits for them and stops serving.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace novamaze::harness
