#pragma once

#include <array>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>

#include "influence/game.hpp"
#include "influence/generators.hpp"
#include "influence/serialize.hpp"

namespace influence {

using Clock = std::chrono::system_clock;

struct ServiceOptions {
  std::chrono::seconds session_ttl{3600};
  /// Wall-clock budget for one automatic move; 0 disables the limit.
  std::chrono::milliseconds ai_budget{5000};
  /// Directory for per-session JSON snapshots; empty disables persistence.
  std::string snapshot_dir;
  /// Value of Access-Control-Allow-Origin.
  std::string cors_origin = "*";
  /// Time source, replaceable for expiry tests.
  std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

struct ServiceResponse {
  int status = 200;
  json body;
};

/// Session registry and request router behind the HTTP front end.
///
///     POST   /sessions                 create a game
///     GET    /sessions/{id}            full state
///     POST   /sessions/{id}/moves      {"vertex": v, "player"?: 1|2}
///     POST   /sessions/{id}/advance    {"moves"?: n} plays automatic moves
///     GET    /sessions/{id}/hints      ?strategy=greedy|relaxation&eps=
///     DELETE /sessions/{id}
///     GET    /graphs/{id}              layout and edges
///     GET    /health
///
/// Mutations of one session are serialized by its own lock; reads share it.
class GameService {
 public:
  explicit GameService(ServiceOptions options = {});
  ~GameService();
  GameService(const GameService&) = delete;
  GameService& operator=(const GameService&) = delete;

  ServiceResponse handle(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& query, const std::string& body);

  /// Drops sessions idle for longer than the TTL; returns how many.
  std::size_t expire_sessions();
  std::size_t session_count() const;
  const ServiceOptions& options() const { return options_; }

 private:
  struct Session;
  struct GraphEntry;

  ServiceResponse create_session(const std::string& body);
  ServiceResponse get_session(const std::string& id);
  ServiceResponse post_move(const std::string& id, const std::string& body);
  ServiceResponse advance(const std::string& id, const std::string& body);
  ServiceResponse hints(const std::string& id, const std::map<std::string, std::string>& query);
  ServiceResponse delete_session(const std::string& id);
  ServiceResponse get_graph(const std::string& id);

  std::shared_ptr<Session> find(const std::string& id);
  std::shared_ptr<const GraphEntry> register_graph(const GraphSpec& spec);
  json session_json(const Session& s) const;
  json play_automatic(Session& s, int limit);
  AiDecision timed_decision(const GameState& state, const Player& player, bool& timed_out) const;
  void save_snapshot(const Session& s) const;
  void remove_snapshot(const std::string& id) const;
  void load_snapshots();

  ServiceOptions options_;
  mutable std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, std::shared_ptr<const GraphEntry>> graphs_;
};

/// HTTP front end: routes every request through GameService::handle, adds
/// CORS headers and answers preflight requests, and optionally serves static
/// files for the browser client.
class HttpServer {
 public:
  HttpServer(GameService& service, std::string static_dir = {});
  ~HttpServer();
  /// Binds to host:port (port 0 picks a free port) and returns the port.
  int bind(const std::string& host, int port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace influence
