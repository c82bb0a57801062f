#include "influence/service.hpp"

#include <atomic>
#include <climits>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <thread>

#include <httplib.h>

#include "influence/greedy.hpp"
#include "influence/heatmap.hpp"
#include "influence/relaxation.hpp"

namespace influence {

namespace fs = std::filesystem;

namespace {

/// Graphs larger than this are refused at session creation.
constexpr int kMaxSessionVertices = 5000;

struct HttpError : std::runtime_error {
  HttpError(int status, std::string code, const std::string& what)
      : std::runtime_error(what), status(status), code(std::move(code)) {}
  int status;
  std::string code;
};

ServiceResponse error_response(int status, const std::string& code, const std::string& message) {
  return {status, {{"error", message}, {"code", code}}};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start < path.size()) {
    auto end = path.find('/', start);
    if (end == std::string::npos) end = path.size();
    if (end > start) parts.push_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

json parse_body(const std::string& body) {
  if (body.empty()) return json::object();
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw HttpError(400, "bad_request", "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& err) {
    throw HttpError(400, "bad_request", std::string("malformed JSON: ") + err.what());
  }
}

Player player_from_json(const json& j) {
  Player p;
  if (j.is_string()) {
    p.kind = player_kind_from_string(j.get<std::string>());
    return p;
  }
  if (!j.is_object()) throw InvalidInput("player must be a strategy name or an object");
  p.kind = player_kind_from_string(j.at("kind").get<std::string>());
  p.seed = j.value("seed", std::uint64_t{0});
  p.epsilon = j.value("eps", kDefaultEpsilon);
  if (!(p.epsilon > 0.0)) throw InvalidInput("player epsilon must be positive");
  return p;
}

json player_to_json(const Player& p) {
  json j{{"kind", to_string(p.kind)}};
  if (p.kind == Player::Kind::kRandom) j["seed"] = p.seed;
  if (p.kind == Player::Kind::kRelaxation) j["eps"] = p.epsilon;
  return j;
}

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

std::int64_t to_seconds(Clock::time_point t) {
  return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch()).count();
}

Clock::time_point from_seconds(std::int64_t s) { return Clock::time_point(std::chrono::seconds(s)); }

bool valid_session_id(const std::string& id) {
  return !id.empty() && id.size() <= 64 &&
         std::all_of(id.begin(), id.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

}  // namespace

struct GameService::GraphEntry {
  std::string id;
  GraphSpec spec;
  std::shared_ptr<const Graph> graph;
  std::vector<Point> coords;
};

struct GameService::Session {
  std::string id;
  std::shared_ptr<const GraphEntry> graph;
  std::array<Player, kPlayers> players;
  GameState state;
  Clock::time_point created;
  std::atomic<std::int64_t> last_active{0};
  mutable std::shared_mutex mutex;

  bool has_human() const {
    return players[0].kind == Player::Kind::kHuman || players[1].kind == Player::Kind::kHuman;
  }
};

GameService::GameService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.snapshot_dir.empty()) {
    fs::create_directories(options_.snapshot_dir);
    load_snapshots();
  }
}

GameService::~GameService() = default;

ServiceResponse GameService::handle(const std::string& method, const std::string& path,
                                    const std::map<std::string, std::string>& query, const std::string& body) {
  expire_sessions();
  const auto parts = split_path(path);
  try {
    if (parts.size() == 1 && parts[0] == "health" && method == "GET")
      return {200, {{"status", "ok"}, {"sessions", session_count()}}};
    if (!parts.empty() && parts[0] == "sessions") {
      if (parts.size() == 1 && method == "POST") return create_session(body);
      if (parts.size() == 2 && method == "GET") return get_session(parts[1]);
      if (parts.size() == 2 && method == "DELETE") return delete_session(parts[1]);
      if (parts.size() == 3 && parts[2] == "moves" && method == "POST") return post_move(parts[1], body);
      if (parts.size() == 3 && parts[2] == "advance" && method == "POST") return advance(parts[1], body);
      if (parts.size() == 3 && parts[2] == "hints" && method == "GET") return hints(parts[1], query);
    }
    if (parts.size() == 2 && parts[0] == "graphs" && method == "GET") return get_graph(parts[1]);
    return error_response(404, "not_found", "no route for " + method + " " + path);
  } catch (const HttpError& err) {
    return error_response(err.status, err.code, err.what());
  } catch (const GameError& err) {
    switch (err.code()) {
      case GameError::Code::kIllegalMove: return error_response(422, "illegal_move", err.what());
      case GameError::Code::kOutOfTurn: return error_response(409, "out_of_turn", err.what());
      case GameError::Code::kGameOver: return error_response(409, "game_over", err.what());
      case GameError::Code::kNoAutomaticPlayer: return error_response(409, "human_turn", err.what());
    }
    return error_response(500, "internal", err.what());
  } catch (const ConvergenceError& err) {
    return error_response(500, "not_converged", err.what());
  } catch (const InvalidInput& err) {
    return error_response(400, "bad_request", err.what());
  } catch (const json::exception& err) {
    return error_response(400, "bad_request", err.what());
  } catch (const std::exception& err) {
    return error_response(500, "internal", err.what());
  }
}

std::size_t GameService::expire_sessions() {
  const std::int64_t cutoff = to_seconds(options_.now()) - options_.session_ttl.count();
  std::vector<std::string> dropped;
  {
    std::unique_lock lock(registry_mutex_);
    for (auto it = sessions_.begin(); it != sessions_.end();) {
      if (it->second->last_active.load() < cutoff) {
        dropped.push_back(it->first);
        it = sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (const auto& id : dropped) remove_snapshot(id);
  return dropped.size();
}

std::size_t GameService::session_count() const {
  std::shared_lock lock(registry_mutex_);
  return sessions_.size();
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) {
  std::shared_ptr<Session> s;
  {
    std::shared_lock lock(registry_mutex_);
    auto it = sessions_.find(id);
    if (it != sessions_.end()) s = it->second;
  }
  if (!s) throw HttpError(404, "not_found", "unknown session '" + id + "'");
  s->last_active = to_seconds(options_.now());
  return s;
}

std::shared_ptr<const GameService::GraphEntry> GameService::register_graph(const GraphSpec& spec) {
  const std::string id = "g" + fnv1a_hex(spec_to_json(spec).dump());
  {
    std::shared_lock lock(registry_mutex_);
    auto it = graphs_.find(id);
    if (it != graphs_.end()) return it->second;
  }
  auto entry = std::make_shared<GraphEntry>();
  entry->id = id;
  entry->spec = spec;
  entry->graph = std::make_shared<const Graph>(generate(spec));
  if (entry->graph->size() > kMaxSessionVertices)
    throw InvalidInput("graphs are limited to " + std::to_string(kMaxSessionVertices) + " vertices");
  entry->coords = layout(spec);
  std::unique_lock lock(registry_mutex_);
  return graphs_.emplace(id, std::move(entry)).first->second;
}

json GameService::session_json(const Session& s) const {
  return {{"session_id", s.id},
          {"graph", spec_to_json(s.graph->spec)},
          {"players", json::array({player_to_json(s.players[0]), player_to_json(s.players[1])})},
          {"state", game_to_json(s.state, s.graph->id)}};
}

AiDecision GameService::timed_decision(const GameState& state, const Player& player, bool& timed_out) const {
  timed_out = false;
  if (options_.ai_budget.count() <= 0) return ai_decide(state, player);
  auto promise = std::make_shared<std::promise<AiDecision>>();
  auto future = promise->get_future();
  std::thread([promise, state, player] {
    try {
      promise->set_value(ai_decide(state, player));
    } catch (...) {
      promise->set_exception(std::current_exception());
    }
  }).detach();
  if (future.wait_for(options_.ai_budget) == std::future_status::ready) return future.get();
  timed_out = true;
  AiDecision fallback = ai_decide(state, Player::greedy());
  fallback.note = "time budget exceeded: greedy fallback";
  return fallback;
}

json GameService::play_automatic(Session& s, int limit) {
  json moves = json::array();
  for (int count = 0; count < limit && !s.state.over(); ++count) {
    const int player = s.state.turn;
    const Player& p = s.players[static_cast<std::size_t>(player)];
    if (p.kind == Player::Kind::kHuman) break;
    bool timed_out = false;
    const AiDecision d = timed_decision(s.state, p, timed_out);
    s.state = apply_move(s.state, player, d.vertex);
    json move{{"player", player + 1}, {"vertex", d.vertex}, {"timed_out", timed_out}};
    if (!d.note.empty()) move["note"] = d.note;
    moves.push_back(std::move(move));
  }
  return moves;
}

ServiceResponse GameService::create_session(const std::string& body) {
  const json req = parse_body(body);
  if (!req.contains("graph")) throw InvalidInput("missing \"graph\"");
  const GraphSpec spec = spec_from_json(req.at("graph"));
  auto entry = register_graph(spec);

  auto s = std::make_shared<Session>();
  s->id = new_session_id();
  s->graph = entry;
  s->players = {Player::human(), Player::greedy()};
  if (req.contains("players")) {
    const auto& p = req.at("players");
    if (!p.is_array() || p.size() != 2) throw InvalidInput("\"players\" must list two players");
    s->players = {player_from_json(p[0]), player_from_json(p[1])};
  }
  GameConfig config;
  config.rounds = req.value("rounds", config.rounds);
  std::array<VertexSet, kPlayers> seeds;
  if (req.contains("zealots")) {
    const auto& z = req.at("zealots");
    std::vector<VertexSet> groups;
    if (z.is_string()) {
      groups = parse_zealot_groups(z.get<std::string>(), spec);
    } else {
      for (const auto& g : z) groups.emplace_back(g.get<std::vector<Vertex>>());
    }
    if (groups.size() != kPlayers) throw InvalidInput("\"zealots\" must hold two groups");
    seeds = {groups[0], groups[1]};
  }
  const int first = req.value("first_turn", 1);
  s->state = new_game(entry->graph, config, seeds, first - 1);
  s->created = options_.now();
  s->last_active = to_seconds(s->created);

  json ai_moves = json::array();
  if (s->has_human()) ai_moves = play_automatic(*s, INT_MAX);
  {
    std::unique_lock lock(registry_mutex_);
    sessions_[s->id] = s;
  }
  save_snapshot(*s);
  json out = session_json(*s);
  out["ai_moves"] = std::move(ai_moves);
  return {201, std::move(out)};
}

ServiceResponse GameService::get_session(const std::string& id) {
  auto s = find(id);
  std::shared_lock lock(s->mutex);
  return {200, session_json(*s)};
}

ServiceResponse GameService::post_move(const std::string& id, const std::string& body) {
  auto s = find(id);
  const json req = parse_body(body);
  if (!req.contains("vertex") || !req.at("vertex").is_number_integer())
    throw InvalidInput("move needs an integer \"vertex\"");
  const auto vertex = req.at("vertex").get<long long>();
  std::unique_lock lock(s->mutex);
  if (s->state.over()) throw GameError(GameError::Code::kGameOver, "the game is over");
  const int turn = s->state.turn;
  if (req.contains("player") && req.at("player").get<int>() != turn + 1)
    throw GameError(GameError::Code::kOutOfTurn, "it is player " + std::to_string(turn + 1) + "'s turn");
  if (s->players[static_cast<std::size_t>(turn)].kind != Player::Kind::kHuman)
    throw GameError(GameError::Code::kOutOfTurn,
                    "player " + std::to_string(turn + 1) + " is automatic; use /advance");
  if (vertex < 0 || vertex >= s->state.graph->size())
    throw GameError(GameError::Code::kIllegalMove, "vertex " + std::to_string(vertex) + " is out of range");
  s->state = apply_move(s->state, turn, static_cast<Vertex>(vertex));
  json ai_moves = play_automatic(*s, INT_MAX);
  save_snapshot(*s);
  json out = session_json(*s);
  out["ai_moves"] = std::move(ai_moves);
  return {200, std::move(out)};
}

ServiceResponse GameService::advance(const std::string& id, const std::string& body) {
  auto s = find(id);
  const json req = parse_body(body);
  const int limit = req.value("moves", 1);
  if (limit < 1) throw InvalidInput("\"moves\" must be positive");
  std::unique_lock lock(s->mutex);
  if (s->state.over()) throw GameError(GameError::Code::kGameOver, "the game is over");
  if (s->players[static_cast<std::size_t>(s->state.turn)].kind == Player::Kind::kHuman)
    throw GameError(GameError::Code::kNoAutomaticPlayer,
                    "player " + std::to_string(s->state.turn + 1) + " is human");
  json ai_moves = play_automatic(*s, limit);
  save_snapshot(*s);
  json out = session_json(*s);
  out["ai_moves"] = std::move(ai_moves);
  return {200, std::move(out)};
}

ServiceResponse GameService::hints(const std::string& id, const std::map<std::string, std::string>& query) {
  auto s = find(id);
  const auto strategy_it = query.find("strategy");
  const std::string strategy = strategy_it == query.end() ? "greedy" : strategy_it->second;
  double eps = kDefaultEpsilon;
  if (auto it = query.find("eps"); it != query.end()) {
    try {
      std::size_t used = 0;
      eps = std::stod(it->second, &used);
      if (used != it->second.size()) throw std::invalid_argument("trailing text");
    } catch (const std::exception&) {
      throw InvalidInput("eps must be a number");
    }
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidInput("eps must be positive");
  }
  if (strategy != "greedy" && strategy != "relaxation")
    throw InvalidInput("strategy must be greedy or relaxation");

  std::shared_lock lock(s->mutex);
  if (s->state.over()) throw GameError(GameError::Code::kGameOver, "the game is over");
  const ZealotConfig z = s->state.zealot_config();
  const int m = s->state.turn;
  json out{{"session_id", s->id}, {"strategy", strategy}, {"authority", m + 1}};
  if (strategy == "greedy") {
    out["map"] = heatmap_to_json(energy_map(*s->graph->graph, z, m), s->graph->coords);
  } else {
    const PhiMapResult r = phi_map(*s->graph->graph, z, m, eps);
    out["epsilon"] = eps;
    out["iterations"] = r.optimum.iterations;
    out["objective"] = r.optimum.state.objective;
    out["map"] = heatmap_to_json(r.map, s->graph->coords);
  }
  return {200, std::move(out)};
}

ServiceResponse GameService::delete_session(const std::string& id) {
  {
    std::unique_lock lock(registry_mutex_);
    if (sessions_.erase(id) == 0) throw HttpError(404, "not_found", "unknown session '" + id + "'");
  }
  remove_snapshot(id);
  return {200, {{"deleted", id}}};
}

ServiceResponse GameService::get_graph(const std::string& id) {
  std::shared_ptr<const GraphEntry> entry;
  {
    std::shared_lock lock(registry_mutex_);
    auto it = graphs_.find(id);
    if (it != graphs_.end()) entry = it->second;
  }
  if (!entry) throw HttpError(404, "not_found", "unknown graph '" + id + "'");
  json vertices = json::array();
  for (std::size_t v = 0; v < entry->coords.size(); ++v)
    vertices.push_back({{"id", v}, {"x", entry->coords[v][0]}, {"y", entry->coords[v][1]}});
  json out = graph_to_json(*entry->graph);
  out["graph_id"] = entry->id;
  out["spec"] = spec_to_json(entry->spec);
  out["vertices"] = std::move(vertices);
  return {200, std::move(out)};
}

void GameService::save_snapshot(const Session& s) const {
  if (options_.snapshot_dir.empty()) return;
  json history = json::array();
  for (const Move& m : s.state.history) history.push_back({{"player", m.player + 1}, {"vertex", m.vertex}});
  const json snap{{"session_id", s.id},
                  {"graph", spec_to_json(s.graph->spec)},
                  {"players", json::array({player_to_json(s.players[0]), player_to_json(s.players[1])})},
                  {"rounds", s.state.config.rounds},
                  {"first_turn", s.state.first_turn + 1},
                  {"initial", json::array({s.state.initial[0].vector(), s.state.initial[1].vector()})},
                  {"history", std::move(history)},
                  {"created", to_seconds(s.created)},
                  {"last_active", s.last_active.load()}};
  const fs::path dir(options_.snapshot_dir);
  const fs::path tmp = dir / (s.id + ".json.tmp");
  write_text_file(tmp.string(), snap.dump());
  fs::rename(tmp, dir / (s.id + ".json"));
}

void GameService::remove_snapshot(const std::string& id) const {
  if (options_.snapshot_dir.empty()) return;
  std::error_code ec;
  fs::remove(fs::path(options_.snapshot_dir) / (id + ".json"), ec);
}

void GameService::load_snapshots() {
  for (const auto& file : fs::directory_iterator(options_.snapshot_dir)) {
    if (file.path().extension() != ".json") continue;
    try {
      const json snap = json::parse(read_text_file(file.path().string()));
      auto s = std::make_shared<Session>();
      s->id = snap.at("session_id").get<std::string>();
      if (!valid_session_id(s->id)) throw InvalidInput("bad session id");
      s->graph = register_graph(spec_from_json(snap.at("graph")));
      s->players = {player_from_json(snap.at("players")[0]), player_from_json(snap.at("players")[1])};
      const auto& initial = snap.at("initial");
      GameState state = new_game(s->graph->graph, GameConfig{snap.at("rounds").get<int>()},
                                 {VertexSet(initial[0].get<std::vector<Vertex>>()),
                                  VertexSet(initial[1].get<std::vector<Vertex>>())},
                                 snap.at("first_turn").get<int>() - 1);
      for (const auto& m : snap.at("history"))
        state = apply_move(state, m.at("player").get<int>() - 1, m.at("vertex").get<Vertex>());
      s->state = std::move(state);
      s->created = from_seconds(snap.at("created").get<std::int64_t>());
      s->last_active = snap.at("last_active").get<std::int64_t>();
      sessions_[s->id] = s;
    } catch (const std::exception& err) {
      std::cerr << "skipping snapshot " << file.path() << ": " << err.what() << '\n';
    }
  }
}

struct HttpServer::Impl {
  GameService& service;
  httplib::Server server;

  explicit Impl(GameService& svc) : service(svc) {}

  void route(const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [key, value] : req.params) query.emplace(key, value);
    const ServiceResponse out = service.handle(req.method, req.path, query, req.body);
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
  }
};

HttpServer::HttpServer(GameService& service, std::string static_dir) : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  srv.set_default_headers({{"Access-Control-Allow-Origin", service.options().cors_origin},
                           {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  if (!static_dir.empty() && !srv.set_mount_point("/ui", static_dir))
    throw InvalidInput("static directory '" + static_dir + "' does not exist");
  auto handler = [this](const httplib::Request& req, httplib::Response& res) { impl_->route(req, res); };
  srv.Get(".*", handler);
  srv.Post(".*", handler);
  srv.Delete(".*", handler);
  srv.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port))
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace influence
