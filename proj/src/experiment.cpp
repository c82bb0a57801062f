#include "influence/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "influence/graph_io.hpp"
#include "influence/greedy.hpp"
#include "influence/heatmap.hpp"
#include "influence/relaxation.hpp"

namespace influence {

namespace {

std::string fixed(double x, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string join(const std::vector<Vertex>& ids) {
  std::string s;
  for (std::size_t k = 0; k < ids.size(); ++k) s += (k ? " " : "") + std::to_string(ids[k]);
  return s;
}

int authority(const ExperimentSpec& spec, const ZealotConfig& z) {
  if (spec.m < 1 || spec.m > z.k())
    throw InvalidInput("authority m=" + std::to_string(spec.m) + " is outside 1.." + std::to_string(z.k()));
  return spec.m - 1;
}

json header(const char* command, const ExperimentSpec& spec) {
  json spec_json = experiment_to_json(spec);
  spec_json.erase("out");
  return {{"command", command}, {"spec_hash", spec_hash(spec)}, {"spec", std::move(spec_json)}};
}

struct NamedPermutation {
  std::string name;
  std::vector<Vertex> perm;
};

std::vector<NamedPermutation> grid_symmetries(const ExperimentSpec& spec, const Graph& g) {
  const GraphSpec& gs = spec.graph;
  if (!spec.graph_file.empty()) return {};
  if (gs.family != Family::kSquareGrid && gs.family != Family::kSquareGridWithDefect) return {};
  if (gs.width * gs.height != g.size()) return {};
  std::vector<NamedPermutation> out;
  if (gs.width == gs.height) out.push_back({"rotation", grid_rotation(gs.width)});
  out.push_back({"mirror_x", grid_mirror_x(gs.width, gs.height)});
  out.push_back({"mirror_y", grid_mirror_y(gs.width, gs.height)});
  return out;
}

bool preserves_zealots(const ZealotConfig& z, const std::vector<Vertex>& perm) {
  for (const VertexSet& s : z.sets())
    for (Vertex v : s)
      if (!s.contains(perm[static_cast<std::size_t>(v)])) return false;
  return true;
}

}  // namespace

json experiment_to_json(const ExperimentSpec& spec) {
  json j{{"graph", spec_to_json(spec.graph)},
         {"zealots", spec.zealots},
         {"m", spec.m},
         {"eps", spec.eps},
         {"budget", spec.budget},
         {"seed", spec.seed},
         {"players", spec.players},
         {"rounds", spec.rounds},
         {"matches", spec.matches},
         {"out", spec.out}};
  if (!spec.graph_file.empty()) j["graph_file"] = spec.graph_file;
  return j;
}

ExperimentSpec experiment_from_json(const json& j) {
  if (!j.is_object()) throw InvalidInput("experiment spec must be a JSON object");
  try {
    ExperimentSpec s;
    if (j.contains("graph")) s.graph = spec_from_json(j.at("graph"));
    s.graph_file = j.value("graph_file", s.graph_file);
    if (!j.contains("graph") && s.graph_file.empty()) throw InvalidInput("experiment spec needs a graph");
    s.zealots = j.value("zealots", s.zealots);
    s.m = j.value("m", s.m);
    if (j.contains("eps")) {
      const auto& e = j.at("eps");
      s.eps = e.is_array() ? e.get<std::vector<double>>() : std::vector<double>{e.get<double>()};
    }
    s.budget = j.value("budget", s.budget);
    s.seed = j.value("seed", s.seed);
    if (j.contains("players")) {
      const auto p = j.at("players").get<std::vector<std::string>>();
      if (p.size() != 2) throw InvalidInput("players must list two strategies");
      s.players = {p[0], p[1]};
    }
    s.rounds = j.value("rounds", s.rounds);
    s.matches = j.value("matches", s.matches);
    s.out = j.value("out", s.out);
    for (double e : s.eps)
      if (!(e > 0.0) || !std::isfinite(e)) throw InvalidInput("epsilon values must be positive");
    if (s.budget < 0) throw InvalidInput("budget must be nonnegative");
    if (s.rounds < 0 || s.matches < 0) throw InvalidInput("rounds and matches must be nonnegative");
    for (const auto& p : s.players) player_kind_from_string(p);
    return s;
  } catch (const json::exception& err) {
    throw InvalidInput(std::string("malformed experiment spec: ") + err.what());
  }
}

std::string spec_hash(const ExperimentSpec& spec) {
  json j = experiment_to_json(spec);
  j.erase("out");
  return fnv1a_hex(j.dump());
}

ExperimentSetup setup(const ExperimentSpec& spec) {
  ExperimentSetup s;
  if (!spec.graph_file.empty()) {
    s.graph = std::make_shared<const Graph>(read_graph_file(spec.graph_file));
  } else {
    s.graph = std::make_shared<const Graph>(generate(spec.graph));
    s.coords = layout(spec.graph);
  }
  s.zealots = ZealotConfig(parse_zealot_groups(spec.zealots, spec.graph));
  s.zealots.check_range(s.graph->size());
  return s;
}

ExperimentOutput run_energy_map(const ExperimentSpec& spec) {
  const auto s = setup(spec);
  const int m = authority(spec, s.zealots);
  const Heatmap h = energy_map(*s.graph, s.zealots, m);
  ExperimentOutput out;
  out.doc = header("energy-map", spec);
  out.doc["map"] = heatmap_to_json(h, s.coords);
  out.csv = heatmap_to_csv(h, s.coords, spec_hash(spec));
  out.summary = "energy map for authority " + std::to_string(spec.m) + ": argmax " + join(h.argmax) +
                (h.degenerate ? " (degenerate)" : "");
  return out;
}

ExperimentOutput run_phi_map(const ExperimentSpec& spec) {
  const auto s = setup(spec);
  const int m = authority(spec, s.zealots);
  if (spec.eps.empty()) throw InvalidInput("phi-map needs at least one epsilon");
  const auto symmetries = grid_symmetries(spec, *s.graph);
  ExperimentOutput out;
  out.doc = header("phi-map", spec);
  json runs = json::array();
  std::ostringstream summary;
  for (double eps : spec.eps) {
    const PhiMapResult r = phi_map(*s.graph, s.zealots, m, eps);
    json symmetry = json::array();
    for (const auto& sym : symmetries)
      symmetry.push_back({{"name", sym.name},
                          {"automorphism", is_automorphism(*s.graph, sym.perm) && preserves_zealots(s.zealots, sym.perm)},
                          {"deviation", permutation_deviation(sym.perm, r.optimum.potential.phi)}});
    const VertexSet anchors = s.zealots.opposing(m).empty() ? s.zealots[m] : s.zealots.opposing(m);
    const double local = anchors.empty() ? 0.0 : localization_mass(*s.graph, anchors, r.optimum.potential.phi);
    runs.push_back({{"epsilon", eps},
                    {"iterations", r.optimum.iterations},
                    {"objective", r.optimum.state.objective},
                    {"start_objective", r.optimum.start_objective},
                    {"projected_gradient_norm", r.optimum.projected_gradient_norm},
                    {"localization_mass", local},
                    {"symmetry", std::move(symmetry)},
                    {"map", heatmap_to_json(r.map, s.coords)}});
    if (spec.eps.size() == 1) out.csv = heatmap_to_csv(r.map, s.coords, spec_hash(spec));
    summary << (summary.tellp() > 0 ? "; " : "") << "eps=" << eps << " argmax " << join(r.map.argmax)
            << " localization " << fixed(local, 4);
  }
  out.doc["runs"] = std::move(runs);
  out.summary = "phi map: " + summary.str();
  return out;
}

ExperimentOutput run_greedy(const ExperimentSpec& spec) {
  const auto s = setup(spec);
  const TargetingProblem p(s.graph, s.zealots, authority(spec, s.zealots), spec.budget);
  const TargetingSolution sol = greedy(p);
  ExperimentOutput out;
  out.doc = header("greedy", spec);
  out.doc["solution"] = solution_to_json(sol);
  out.summary = "greedy chose " + join(sol.chosen.vector()) + " value " + fixed(sol.value, 9);
  return out;
}

ExperimentOutput run_relax_select(const ExperimentSpec& spec) {
  const auto s = setup(spec);
  if (spec.eps.empty()) throw InvalidInput("relax-select needs an epsilon");
  const TargetingProblem p(s.graph, s.zealots, authority(spec, s.zealots), spec.budget);
  const TargetingSolution sol = relaxed_select(p, spec.eps.front());
  ExperimentOutput out;
  out.doc = header("relax-select", spec);
  out.doc["epsilon"] = spec.eps.front();
  out.doc["solution"] = solution_to_json(sol);
  out.summary = "relaxation chose " + join(sol.chosen.vector()) + " value " + fixed(sol.value, 9);
  return out;
}

Player make_player(const std::string& tag, std::uint64_t seed, double epsilon) {
  Player p;
  p.kind = player_kind_from_string(tag);
  p.seed = seed;
  p.epsilon = epsilon;
  return p;
}

ExperimentOutput run_match(const ExperimentSpec& spec) {
  const auto s = setup(spec);
  const double eps = spec.eps.empty() ? kDefaultEpsilon : spec.eps.front();
  std::array<int, 2> wins{0, 0};
  int ties = 0;
  json matches = json::array();
  for (int k = 0; k < spec.matches; ++k) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(k);
    const std::array<Player, 2> players{make_player(spec.players[0], seed, eps), make_player(spec.players[1], seed, eps)};
    for (const Player& p : players)
      if (p.kind == Player::Kind::kHuman) throw InvalidInput("match needs two automatic players");
    GameState g = new_game(s.graph, GameConfig{spec.rounds}, {s.zealots[0], s.zealots[1]});
    json moves = json::array();
    while (!g.over()) {
      const AiDecision d = ai_decide(g, players[static_cast<std::size_t>(g.turn)]);
      const int player = g.turn;
      g = apply_move(g, player, d.vertex);
      json move{{"player", player + 1},
                {"vertex", d.vertex},
                {"shares", g.shares ? json::array({(*g.shares)[0], (*g.shares)[1]}) : json(nullptr)}};
      if (!d.note.empty()) move["note"] = d.note;
      moves.push_back(std::move(move));
    }
    int winner = 0;
    if (g.shares) {
      const double diff = (*g.shares)[0] - (*g.shares)[1];
      winner = diff > kTieTolerance ? 1 : (diff < -kTieTolerance ? 2 : 0);
    }
    if (winner == 0)
      ++ties;
    else
      ++wins[static_cast<std::size_t>(winner - 1)];
    matches.push_back({{"index", k},
                       {"seed", seed},
                       {"moves", std::move(moves)},
                       {"final_shares", g.shares ? json::array({(*g.shares)[0], (*g.shares)[1]}) : json(nullptr)},
                       {"winner", winner}});
  }
  ExperimentOutput out;
  out.doc = header("match", spec);
  out.doc["players"] = spec.players;
  out.doc["matches"] = std::move(matches);
  out.doc["wins"] = wins;
  out.doc["ties"] = ties;
  out.summary = spec.players[0] + " vs " + spec.players[1] + ": " + std::to_string(wins[0]) + "-" +
                std::to_string(wins[1]) + " with " + std::to_string(ties) + " ties";
  return out;
}

ExperimentOutput run_first_player(const ExperimentSpec& spec) {
  const auto s = setup(spec);
  const Player greedy_player = Player::greedy();
  json openings = json::array();
  int first_ahead = 0, total = 0;
  for (Vertex a : legal_moves(new_game(s.graph, GameConfig{spec.rounds}, {s.zealots[0], s.zealots[1]}))) {
    GameState g = new_game(s.graph, GameConfig{spec.rounds}, {s.zealots[0], s.zealots[1]});
    g = apply_move(g, 0, a);
    while (!g.over()) g = apply_move(g, g.turn, ai_move(g, greedy_player));
    if (!g.shares) continue;
    ++total;
    first_ahead += (*g.shares)[0] >= 0.5 - kTieTolerance;
    openings.push_back({{"opening", a}, {"first_share", (*g.shares)[0]}});
  }
  ExperimentOutput out;
  out.doc = header("first-player", spec);
  out.doc["openings"] = std::move(openings);
  out.doc["first_player_not_behind"] = first_ahead;
  out.doc["games"] = total;
  out.summary = "first player not behind in " + std::to_string(first_ahead) + "/" + std::to_string(total) +
                " greedy self-play games";
  return out;
}

void write_output(const ExperimentOutput& out, const std::string& path) {
  const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (csv) {
    if (out.csv.empty()) throw InvalidInput("this command has no CSV output; use a .json path");
    write_text_file(path, out.csv);
  } else {
    write_text_file(path, out.doc.dump(2) + "\n");
  }
}

}  // namespace influence
