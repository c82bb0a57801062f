#include "influence/game.hpp"

#include <limits>
#include <random>

#include "influence/greedy.hpp"

namespace influence {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void refresh_scores(GameState& s) {
  s.shares.reset();
  s.field.resize(0);
  if (s.zealots[0].empty() || s.zealots[1].empty()) return;
  const ZealotConfig z = s.zealot_config();
  s.field = detail::solve_grouped_unchecked(*s.graph, z, 0, {});
  const double first = influence(s.field);
  s.shares = Shares{first, 1.0 - first};
}

double share_after(const GameState& s, int player, Vertex v) {
  const GameState next = apply_move(s, player, v);
  if (next.shares) return (*next.shares)[static_cast<std::size_t>(player)];
  return next.zealots[static_cast<std::size_t>(1 - player)].empty() ? 1.0 : 0.0;
}

Vertex opening_vertex(const GameState& s) { return legal_moves(s).vector().front(); }

}  // namespace

bool GameState::over() const {
  const auto free = static_cast<std::size_t>(graph->size()) - zealots[0].size() - zealots[1].size();
  if (free == 0) return true;
  return config.rounds > 0 && moves_made(0) >= config.rounds && moves_made(1) >= config.rounds;
}

int GameState::moves_made(int player) const {
  int count = 0;
  for (const Move& m : history) count += (m.player == player);
  return count;
}

ZealotConfig GameState::zealot_config() const { return ZealotConfig({zealots[0], zealots[1]}); }

GameState new_game(std::shared_ptr<const Graph> g, GameConfig config, std::array<VertexSet, kPlayers> seeds,
                   int first_turn) {
  if (!g) throw InvalidInput("game needs a graph");
  if (config.rounds < 0) throw InvalidInput("rounds must be nonnegative");
  if (first_turn != 0 && first_turn != 1) throw InvalidInput("first turn must be player 1 or 2");
  detail::require_strongly_connected(*g);
  for (const auto& s : seeds) s.check_range(g->size());
  if (seeds[0].intersects(seeds[1])) throw InvalidInput("seed zealot sets overlap");
  GameState s;
  s.graph = std::move(g);
  s.config = config;
  s.initial = seeds;
  s.zealots = seeds;
  s.first_turn = first_turn;
  s.turn = first_turn;
  refresh_scores(s);
  return s;
}

VertexSet legal_moves(const GameState& s) {
  std::vector<Vertex> ids;
  for (Vertex v = 0; v < s.graph->size(); ++v)
    if (!s.zealots[0].contains(v) && !s.zealots[1].contains(v)) ids.push_back(v);
  return VertexSet(std::move(ids));
}

GameState apply_move(const GameState& s, int player, Vertex v) {
  if (s.over()) throw GameError(GameError::Code::kGameOver, "the game is over");
  if (player != s.turn)
    throw GameError(GameError::Code::kOutOfTurn, "it is player " + std::to_string(s.turn + 1) + "'s turn");
  if (v < 0 || v >= s.graph->size())
    throw GameError(GameError::Code::kIllegalMove, "vertex " + std::to_string(v) + " is out of range");
  if (s.zealots[0].contains(v) || s.zealots[1].contains(v))
    throw GameError(GameError::Code::kIllegalMove, "vertex " + std::to_string(v) + " is already taken");
  GameState next = s;
  next.zealots[static_cast<std::size_t>(player)] = next.zealots[static_cast<std::size_t>(player)].with(v);
  next.history.push_back({player, v});
  next.turn = 1 - player;
  // With a finite round count a player who is done passes.
  if (next.config.rounds > 0 && next.moves_made(next.turn) >= next.config.rounds) next.turn = player;
  refresh_scores(next);
  return next;
}

GameState replay(const GameState& s) {
  GameState r = new_game(s.graph, s.config, s.initial, s.first_turn);
  for (const Move& m : s.history) r = apply_move(r, m.player, m.vertex);
  return r;
}

std::optional<Shares> score(const GameState& s) { return s.shares; }

std::string to_string(Player::Kind k) {
  switch (k) {
    case Player::Kind::kHuman: return "human";
    case Player::Kind::kRandom: return "random";
    case Player::Kind::kGreedy: return "greedy";
    case Player::Kind::kRelaxation: return "relaxation";
    case Player::Kind::kBruteSmall: return "brute_small";
  }
  return "unknown";
}

Player::Kind player_kind_from_string(const std::string& name) {
  if (name == "human") return Player::Kind::kHuman;
  if (name == "random" || name == "easy") return Player::Kind::kRandom;
  if (name == "greedy" || name == "medium") return Player::Kind::kGreedy;
  if (name == "relaxation") return Player::Kind::kRelaxation;
  if (name == "brute_small" || name == "hard") return Player::Kind::kBruteSmall;
  throw InvalidInput("unknown player strategy '" + name + "'");
}

AiDecision ai_decide(const GameState& s, const Player& p) {
  if (p.kind == Player::Kind::kHuman)
    throw GameError(GameError::Code::kNoAutomaticPlayer, "player " + std::to_string(s.turn + 1) + " is human");
  if (s.over()) throw GameError(GameError::Code::kGameOver, "the game is over");
  const VertexSet legal = legal_moves(s);
  const int me = s.turn;
  const bool empty_board = s.zealots[0].empty() && s.zealots[1].empty();

  switch (p.kind) {
    case Player::Kind::kRandom: {
      std::mt19937_64 rng(mix(p.seed ^ mix(static_cast<std::uint64_t>(s.history.size()))));
      return {legal.vector()[static_cast<std::size_t>(rng() % legal.size())], ""};
    }
    case Player::Kind::kGreedy:
    case Player::Kind::kRelaxation: {
      // Every opening move is worth the whole board; the tie-break decides.
      if (empty_board) return {opening_vertex(s), "empty board: all openings tie, lowest id"};
      const TargetingProblem prob(s.graph, s.zealot_config(), me, 1);
      if (p.kind == Player::Kind::kGreedy) return {greedy(prob).chosen.vector().front(), ""};
      try {
        return {relaxed_select(prob, p.epsilon).chosen.vector().front(), ""};
      } catch (const ConvergenceError& err) {
        return {greedy(prob).chosen.vector().front(), std::string("relaxation fell back to greedy: ") + err.what()};
      }
    }
    case Player::Kind::kBruteSmall: {
      if (static_cast<int>(legal.size()) > kBruteSmallCap) {
        AiDecision d = empty_board ? AiDecision{opening_vertex(s), ""}
                                   : AiDecision{greedy(TargetingProblem(s.graph, s.zealot_config(), me, 1)).chosen.vector().front(), ""};
        d.note = "more than " + std::to_string(kBruteSmallCap) + " free vertices: greedy fallback";
        return d;
      }
      // Two-ply minimax: maximize own share against the opponent's best reply.
      double best = -std::numeric_limits<double>::infinity();
      Vertex choice = legal.vector().front();
      for (Vertex x : legal) {
        const GameState after = apply_move(s, me, x);
        double value;
        if (after.over() || after.turn == me) {
          value = share_after(s, me, x);
        } else {
          const TargetingProblem reply(after.graph, after.zealot_config(), 1 - me, 1);
          value = 1.0 - brute_force(reply).value;
        }
        if (value > best + kTieTolerance) {
          best = value;
          choice = x;
        }
      }
      return {choice, ""};
    }
    case Player::Kind::kHuman:
      break;
  }
  throw GameError(GameError::Code::kNoAutomaticPlayer, "unsupported strategy");
}

Vertex ai_move(const GameState& s, const Player& p) { return ai_decide(s, p).vertex; }

}  // namespace influence
