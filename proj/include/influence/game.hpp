#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "influence/graph.hpp"
#include "influence/relaxation.hpp"

namespace influence {

/// Players are 0 (first authority) and 1 (second authority).
inline constexpr int kPlayers = 2;

class GameError : public std::runtime_error {
 public:
  enum class Code { kOutOfTurn, kIllegalMove, kGameOver, kNoAutomaticPlayer };
  GameError(Code code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};

struct Move {
  int player = 0;
  Vertex vertex = 0;
  friend bool operator==(const Move&, const Move&) = default;
};

struct GameConfig {
  /// Moves per player; 0 plays until the board is full.
  int rounds = 3;
};

using Shares = std::array<double, kPlayers>;

/// Immutable snapshot of a two-authority game.
struct GameState {
  std::shared_ptr<const Graph> graph;
  GameConfig config;
  std::array<VertexSet, kPlayers> initial;
  std::array<VertexSet, kPlayers> zealots;
  int first_turn = 0;
  int turn = 0;
  std::vector<Move> history;
  /// Null until both sides own a vertex.
  std::optional<Shares> shares;
  /// Player 0's opinion v(i) per vertex; empty while shares are null.
  Eigen::VectorXd field;

  bool over() const;
  int moves_made(int player) const;
  ZealotConfig zealot_config() const;
};

/// Throws InvalidInput if the graph is not strongly connected or the seed
/// sets overlap or fall outside the graph.
GameState new_game(std::shared_ptr<const Graph> g, GameConfig config = {},
                   std::array<VertexSet, kPlayers> seeds = {}, int first_turn = 0);

VertexSet legal_moves(const GameState& s);

/// Throws GameError on out-of-turn play, an occupied or out-of-range vertex,
/// or a finished game.
GameState apply_move(const GameState& s, int player, Vertex v);

/// Rebuilds a state from its starting position and move history.
GameState replay(const GameState& s);

/// Influence shares (I_1, I_2), or nullopt when a side owns nothing.
std::optional<Shares> score(const GameState& s);

struct Player {
  enum class Kind { kHuman, kRandom, kGreedy, kRelaxation, kBruteSmall };
  Kind kind = Kind::kHuman;
  std::uint64_t seed = 0;
  double epsilon = kDefaultEpsilon;

  static Player human() { return {}; }
  static Player random(std::uint64_t seed) { return {Kind::kRandom, seed, kDefaultEpsilon}; }
  static Player greedy() { return {Kind::kGreedy, 0, kDefaultEpsilon}; }
  static Player relaxation(double eps) { return {Kind::kRelaxation, 0, eps}; }
  static Player brute_small() { return {Kind::kBruteSmall, 0, kDefaultEpsilon}; }
};

std::string to_string(Player::Kind k);
/// Accepts human, random, greedy, relaxation, brute_small and the difficulty
/// aliases easy, medium, hard.
Player::Kind player_kind_from_string(const std::string& name);

/// Free-vertex cap for the exact two-ply search.
inline constexpr int kBruteSmallCap = 60;

struct AiDecision {
  Vertex vertex = 0;
  /// Set when the strategy fell back to another one or used the opening rule.
  std::string note;
};

/// Chooses a move for the side to play. Throws GameError for human players
/// or when no legal move exists.
AiDecision ai_decide(const GameState& s, const Player& p);
Vertex ai_move(const GameState& s, const Player& p);

}  // namespace influence
