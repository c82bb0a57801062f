#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "influence/game.hpp"
#include "influence/generators.hpp"
#include "influence/serialize.hpp"

namespace influence {

/// Declarative description of one experiment run.
///
/// JSON schema (all keys optional except "graph"):
///
///     {"graph": {"family": "square_grid", "width": 11, "height": 11},
///      "graph_file": "edges.txt",
///      "zealots": "6:6;",
///      "m": 2, "eps": [0.15], "budget": 1, "seed": 1,
///      "players": ["greedy", "random"], "rounds": 3, "matches": 1,
///      "out": "map.csv"}
///
/// `m` is 1-based. `graph_file` replaces the generator; coordinates in
/// "zealots" then refer to `graph` only when it names a grid family.
struct ExperimentSpec {
  GraphSpec graph;
  std::string graph_file;
  std::string zealots;
  int m = 1;
  std::vector<double> eps{kDefaultEpsilon};
  int budget = 1;
  std::uint64_t seed = 1;
  std::array<std::string, 2> players{"greedy", "random"};
  int rounds = 3;
  int matches = 1;
  std::string out;
};

json experiment_to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const json& j);

/// FNV-1a of the canonical spec JSON with "out" removed.
std::string spec_hash(const ExperimentSpec& spec);

/// The graph, its rendering coordinates (empty for edge-list files) and the
/// zealot configuration named by a spec.
struct ExperimentSetup {
  std::shared_ptr<const Graph> graph;
  std::vector<Point> coords;
  ZealotConfig zealots{std::vector<VertexSet>(2)};
};

ExperimentSetup setup(const ExperimentSpec& spec);

/// Result document plus a CSV rendering where the command has one.
struct ExperimentOutput {
  json doc;
  std::string csv;
  /// One-line human summary for the terminal.
  std::string summary;
};

/// Normalized single-vertex energy map for authority m with the spec's
/// zealots fixed.
ExperimentOutput run_energy_map(const ExperimentSpec& spec);
/// Normalized relaxed optimum per epsilon in the spec, with a symmetry
/// report over the grid rotation and mirrors and the phi mass within two hops
/// of the opposing zealots (of Z_m when there are none). CSV output requires
/// a single epsilon.
ExperimentOutput run_phi_map(const ExperimentSpec& spec);
ExperimentOutput run_greedy(const ExperimentSpec& spec);
ExperimentOutput run_relax_select(const ExperimentSpec& spec);
/// Plays `matches` games between the two players; match k seeds random
/// players with seed + k. Winner 0 marks a tie within 1e-12.
ExperimentOutput run_match(const ExperimentSpec& spec);
/// Compares first- and second-mover shares for greedy self-play from every
/// opening vertex.
ExperimentOutput run_first_player(const ExperimentSpec& spec);

/// Builds a Player from a strategy tag ("relaxation" uses the spec's first
/// epsilon).
Player make_player(const std::string& tag, std::uint64_t seed, double epsilon);

/// Writes CSV when `path` ends in .csv and pretty JSON otherwise. Throws
/// InvalidInput when CSV is requested for a command without one.
void write_output(const ExperimentOutput& out, const std::string& path);

}  // namespace influence
