#include <doctest.h>

#include <filesystem>

#include "influence/experiment.hpp"
#include "influence/graph_io.hpp"
#include "influence/heatmap.hpp"
#include "support.hpp"

using namespace influence;

namespace {

ExperimentSpec grid_spec(const std::string& zealots, int m) {
  ExperimentSpec s;
  s.graph = GraphSpec::square_grid(11, 11);
  s.zealots = zealots;
  s.m = m;
  return s;
}

std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("influence_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("zealot syntax") {
  const GraphSpec grid = GraphSpec::square_grid(11, 11);
  CHECK(parse_zealot_groups("6:6;", grid) == std::vector<VertexSet>{VertexSet{60}, VertexSet{}});
  CHECK(parse_zealot_groups("60, 61 ; 0", grid) == std::vector<VertexSet>{VertexSet{60, 61}, VertexSet{0}});
  CHECK(parse_zealot_groups("", grid) == std::vector<VertexSet>{VertexSet{}, VertexSet{}});
  CHECK(parse_zealot_groups("1;2;3", grid).size() == 3);
  const GraphSpec h = GraphSpec::h_graph(5, 10, {5, 5}, {1, 5});
  CHECK(parse_zealot_groups("3:5,r3:5;", h)[0] == VertexSet{22, 72});
  CHECK(parse_vertex("l3:5", h) == 22);
  CHECK_THROWS_AS(parse_vertex("r3:5", grid), InvalidInput);
  CHECK_THROWS_AS(parse_vertex("12:1", grid), InvalidInput);
  CHECK_THROWS_AS(parse_vertex("x", grid), InvalidInput);
  CHECK_THROWS_AS(parse_vertex("1:1", GraphSpec::random_geometric(20, 0.5, 1)), InvalidInput);
  CHECK_THROWS_AS(parse_zealot_groups("3,3;", grid), InvalidInput);
}

TEST_CASE("graph and spec json round trips") {
  const Graph g = random_digraph(8, 0.3, 4);
  CHECK(graph_from_json(graph_to_json(g)) == g);
  const json j = graph_to_json(testing::path(3));
  CHECK(j["n"] == 3);
  CHECK(j["directed"] == false);
  CHECK(j["edges"].size() == 2);
  for (const GraphSpec& spec : {GraphSpec::square_grid(4, 5), GraphSpec::h_graph(5, 10, {5, 5}, {1, 5}),
                                GraphSpec::random_geometric(30, 0.4, 8), GraphSpec::tree(9, 3),
                                GraphSpec::square_grid_with_defect(11, 11, {6, 7}, {6, 8}), GraphSpec::cycle(6)})
    CHECK(generate(spec_from_json(spec_to_json(spec))) == generate(spec));
  CHECK_THROWS_AS(spec_from_json(json{{"family", "klein"}}), InvalidInput);
  CHECK_THROWS_AS(spec_from_json(json{{"family", "square_grid"}, {"width", "wide"}}), InvalidInput);
}

TEST_CASE("field csv") {
  const OpinionField u = solve_harmonic(testing::path(3), ZealotConfig({VertexSet{0}, VertexSet{2}}));
  CHECK(field_to_csv(u) == "vertex,u_1,u_2\n0,1,0\n1,0.5,0.5\n2,0,1\n");
  CHECK(field_to_json(u)["u"][1][0] == 0.5);
  CHECK(field_to_json(u)["k"] == 2);
}

TEST_CASE("experiment spec round trip and hash") {
  ExperimentSpec s = grid_spec("6:6;", 2);
  s.eps = {0.15, 0.015};
  s.players = {"relaxation", "brute_small"};
  const ExperimentSpec back = experiment_from_json(experiment_to_json(s));
  CHECK(experiment_to_json(back) == experiment_to_json(s));
  ExperimentSpec other = s;
  other.out = "elsewhere.csv";
  CHECK(spec_hash(other) == spec_hash(s));
  other.seed = 99;
  CHECK(spec_hash(other) != spec_hash(s));
  CHECK_THROWS_AS(experiment_from_json(json{{"graph", {{"family", "cycle"}, {"n", 5}}}, {"eps", {-1.0}}}),
                  InvalidInput);
  CHECK_THROWS_AS(experiment_from_json(json{{"graph", {{"family", "cycle"}, {"n", 5}}}, {"players", {"x", "greedy"}}}),
                  InvalidInput);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("energy map on the grid picks the four center neighbors") {
  const ExperimentOutput out = run_energy_map(grid_spec("6:6;", 2));
  CHECK(out.doc["map"]["argmax"] == json::array({49, 59, 61, 71}));
  CHECK(out.doc["map"]["authority"] == 2);
  CHECK(out.doc["map"]["vertices"].size() == 120);
  CHECK(out.csv.rfind("# spec_hash=", 0) == 0);
  const ExperimentOutput again = run_energy_map(grid_spec("6:6;", 2));
  CHECK(again.doc.dump() == out.doc.dump());
  CHECK(again.csv == out.csv);
}

TEST_CASE("energy map raw values are single-vertex set values") {
  const Graph g = generate(GraphSpec::square_grid(5, 5));
  const ZealotConfig z({VertexSet{12}, VertexSet{0}});
  const Heatmap h = energy_map(g, z, 1);
  for (Vertex v : {3, 7, 24}) CHECK(h.raw_at(v) == doctest::Approx(testing::oracle_value(g, z, 1, VertexSet{v})));
  const Heatmap flat = normalize_map("energy", 0, {1, 2}, {0.3, 0.3});
  CHECK(flat.degenerate);
  CHECK(flat.normalized == std::vector<double>{0.0, 0.0});
  CHECK(flat.argmax == std::vector<Vertex>{1, 2});
}

TEST_CASE("defect grid favors the vertex away from the missing edge") {
  ExperimentSpec s = grid_spec("6:6;", 2);
  s.graph = GraphSpec::square_grid_with_defect(11, 11, {6, 7}, {6, 8});
  const ExperimentOutput out = run_energy_map(s);
  double below = -1.0, above = -1.0;
  for (const auto& v : out.doc["map"]["vertices"]) {
    if (v["id"] == 49) below = v["normalized"];
    if (v["id"] == 71) above = v["normalized"];
  }
  CHECK(below > above);
  ExperimentSpec phi = s;
  const ExperimentOutput p = run_phi_map(phi);
  for (const auto& sym : p.doc["runs"][0]["symmetry"]) {
    if (sym["name"] == "mirror_x") {
      CHECK(sym["automorphism"] == true);
      CHECK(sym["deviation"].get<double>() <= 1e-6);
    }
    if (sym["name"] == "mirror_y") CHECK(sym["automorphism"] == false);
  }
}

TEST_CASE("phi map on the grid is symmetric") {
  const ExperimentOutput out = run_phi_map(grid_spec("6:6;", 2));
  const json& run = out.doc["runs"][0];
  CHECK(run["projected_gradient_norm"].get<double>() <= 1e-7);
  for (const auto& sym : run["symmetry"]) {
    CHECK(sym["automorphism"] == true);
    CHECK(sym["deviation"].get<double>() <= 1e-4);
  }
  const auto arg = run["map"]["argmax"];
  for (const auto& v : arg) CHECK((v == 49 || v == 59 || v == 61 || v == 71));
}

TEST_CASE("h-graph localization grows as epsilon shrinks") {
  ExperimentSpec s;
  s.graph = GraphSpec::h_graph(5, 10, {5, 5}, {1, 5});
  s.zealots = "3:5,r3:5;";
  s.m = 2;
  s.eps = {0.15, 0.05, 0.015};
  const ExperimentOutput out = run_phi_map(s);
  double prev = -1.0;
  for (const auto& run : out.doc["runs"]) {
    const double mass = run["localization_mass"];
    CHECK(mass > prev);
    prev = mass;
  }
  CHECK(out.csv.empty());
}

TEST_CASE("greedy and relaxation commands") {
  ExperimentSpec s = grid_spec("6:6;", 2);
  s.budget = 2;
  const json g = run_greedy(s).doc["solution"];
  CHECK(g["chosen"].size() == 2);
  CHECK(g["trace"].size() == 2);
  CHECK(g["chosen"][0] == 49);
  const json r = run_relax_select(s).doc["solution"];
  CHECK(r["chosen"].size() == 2);
}

TEST_CASE("greedy beats random in seeded matches") {
  ExperimentSpec s;
  s.graph = GraphSpec::random_geometric(50, 0.3, 1);
  s.players = {"greedy", "random"};
  s.matches = 20;
  const ExperimentOutput out = run_match(s);
  CHECK(out.doc["wins"][0].get<int>() >= 18);
  for (const auto& m : out.doc["matches"]) {
    const auto& shares = m["final_shares"];
    CHECK(shares[0].get<double>() + shares[1].get<double>() == doctest::Approx(1.0));
    CHECK(m["moves"].size() == 6);
  }
  CHECK(run_match(s).doc.dump() == out.doc.dump());
  s.players = {"human", "greedy"};
  CHECK_THROWS_AS(run_match(s), InvalidInput);
}

TEST_CASE("first-player experiment") {
  ExperimentSpec s;
  s.graph = GraphSpec::cycle(6);
  s.rounds = 1;
  const json doc = run_first_player(s).doc;
  CHECK(doc["games"] == 6);
  CHECK(doc["openings"].size() == 6);
}

TEST_CASE("outputs are written byte-identically") {
  const auto dir = temp_dir("outputs");
  const ExperimentOutput out = run_energy_map(grid_spec("6:6;", 2));
  write_output(out, (dir / "a.csv").string());
  write_output(run_energy_map(grid_spec("6:6;", 2)), (dir / "b.csv").string());
  CHECK(read_text_file((dir / "a.csv").string()) == read_text_file((dir / "b.csv").string()));
  write_output(out, (dir / "a.json").string());
  CHECK(json::parse(read_text_file((dir / "a.json").string())) == out.doc);
  CHECK_THROWS_AS(write_output(run_greedy(grid_spec("6:6;", 2)), (dir / "g.csv").string()), InvalidInput);
}

TEST_CASE("graph files feed experiments") {
  const auto dir = temp_dir("graph_file");
  const auto path = (dir / "p.txt").string();
  write_graph_file(testing::path(4), path);
  ExperimentSpec s;
  s.graph_file = path;
  s.zealots = "0;3";
  s.budget = 1;
  const json sol = run_greedy(s).doc["solution"];
  CHECK(sol["chosen"] == json::array({2}));
  CHECK(sol["value"].get<double>() == doctest::Approx(0.75));
}
