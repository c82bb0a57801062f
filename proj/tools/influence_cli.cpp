#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "influence/experiment.hpp"
#include "influence/graph_io.hpp"
#include "influence/properties.hpp"
#include "influence/relaxation.hpp"
#include "influence/service.hpp"

namespace {

using namespace influence;

struct SpecFlags {
  std::string spec_file;
  std::string graph;
  std::string params;
  std::string zealots;
  std::optional<int> m;
  std::vector<double> eps;
  std::optional<int> budget;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> players;
  std::optional<int> rounds;
  std::optional<int> matches;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& f) {
  cmd->add_option("--spec", f.spec_file, "ExperimentSpec JSON file; flags override its fields");
  cmd->add_option("--graph", f.graph, "Generator family name or an edge-list file");
  cmd->add_option("--params", f.params, "Generator parameters: JSON object or key=value,... list");
  cmd->add_option("--zealots", f.zealots, "Zealot groups, e.g. \"6:6;\" or \"r3:5;l8:5\"");
  cmd->add_option("--m", f.m, "Authority (1-based)");
  cmd->add_option("--eps", f.eps, "Penalty epsilon (repeatable)");
  cmd->add_option("--budget", f.budget, "Number of conversions");
  cmd->add_option("--seed", f.seed, "Seed");
  cmd->add_option("--out", f.out, "Output file; .csv writes CSV, anything else JSON");
}

// key=value pairs; values are parsed as JSON when possible, else kept as strings.
json parse_params(const std::string& text) {
  if (text.empty()) return json::object();
  if (text.front() == '{') return json::parse(text);
  json j = json::object();
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string pair = text.substr(start, end - start);
    const auto eq = pair.find('=');
    if (eq == std::string::npos) throw InvalidInput("parameter '" + pair + "' is not key=value");
    const std::string key = pair.substr(0, eq);
    const std::string value = pair.substr(eq + 1);
    try {
      j[key] = json::parse(value);
    } catch (const json::parse_error&) {
      j[key] = value;
    }
    start = end + 1;
  }
  return j;
}

ExperimentSpec build_spec(const SpecFlags& f) {
  json j = f.spec_file.empty() ? json::object() : json::parse(read_text_file(f.spec_file));
  if (!j.is_object()) throw InvalidInput("spec file must hold a JSON object");
  if (!f.graph.empty()) {
    if (std::filesystem::is_regular_file(f.graph)) {
      j["graph_file"] = f.graph;
    } else {
      json g = j.value("graph", json::object());
      g["family"] = f.graph;
      j["graph"] = g;
    }
  }
  if (!f.params.empty()) {
    json g = j.value("graph", json::object());
    g.update(parse_params(f.params));
    j["graph"] = g;
  }
  if (!j.contains("graph") && !j.contains("graph_file")) throw InvalidInput("no graph given (--graph or --spec)");
  if (j.contains("graph_file") && !j.contains("graph")) j["graph"] = {{"family", "square_grid"}};
  if (!f.zealots.empty()) j["zealots"] = f.zealots;
  if (f.m) j["m"] = *f.m;
  if (!f.eps.empty()) j["eps"] = f.eps;
  if (f.budget) j["budget"] = *f.budget;
  if (f.seed) j["seed"] = *f.seed;
  if (!f.out.empty()) j["out"] = f.out;
  if (!f.players.empty()) j["players"] = f.players;
  if (f.rounds) j["rounds"] = *f.rounds;
  if (f.matches) j["matches"] = *f.matches;
  return experiment_from_json(j);
}

int emit(const ExperimentOutput& out, const ExperimentSpec& spec) {
  if (spec.out.empty()) {
    std::cout << out.doc.dump(2) << '\n';
  } else {
    write_output(out, spec.out);
    std::cout << out.summary << '\n';
  }
  return 0;
}

HttpServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Opinion-influence experiments, strategy comparisons and game server"};
  app.require_subcommand(1);

  SpecFlags flags;
  auto* energy = app.add_subcommand("energy-map", "Normalized single-vertex energy map");
  auto* phi = app.add_subcommand("phi-map", "Normalized relaxed optimum with symmetry report");
  auto* greedy_cmd = app.add_subcommand("greedy", "Greedy conversion set");
  auto* relax = app.add_subcommand("relax-select", "Relaxation-guided conversion set");
  auto* match = app.add_subcommand("match", "Play automatic strategies against each other");
  auto* first = app.add_subcommand("first-player", "Greedy self-play from every opening vertex");
  for (auto* cmd : {energy, phi, greedy_cmd, relax, match, first}) add_spec_flags(cmd, flags);
  match->add_option("--players", flags.players, "Two strategies: random, greedy, relaxation, brute_small")->expected(2);
  match->add_option("--rounds", flags.rounds, "Moves per player (0 = until the board is full)");
  match->add_option("--matches", flags.matches, "Number of seeded matches");
  first->add_option("--rounds", flags.rounds, "Moves per player (0 = until the board is full)");

  auto* graph_cmd = app.add_subcommand("graph", "Write a generated graph as an edge list");
  add_spec_flags(graph_cmd, flags);

  std::uint64_t props_seed = 1;
  std::string mutate = "none";
  auto* props = app.add_subcommand("props", "Run the property suite; nonzero exit on failure");
  props->add_option("--seed", props_seed, "Seed");
  props->add_option("--mutate", mutate, "Self-test corruption: none or gradient");

  std::string host = "127.0.0.1";
  int port = 8080;
  long ttl = 3600;
  long budget_ms = 5000;
  std::string snapshot_dir;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Run the game server");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--session-ttl", ttl, "Idle session lifetime in seconds");
  serve->add_option("--ai-budget-ms", budget_ms, "Time budget per automatic move (0 = unlimited)");
  serve->add_option("--snapshot-dir", snapshot_dir, "Persist sessions as JSON snapshots here");
  serve->add_option("--static-dir", static_dir, "Serve browser client files under /ui");

  CLI11_PARSE(app, argc, argv);

  try {
    if (props->parsed()) {
      const PropertyReport report = run_property_suite(props_seed, mutation_from_string(mutate));
      for (const auto& r : report.results)
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
      return report.passed() ? 0 : 1;
    }
    if (serve->parsed()) {
      ServiceOptions opts;
      opts.session_ttl = std::chrono::seconds(ttl);
      opts.ai_budget = std::chrono::milliseconds(budget_ms);
      opts.snapshot_dir = snapshot_dir;
      GameService service(opts);
      HttpServer server(service, static_dir);
      const int bound = server.bind(host, port);
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on http://" << host << ":" << bound << std::endl;
      server.listen();
      return 0;
    }
    const ExperimentSpec spec = build_spec(flags);
    if (graph_cmd->parsed()) {
      const auto s = setup(spec);
      if (spec.out.empty())
        std::cout << write_graph(*s.graph);
      else
        write_graph_file(*s.graph, spec.out);
      return 0;
    }
    if (energy->parsed()) return emit(run_energy_map(spec), spec);
    if (phi->parsed()) return emit(run_phi_map(spec), spec);
    if (greedy_cmd->parsed()) return emit(run_greedy(spec), spec);
    if (relax->parsed()) return emit(run_relax_select(spec), spec);
    if (match->parsed()) return emit(run_match(spec), spec);
    if (first->parsed()) return emit(run_first_player(spec), spec);
  } catch (const ConvergenceError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
