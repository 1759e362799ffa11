#include "gnep/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "gnep/errors.hpp"
#include "gnep/instances.hpp"

namespace gnep::cli {

namespace {

using json = nlohmann::json;

json number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15)
    return static_cast<std::int64_t>(v);
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct SolverFlags {
  std::string strategy = "auto";
  double time_limit = 3600.0;
  std::size_t node_limit = 1'000'000;
  std::size_t cut_budget = 10'000;
  double tol_ne = 1e-5;
  double tol_prune = 1e-5;
  double tol_gap = 1e-4;
  double tol_violation = 5e-6;
  double epsilon = 1.0;
  bool aggregate = false;

  void attach(CLI::App* app) {
    app->add_option("--cut-strategy", strategy, "equilibrium | intersection | nogood | auto")
        ->check(CLI::IsMember({"equilibrium", "intersection", "nogood", "auto"}));
    app->add_option("--time-limit", time_limit, "Wall-clock limit in seconds");
    app->add_option("--node-limit", node_limit, "Maximum number of tree nodes");
    app->add_option("--cut-budget", cut_budget, "Maximum cuts added at one node");
    app->add_option("--tol-ne", tol_ne, "Equilibrium tolerance on psi");
    app->add_option("--tol-prune", tol_prune, "Prune nodes with value above this");
    app->add_option("--tol-gap", tol_gap, "Regret gap selecting cut players");
    app->add_option("--tol-violation", tol_violation, "Minimum violation of an added cut");
    app->add_option("--epsilon", epsilon, "Relaxation of the NE-free sets");
    app->add_flag("--aggregate", aggregate, "Aggregate the equilibrium cuts of a round");
  }

  SolverConfig config() const {
    SolverConfig c;
    c.cut_strategy = parse_cut_strategy(strategy);
    c.time_limit_s = time_limit;
    c.node_limit = node_limit;
    c.cut_budget_per_node = cut_budget;
    c.tol.equilibrium = tol_ne;
    c.tol.prune = tol_prune;
    c.tol.regret_gap = tol_gap;
    c.tol.cut_violation = tol_violation;
    c.ic_epsilon = epsilon;
    c.aggregate_equilibrium_cuts = aggregate;
    return c;
  }
};

struct GenerateFlags {
  std::string family;
  std::size_t n = 2;
  std::size_t m = 5;
  double ratio = 0.5;
  std::string correlation = "uncorrelated";
  bool mixed = false;
  std::uint64_t seed = 0;
  std::size_t nodes = 10;
  std::size_t layers = 4;
  double density = 0.5;
  std::size_t players = 2;
  int max_demand = 2;
  double max_utility = 10.0;
  std::string out;
};

bool ratio_in(double r, std::initializer_list<double> allowed) {
  return std::any_of(allowed.begin(), allowed.end(),
                     [&](double a) { return std::abs(a - r) < 1e-12; });
}

int cmd_generate(const GenerateFlags& f, std::ostream& out, std::ostream& err) {
  GnepInstance inst;
  if (f.family == "knapsack") {
    if (!ratio_in(f.ratio, {0.2, 0.5, 0.8})) {
      err << "error: --ratio must be one of 0.2, 0.5, 0.8 for knapsack games\n";
      return kExitUsage;
    }
    inst = gen_knapsack({f.n, f.m, f.ratio, parse_correlation(f.correlation), !f.mixed, f.seed});
  } else if (f.family == "generalized-knapsack") {
    if (!ratio_in(f.ratio, {0.2, 0.5})) {
      err << "error: --ratio must be 0.2 or 0.5 for generalized knapsack games\n";
      return kExitUsage;
    }
    inst = gen_generalized_knapsack({f.n, f.m, f.ratio, parse_correlation(f.correlation), f.seed, {}});
  } else if (f.family == "implementation") {
    RandomGraphParams g;
    g.num_nodes = f.nodes;
    g.num_layers = f.layers;
    g.density = f.density;
    g.num_players = f.players;
    g.max_demand = f.max_demand;
    g.max_utility = f.max_utility;
    g.seed = f.seed;
    inst = gen_implementation_game(random_implementation_params(g));
  } else if (f.family == "appendix-b") {
    inst = appendix_b_fixture();
  } else if (f.family == "ic-example") {
    inst = ic_example_fixture();
  } else {
    err << "error: unknown family '" << f.family << "'\n";
    return kExitUsage;
  }
  if (f.out.empty() || f.out == "-") {
    out << serialize_instance(inst);
  } else {
    save_instance(inst, f.out);
  }
  return 0;
}

int cmd_solve(const std::string& path, const SolverFlags& flags, std::ostream& out,
              std::ostream& err) {
  GnepInstance inst;
  try {
    inst = load_instance(path);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  }
  SolverConfig config = flags.config();
  const SolveResult result = solve(inst, config);
  out << result_to_json(inst, result).dump(2) << '\n';
  return exit_code(result.status);
}

std::size_t m_or_nodes(const GnepInstance& inst) {
  const auto& meta = inst.meta;
  if (meta.contains("generator") && meta.at("generator").contains("m"))
    return meta.at("generator").at("m").get<std::size_t>();
  if (meta.contains("graph")) return meta.at("graph").at("num_nodes").get<std::size_t>();
  return inst.num_vars();
}

int cmd_bench(const std::string& dir, const std::string& csv, std::size_t workers,
              const SolverFlags& flags, std::ostream& out, std::ostream& err) {
  if (!std::filesystem::is_directory(dir)) {
    err << "error: " << dir << " is not a directory\n";
    return kExitUsage;
  }
  const auto rows = bench_directory(dir, flags.config(), workers);
  std::ostringstream text;
  text << bench_header() << '\n';
  for (const auto& r : rows) text << bench_row(r) << '\n';
  if (csv.empty() || csv == "-") {
    out << text.str();
  } else {
    std::ofstream f(csv);
    if (!f) {
      err << "error: cannot write " << csv << '\n';
      return kExitUsage;
    }
    f << text.str();
  }
  return 0;
}

int cmd_ecdf(const std::string& path, const std::string& column, const std::string& dest,
             std::ostream& out, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    err << "error: cannot open " << path << '\n';
    return kExitUsage;
  }
  std::string line;
  if (!std::getline(in, line)) {
    err << "error: " << path << " is empty\n";
    return kExitUsage;
  }
  const auto header = split_csv_line(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) {
    err << "error: unknown column '" << column << "'\n";
    return kExitUsage;
  }
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (col >= cells.size()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(cells[col], &used);
      if (used == cells[col].size()) values.push_back(v);
    } catch (const std::exception&) {
    }
  }
  std::ostringstream text;
  text << "value,fraction\n";
  for (const auto& [v, frac] : ecdf(values)) text << format_double(v) << ',' << format_double(frac) << '\n';
  if (dest.empty() || dest == "-") {
    out << text.str();
  } else {
    std::ofstream f(dest);
    f << text.str();
  }
  return 0;
}

}  // namespace

int exit_code(SolveStatus status) {
  switch (status) {
    case SolveStatus::EquilibriumFound: return kExitFound;
    case SolveStatus::NoEquilibrium: return kExitNone;
    case SolveStatus::TimeLimit:
    case SolveStatus::NodeLimit: return kExitLimit;
  }
  return kExitLimit;
}

json result_to_json(const GnepInstance& instance, const SolveResult& result) {
  json doc;
  doc["status"] = std::string(to_string(result.status));
  if (result.equilibrium) {
    const auto& eq = *result.equilibrium;
    json x = json::array(), costs = json::array();
    for (double v : eq.x) x.push_back(number(v));
    for (double c : eq.costs) costs.push_back(number(c));
    double audit = 0.0;
    bool passed = false;
    try {
      audit = eval_vhat(instance, eq.x);
      passed = audit <= 1e-5;
    } catch (const std::exception&) {
    }
    doc["equilibrium"] = {{"x", x}, {"costs", costs}, {"vhat", eq.vhat}};
    doc["audit"] = {{"vhat", audit}, {"passed", passed}};
  } else {
    doc["equilibrium"] = nullptr;
  }
  const auto& s = result.stats;
  doc["stats"] = {{"nodes_visited", s.nodes_visited},
                  {"lp_calls", s.lp_calls},
                  {"milp_calls", s.milp_calls},
                  {"cuts",
                   {{"equilibrium", s.cuts_equilibrium},
                    {"aggregated_equilibrium", s.cuts_aggregated},
                    {"intersection", s.cuts_intersection},
                    {"nogood", s.cuts_nogood}}},
                  {"ic_all_infinite", s.ic_all_infinite},
                  {"ic_unavailable", s.ic_unavailable},
                  {"stalled_nodes", s.stalled_nodes},
                  {"max_depth", s.max_depth},
                  {"wall_time_s", s.wall_time_s}};
  return doc;
}

std::string bench_header() {
  return "instance_id,family,n,m_or_nodes,status,wall_time_ms,nodes_visited,cuts_equilibrium,"
         "cuts_intersection,cuts_nogood,vhat_final,note";
}

std::string bench_row(const BenchRecord& r) {
  std::ostringstream os;
  os << csv_field(r.instance_id) << ',' << csv_field(r.family) << ',' << r.n << ','
     << r.m_or_nodes << ',' << r.status << ',' << format_double(r.wall_time_ms) << ','
     << r.nodes_visited << ',' << r.cuts_equilibrium << ',' << r.cuts_intersection << ','
     << r.cuts_nogood << ',' << format_double(r.vhat_final) << ',' << csv_field(r.note);
  return os.str();
}

BenchRecord bench_one(const std::filesystem::path& path, const SolverConfig& config) {
  BenchRecord rec;
  rec.instance_id = path.stem().string();
  try {
    const GnepInstance inst = load_instance(path);
    rec.family = inst.family;
    rec.n = inst.num_players();
    rec.m_or_nodes = m_or_nodes(inst);
    const SolveResult result = solve(inst, config);
    rec.status = std::string(to_string(result.status));
    rec.wall_time_ms = result.stats.wall_time_s * 1000.0;
    rec.nodes_visited = result.stats.nodes_visited;
    rec.cuts_equilibrium = result.stats.cuts_equilibrium + result.stats.cuts_aggregated;
    rec.cuts_intersection = result.stats.cuts_intersection;
    rec.cuts_nogood = result.stats.cuts_nogood;
    if (result.equilibrium) rec.vhat_final = result.equilibrium->vhat;
  } catch (const std::exception& e) {
    rec.status = "Error";
    rec.note = e.what();
  }
  return rec;
}

std::vector<BenchRecord> bench_directory(const std::filesystem::path& dir,
                                         const SolverConfig& config, std::size_t workers) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.stem().string() < b.stem().string();
  });

  std::vector<BenchRecord> rows(files.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < files.size(); k = next++) rows[k] = bench_one(files[k], config);
  };
  const std::size_t count = std::max<std::size_t>(1, std::min(workers, files.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return rows;
}

std::vector<std::pair<double, double>> ecdf(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<std::pair<double, double>> out;
  const double total = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    out.emplace_back(values[i], static_cast<double>(i + 1) / total);
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cells.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cells.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.emplace_back();
    } else if (c != '\r') {
      cells.back() += c;
    }
  }
  return cells;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pure equilibria of mixed-integer games by branch-and-cut", "gnep"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a generated or fixture instance");
  generate->add_option("family", gen.family,
                       "knapsack | generalized-knapsack | implementation | appendix-b | ic-example")
      ->required();
  generate->add_option("--n", gen.n, "Number of players");
  generate->add_option("--m", gen.m, "Number of items");
  generate->add_option("--ratio", gen.ratio, "Capacity as a fraction of total weight");
  generate->add_option("--corr", gen.correlation, "uncorrelated | weak | strong")
      ->check(CLI::IsMember({"uncorrelated", "weak", "strong"}));
  generate->add_flag("--mixed", gen.mixed, "Only items with even index are integer");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("--nodes", gen.nodes, "Graph nodes (implementation games)");
  generate->add_option("--layers", gen.layers, "Graph layers (implementation games)");
  generate->add_option("--density", gen.density, "Arc probability between layers");
  generate->add_option("--players", gen.players, "Flow players (implementation games)");
  generate->add_option("--max-demand", gen.max_demand, "Upper end of demands and capacities");
  generate->add_option("--max-utility", gen.max_utility, "Upper end of arc utilities");
  generate->add_option("-o,--out", gen.out, "Output file (default stdout)");

  std::string solve_path;
  SolverFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Search an instance for a pure equilibrium");
  solve_cmd->add_option("instance", solve_path, "Instance JSON file")->required();
  solve_flags.attach(solve_cmd);

  std::string bench_dir, bench_csv;
  std::size_t workers = 1;
  SolverFlags bench_flags;
  bench_flags.time_limit = 60.0;
  auto* bench = app.add_subcommand("bench", "Solve every instance of a directory");
  bench->add_option("dir", bench_dir, "Directory of instance JSON files")->required();
  bench->add_option("--csv", bench_csv, "Output CSV (default stdout)");
  bench->add_option("--workers", workers, "Concurrent solves")->check(CLI::PositiveNumber);
  bench_flags.attach(bench);

  std::string ecdf_path, ecdf_column, ecdf_out;
  auto* ecdf_cmd = app.add_subcommand("ecdf", "Empirical CDF of one column of a bench CSV");
  ecdf_cmd->add_option("csv", ecdf_path, "Bench CSV file")->required();
  ecdf_cmd->add_option("--column", ecdf_column, "Column name")->required();
  ecdf_cmd->add_option("-o,--out", ecdf_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out, err);
    if (*solve_cmd) return cmd_solve(solve_path, solve_flags, out, err);
    if (*bench) return cmd_bench(bench_dir, bench_csv, workers, bench_flags, out, err);
    if (*ecdf_cmd) return cmd_ecdf(ecdf_path, ecdf_column, ecdf_out, out, err);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace gnep::cli
