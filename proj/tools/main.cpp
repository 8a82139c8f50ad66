#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qiro/bench.hpp"
#include "qiro/instances.hpp"
#include "verify.hpp"

namespace fs = std::filesystem;
using namespace qiro;
using namespace qiro::bench;

namespace {

/// Ensemble and provider flags shared by gen, solve and bench. Unset flags
/// leave config values alone.
struct Flags
{
  std::string problem;
  std::string graph;
  std::vector<int> n;
  std::vector<double> degree;
  std::vector<double> alpha;
  std::vector<double> lambda;
  std::vector<double> q;
  std::vector<int> p;
  std::optional<int> nc;
  std::optional<int> grid;
  std::optional<int> runs;
  std::optional<int> instances;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> algos;
  std::string gradient;
  std::optional<int> side;
  std::optional<double> fill;
  std::optional<double> radius;
};

void add_problem_flags(CLI::App* app, Flags& f)
{
  app->add_option("--problem", f.problem, "mis or max2sat")->check(CLI::IsMember({"mis", "max2sat"}));
  app->add_option("--graph", f.graph, "erdos-renyi or unit-disk")->check(CLI::IsMember({"erdos-renyi", "unit-disk"}));
  app->add_option("--n", f.n, "vertices or variables (list allowed in bench)");
  app->add_option("--degree", f.degree, "expected Erdos-Renyi degree");
  app->add_option("--alpha", f.alpha, "clauses per variable");
  app->add_option("--side", f.side, "unit-disk lattice side");
  app->add_option("--fill", f.fill, "unit-disk fill fraction");
  app->add_option("--radius", f.radius, "unit-disk radius in lattice units");
  app->add_option("--seed", f.seed, "master seed");
}

void add_solver_flags(CLI::App* app, Flags& f)
{
  app->add_option("--lambda", f.lambda, "MIS penalty, > 1");
  app->add_option("--q", f.q, "parameter quality quantile in [0, 1] (p = 1 only)");
  app->add_option("--p", f.p, "QAOA depth");
  app->add_option("--nc", f.nc, "recursion threshold");
  app->add_option("--grid", f.grid, "grid points per angle at p = 1");
  app->add_option("--gradient", f.gradient, "gradient for p > 1: central-difference or adjoint");
}

/// Folds flags into a config; the result is validated by the caller.
void apply(const Flags& f, ExperimentConfig& c)
{
  if (!f.problem.empty()) c.problem = parse_problem(f.problem);
  if (!f.graph.empty()) c.family = parse_family(f.graph);
  if (!f.n.empty()) c.n = f.n;
  if (!f.degree.empty()) c.density = f.degree;
  if (!f.alpha.empty()) c.density = f.alpha;
  if (f.side) c.udg.lattice_side = *f.side;
  if (f.fill) c.udg.fill_fraction = *f.fill;
  if (f.radius) c.udg.radius = *f.radius;
  if (!f.lambda.empty()) c.lambda = f.lambda;
  if (!f.q.empty()) c.q = f.q;
  if (!f.p.empty()) c.p = f.p;
  if (f.nc) c.nc = *f.nc;
  if (f.grid) c.grid = *f.grid;
  if (f.runs) c.runs = *f.runs;
  if (f.instances) c.instances = *f.instances;
  if (f.seed) c.seed = *f.seed;
  if (!f.gradient.empty()) c.gd.gradient = parse_gradient(f.gradient);
  if (!f.algos.empty()) {
    c.algorithms.clear();
    for (const auto& a : f.algos) c.algorithms.push_back(parse_algorithm(a));
  }
}

/// Writes to `path`, or to stdout when it is empty or "-".
template <class Fn>
void with_output(const std::string& path, Fn fn)
{
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  fn(out);
}

int cmd_gen(const Flags& f, const std::string& out)
{
  ExperimentConfig c;
  c.instances = 1;
  apply(f, c);
  if (f.degree.empty() && f.alpha.empty() && c.problem == Problem::max2sat) c.density = {1.0};
  c.validate();
  const bool udg = c.family == GraphFamily::unit_disk;
  const std::vector<int> ns = udg ? std::vector<int>{c.udg.lattice_side} : c.n;
  const std::vector<double> ds = udg ? std::vector<double>{c.udg.fill_fraction} : c.density;
  std::vector<std::pair<std::string, std::string>> files; // id, content
  for (int n : ns)
    for (double d : ds)
      for (int k = 0; k < c.instances; ++k) {
        const auto id = instance_id(c, n, d, k);
        const auto seed = instance_seed(c.seed, id);
        std::ostringstream ss;
        if (udg) {
          UdgConfig u = c.udg;
          u.seed = seed;
          write_edge_list(ss, gen_udg_lattice(u));
        } else if (c.problem == Problem::mis) {
          write_edge_list(ss, gen_erdos_renyi({n, d, seed}));
        } else {
          write_dimacs(ss, gen_random_max2sat({n, d, seed}));
        }
        files.emplace_back(id, ss.str());
      }
  if (files.size() == 1) {
    with_output(out, [&](std::ostream& os) { os << files[0].second; });
    return 0;
  }
  if (out.empty() || out == "-") throw std::invalid_argument("gen: several instances need --out DIR");
  fs::create_directories(out);
  const char* ext = c.problem == Problem::mis ? ".edges" : ".cnf";
  for (const auto& [id, text] : files) {
    std::ofstream os(fs::path(out) / (id + ext), std::ios::binary);
    os << text;
  }
  std::cerr << "wrote " << files.size() << " instances to " << out << '\n';
  return 0;
}

int cmd_solve(const Flags& f, const std::string& in, const std::string& algo, const std::string& out)
{
  ExperimentConfig c;
  apply(f, c);
  const Algorithm a = parse_algorithm(algo);
  std::ifstream is(in);
  if (!is) throw std::runtime_error("cannot open " + in);
  SolveOptions o;
  o.lambda = c.lambda.front();
  o.nc = c.threshold();
  o.seed = c.seed;
  const int p = c.p.front();
  const double q = c.q.front();
  if (p > 1 && q != 0.0) throw std::invalid_argument("solve: --q only applies at --p 1");
  const auto provider = make_provider(p, q, c.grid, c.gd);
  nlohmann::ordered_json j;
  j["problem"] = to_string(c.problem);
  j["algorithm"] = to_string(a);
  if (c.problem == Problem::mis) {
    const Graph g = read_edge_list(is);
    const auto s = solve_mis(g, a, o, *provider);
    j["objective"] = s.objective;
    j["valid"] = s.valid;
    j["provider_calls"] = s.provider_calls;
    j["vertices"] = s.vertices;
  } else {
    const CnfFormula phi = read_dimacs(is);
    const auto s = solve_maxsat(phi, a, o, *provider);
    j["objective"] = s.objective;
    j["valid"] = s.valid;
    j["provider_calls"] = s.provider_calls;
    std::vector<int> values;
    for (int v = 0; v < s.assignment.size(); ++v) values.push_back(s.assignment[v] ? 1 : 0);
    j["assignment"] = values;
  }
  with_output(out, [&](std::ostream& os) { os << j.dump() << '\n'; });
  return 0;
}

int cmd_bench(const Flags& f, const std::string& config, const std::string& out, const std::string& summary,
              bool timing, std::optional<int> threads, bool print_config, bool quiet)
{
  ExperimentConfig c = config.empty() ? ExperimentConfig{} : load_config(config);
  apply(f, c);
  if (threads) c.threads = *threads;
  c.validate();
  if (print_config) {
    std::cout << config_to_json(c) << '\n';
    return 0;
  }
  RunOptions options;
  options.timing = timing;
  if (!quiet)
    options.progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 50 == 0) std::cerr << "\r" << done << '/' << total << " cells" << std::flush;
    };
  const auto records = run_experiment(c, options);
  if (!quiet) std::cerr << '\n';
  with_output(out, [&](std::ostream& os) { write_jsonl(os, records); });
  if (!summary.empty()) with_output(summary, [&](std::ostream& os) { write_summary_csv(os, summarize(records)); });
  return 0;
}

int cmd_report(const std::string& in, const std::string& out)
{
  std::ifstream is(in);
  if (!is) throw std::runtime_error("cannot open " + in);
  const auto records = read_jsonl(is);
  with_output(out, [&](std::ostream& os) { write_summary_csv(os, summarize(records)); });
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"QIRO / RQAOA laboratory for MIS and MAX-2-SAT"};
  app.require_subcommand(1);
  Flags flags;
  std::string in;
  std::string out;

  auto* gen = app.add_subcommand("gen", "generate instances (edge list for MIS, DIMACS for MAX-2-SAT)");
  add_problem_flags(gen, flags);
  gen->add_option("--instances", flags.instances, "number of instances per ensemble point");
  gen->add_option("--out", out, "output file, or directory for several instances");

  std::string algo;
  auto* solve = app.add_subcommand("solve", "run one algorithm on one instance");
  add_problem_flags(solve, flags);
  add_solver_flags(solve, flags);
  solve->add_option("--in", in, "instance file")->required();
  solve->add_option("--algo", algo, "qiro, qiro-bt, rqaoa, greedy-min, greedy-rand, sa, pt or brute")->required();
  solve->add_option("--out", out, "JSON result file (default stdout)");

  std::string config;
  std::string summary;
  bool timing = false;
  bool print_config = false;
  bool quiet = false;
  std::optional<int> threads;
  auto* bench = app.add_subcommand("bench", "run a full experiment and emit JSONL records");
  bench->add_option("--config", config, "JSON experiment config");
  add_problem_flags(bench, flags);
  add_solver_flags(bench, flags);
  bench->add_option("--algo", flags.algos, "algorithm roster (overrides the config)");
  bench->add_option("--runs", flags.runs, "runs per instance");
  bench->add_option("--instances", flags.instances, "instances per ensemble point");
  bench->add_option("--threads", threads, "worker threads; results do not depend on it");
  bench->add_option("--out", out, "JSONL output (default stdout)");
  bench->add_option("--summary", summary, "also write the CSV summary here");
  bench->add_flag("--timing", timing, "record wall-clock ms per cell (breaks byte-identical replays)");
  bench->add_flag("--print-config", print_config, "print the effective config and exit");
  bench->add_flag("--quiet", quiet, "no progress output");

  int trials = 0;
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "run the built-in oracle suites");
  verify->add_option("--trials", trials, "trials per suite (0 = suite default)");
  verify->add_option("--seed", verify_seed, "seed of the random instances");

  auto* report = app.add_subcommand("report", "summarize JSONL records into CSV");
  report->add_option("--in", in, "JSONL records")->required();
  report->add_option("--out", out, "CSV output (default stdout)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return cmd_gen(flags, out);
    if (*solve) return cmd_solve(flags, in, algo, out);
    if (*bench) return cmd_bench(flags, config, out, summary, timing, threads, print_config, quiet);
    if (*verify) return qiro::cli::run_verify(std::cout, trials, verify_seed) ? 0 : 1;
    if (*report) return cmd_report(in, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
