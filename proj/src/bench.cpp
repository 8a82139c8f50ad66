#include "qiro/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "qiro/qiro.hpp"
#include "qiro/rqaoa.hpp"

namespace qiro::bench {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <class Enum, std::size_t N>
Enum parse_enum(std::string_view s, const std::pair<Enum, std::string_view> (&table)[N], const char* what)
{
  for (const auto& [value, name] : table)
    if (name == s) return value;
  std::string options;
  for (const auto& [value, name] : table) options += (options.empty() ? "" : ", ") + std::string(name);
  throw std::invalid_argument(std::string("unknown ") + what + " '" + std::string(s) + "' (expected " + options + ")");
}

template <class Enum, std::size_t N>
std::string_view enum_name(Enum e, const std::pair<Enum, std::string_view> (&table)[N])
{
  for (const auto& [value, name] : table)
    if (value == e) return name;
  throw std::logic_error("enum value without a name");
}

constexpr std::pair<Problem, std::string_view> kProblems[] = {{Problem::mis, "mis"}, {Problem::max2sat, "max2sat"}};
constexpr std::pair<GraphFamily, std::string_view> kFamilies[] = {{GraphFamily::erdos_renyi, "erdos-renyi"},
                                                                  {GraphFamily::unit_disk, "unit-disk"}};
constexpr std::pair<Algorithm, std::string_view> kAlgorithms[] = {
  {Algorithm::qiro, "qiro"},         {Algorithm::qiro_bt, "qiro-bt"},         {Algorithm::rqaoa, "rqaoa"},
  {Algorithm::greedy_min, "greedy-min"}, {Algorithm::greedy_rand, "greedy-rand"}, {Algorithm::sa, "sa"},
  {Algorithm::pt, "pt"},             {Algorithm::brute, "brute"},
};
constexpr std::pair<GradientMethod, std::string_view> kGradients[] = {
  {GradientMethod::central_difference, "central-difference"}, {GradientMethod::adjoint, "adjoint"}};

} // namespace

std::string_view to_string(Problem p) { return enum_name(p, kProblems); }
std::string_view to_string(GraphFamily f) { return enum_name(f, kFamilies); }
std::string_view to_string(Algorithm a) { return enum_name(a, kAlgorithms); }
std::string_view to_string(GradientMethod m) { return enum_name(m, kGradients); }
Problem parse_problem(std::string_view s) { return parse_enum(s, kProblems, "problem"); }
GraphFamily parse_family(std::string_view s) { return parse_enum(s, kFamilies, "graph family"); }
Algorithm parse_algorithm(std::string_view s) { return parse_enum(s, kAlgorithms, "algorithm"); }
GradientMethod parse_gradient(std::string_view s) { return parse_enum(s, kGradients, "gradient method"); }

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

int ExperimentConfig::threshold() const
{
  return nc.value_or(problem == Problem::mis ? kMisThreshold : kSatThreshold);
}

void ExperimentConfig::validate() const
{
  const auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (family == GraphFamily::unit_disk && problem != Problem::mis) fail("unit-disk graphs need problem 'mis'");
  if (family == GraphFamily::erdos_renyi) {
    if (n.empty()) fail("'n' is empty");
    for (int v : n)
      if (v < 1) fail("'n' values must be positive");
    if (density.empty()) fail(problem == Problem::mis ? "'degree' is empty" : "'alpha' is empty");
    for (double d : density)
      if (!(d >= 0.0)) fail("densities must be non-negative");
  } else {
    if (udg.lattice_side < 1) fail("'udg.lattice_side' must be positive");
    if (!(udg.fill_fraction > 0.0 && udg.fill_fraction <= 1.0)) fail("'udg.fill_fraction' must lie in (0, 1]");
    if (!(udg.radius > 0.0)) fail("'udg.radius' must be positive");
  }
  if (problem == Problem::mis) {
    if (lambda.empty()) fail("'lambda' is empty");
    for (double l : lambda)
      if (!(l > 1.0)) fail("'lambda' values must exceed 1");
  }
  if (q.empty()) fail("'q' is empty");
  for (double v : q)
    if (!(v >= 0.0 && v <= 1.0)) fail("'q' values must lie in [0, 1]");
  if (p.empty()) fail("'p' is empty");
  for (int v : p) {
    if (v < 1) fail("'p' values must be at least 1");
    if (v > 1)
      for (double qq : q)
        if (qq != 0.0) fail("parameter quality q only applies at depth p = 1");
  }
  if (grid < 2) fail("'grid' must be at least 2");
  if (nc && *nc < 0) fail("'nc' must be non-negative");
  if (gd.iterations < 0 || gd.restarts < 1 || !(gd.learning_rate > 0.0) || !(gd.fd_step > 0.0))
    fail("'gd' needs iterations >= 0, restarts >= 1 and positive learning_rate and fd_step");
  if (sa.flips_per_variable < 1) fail("'sa.flips_per_variable' must be positive");
  pt.validate();
  reference.pt.validate();
  if (algorithms.empty()) fail("'algorithms' is empty");
  std::set<Algorithm> seen;
  for (auto a : algorithms) {
    if (!seen.insert(a).second) fail("algorithm '" + std::string(to_string(a)) + "' listed twice");
    if (problem == Problem::max2sat && (a == Algorithm::greedy_min || a == Algorithm::greedy_rand))
      fail("greedy algorithms only apply to MIS");
  }
  if (runs < 1) fail("'runs' must be positive");
  if (instances < 1) fail("'instances' must be positive");
  if (threads < 1) fail("'threads' must be positive");
  if (reference.brute_cap < 0 || reference.brute_cap > kBruteForceCap)
    fail("'reference.brute_cap' must lie in [0, " + std::to_string(kBruteForceCap) + "]");
  if (reference.node_limit < 1) fail("'reference.node_limit' must be positive");
}

namespace {

template <class T>
std::vector<T> scalar_or_list(const json& v)
{
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

void check_keys(const json& obj, std::initializer_list<std::string_view> keys, const std::string& where)
{
  if (!obj.is_object()) throw std::invalid_argument("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw std::invalid_argument("config: unknown key '" + where + (where.empty() ? "" : ".") + key + "'");
}

} // namespace

ExperimentConfig config_from_json(std::string_view text)
{
  json j;
  try {
    j = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  check_keys(j,
             {"name", "problem", "graph", "n", "degree", "alpha", "udg", "lambda", "q", "p", "grid", "nc", "gd", "sa",
              "pt", "algorithms", "runs", "instances", "seed", "threads", "reference"},
             "");
  ExperimentConfig c;
  try {
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("problem")) c.problem = parse_problem(j["problem"].get<std::string>());
    if (j.contains("graph")) c.family = parse_family(j["graph"].get<std::string>());
    if (j.contains("n")) c.n = scalar_or_list<int>(j["n"]);
    if (j.contains("degree") && j.contains("alpha")) throw std::invalid_argument("config: give 'degree' or 'alpha'");
    if (j.contains("degree")) {
      if (c.problem != Problem::mis) throw std::invalid_argument("config: 'degree' needs problem 'mis'");
      c.density = scalar_or_list<double>(j["degree"]);
    }
    if (j.contains("alpha")) {
      if (c.problem != Problem::max2sat) throw std::invalid_argument("config: 'alpha' needs problem 'max2sat'");
      c.density = scalar_or_list<double>(j["alpha"]);
    }
    if (j.contains("udg")) {
      const auto& u = j["udg"];
      check_keys(u, {"lattice_side", "fill_fraction", "radius"}, "udg");
      c.udg.lattice_side = u.value("lattice_side", c.udg.lattice_side);
      c.udg.fill_fraction = u.value("fill_fraction", c.udg.fill_fraction);
      c.udg.radius = u.value("radius", c.udg.radius);
    }
    if (j.contains("lambda")) c.lambda = scalar_or_list<double>(j["lambda"]);
    if (j.contains("q")) c.q = scalar_or_list<double>(j["q"]);
    if (j.contains("p")) c.p = scalar_or_list<int>(j["p"]);
    if (j.contains("grid")) c.grid = j["grid"].get<int>();
    if (j.contains("nc") && !j["nc"].is_null()) c.nc = j["nc"].get<int>();
    if (j.contains("gd")) {
      const auto& g = j["gd"];
      check_keys(g, {"iterations", "restarts", "learning_rate", "fd_step", "gradient", "max_qubits"}, "gd");
      c.gd.iterations = g.value("iterations", c.gd.iterations);
      c.gd.restarts = g.value("restarts", c.gd.restarts);
      c.gd.learning_rate = g.value("learning_rate", c.gd.learning_rate);
      c.gd.fd_step = g.value("fd_step", c.gd.fd_step);
      c.gd.max_qubits = g.value("max_qubits", c.gd.max_qubits);
      if (g.contains("gradient")) c.gd.gradient = parse_gradient(g["gradient"].get<std::string>());
    }
    if (j.contains("sa")) {
      const auto& s = j["sa"];
      check_keys(s, {"flips_per_variable", "beta_initial", "beta_final"}, "sa");
      c.sa.flips_per_variable = s.value("flips_per_variable", c.sa.flips_per_variable);
      c.sa.beta_initial = s.value("beta_initial", c.sa.beta_initial);
      c.sa.beta_final = s.value("beta_final", c.sa.beta_final);
    }
    const auto read_pt = [](const json& s, PtConfig& pt, const std::string& where) {
      check_keys(s, {"temperatures", "cycles", "sweeps_per_cycle"}, where);
      if (s.contains("temperatures")) pt.temperatures = s["temperatures"].get<std::vector<double>>();
      pt.cycles = s.value("cycles", pt.cycles);
      pt.sweeps_per_cycle = s.value("sweeps_per_cycle", pt.sweeps_per_cycle);
    };
    if (j.contains("pt")) read_pt(j["pt"], c.pt, "pt");
    if (j.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : j["algorithms"]) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (j.contains("runs")) c.runs = j["runs"].get<int>();
    if (j.contains("instances")) c.instances = j["instances"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("reference")) {
      const auto& r = j["reference"];
      check_keys(r, {"brute_cap", "node_limit", "pt_fallback", "pt"}, "reference");
      c.reference.brute_cap = r.value("brute_cap", c.reference.brute_cap);
      c.reference.node_limit = r.value("node_limit", c.reference.node_limit);
      c.reference.pt_fallback = r.value("pt_fallback", c.reference.pt_fallback);
      if (r.contains("pt")) read_pt(r["pt"], c.reference.pt, "reference.pt");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const ExperimentConfig& c)
{
  ordered_json j;
  j["name"] = c.name;
  j["problem"] = to_string(c.problem);
  j["graph"] = to_string(c.family);
  if (c.family == GraphFamily::erdos_renyi) {
    j["n"] = c.n;
    j[c.problem == Problem::mis ? "degree" : "alpha"] = c.density;
  } else {
    j["udg"] = {{"lattice_side", c.udg.lattice_side}, {"fill_fraction", c.udg.fill_fraction}, {"radius", c.udg.radius}};
  }
  if (c.problem == Problem::mis) j["lambda"] = c.lambda;
  j["q"] = c.q;
  j["p"] = c.p;
  j["grid"] = c.grid;
  j["nc"] = c.threshold();
  j["gd"] = {{"iterations", c.gd.iterations}, {"restarts", c.gd.restarts},
             {"learning_rate", c.gd.learning_rate}, {"fd_step", c.gd.fd_step},
             {"gradient", to_string(c.gd.gradient)}, {"max_qubits", c.gd.max_qubits}};
  j["sa"] = {{"flips_per_variable", c.sa.flips_per_variable}, {"beta_initial", c.sa.beta_initial},
             {"beta_final", c.sa.beta_final}};
  j["pt"] = {{"temperatures", c.pt.temperatures}, {"cycles", c.pt.cycles}, {"sweeps_per_cycle", c.pt.sweeps_per_cycle}};
  ordered_json algos = ordered_json::array();
  for (auto a : c.algorithms) algos.push_back(to_string(a));
  j["algorithms"] = algos;
  j["runs"] = c.runs;
  j["instances"] = c.instances;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["reference"] = {{"brute_cap", c.reference.brute_cap},
                    {"node_limit", c.reference.node_limit},
                    {"pt_fallback", c.reference.pt_fallback},
                    {"pt",
                     {{"temperatures", c.reference.pt.temperatures},
                      {"cycles", c.reference.pt.cycles},
                      {"sweeps_per_cycle", c.reference.pt.sweeps_per_cycle}}}};
  return j.dump(2);
}

ExperimentConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Seeds and instances
// ---------------------------------------------------------------------------

std::string instance_id(const ExperimentConfig& cfg, int n, double density, int index)
{
  char buf[128];
  if (cfg.family == GraphFamily::unit_disk)
    std::snprintf(buf, sizeof buf, "mis-udg-L%d-f%g-r%g-%03d", cfg.udg.lattice_side, cfg.udg.fill_fraction,
                  cfg.udg.radius, index);
  else if (cfg.problem == Problem::mis)
    std::snprintf(buf, sizeof buf, "mis-er-n%d-d%g-%03d", n, density, index);
  else
    std::snprintf(buf, sizeof buf, "max2sat-n%d-a%g-%03d", n, density, index);
  return buf;
}

std::uint64_t instance_seed(std::uint64_t master, const std::string& id)
{
  return derive_seed({master, hash_name("instance"), hash_name(id)});
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& instance, Algorithm algo, int run)
{
  return derive_seed({master, hash_name(instance), hash_name(to_string(algo)), static_cast<std::uint64_t>(run)});
}

namespace {

struct Instance
{
  std::string id;
  int n_key = 0;
  double density_key = 0.0;
  Graph graph;
  CnfFormula formula;
  int size = 0;
  std::optional<int> reference;
  std::string reference_method = "none";
};

/// Runs fn(0..count-1) on `threads` workers; each index runs exactly once.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn)
{
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        fn(k);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void compute_reference(const ExperimentConfig& cfg, Instance& inst)
{
  const auto& ref = cfg.reference;
  try {
    if (cfg.problem == Problem::mis) {
      // exact for every size we generate; the component split keeps it fast
      const bool small = inst.size <= ref.brute_cap;
      inst.reference = static_cast<int>(small ? brute_force_mis(inst.graph).size() : exact_mis(inst.graph).size());
      inst.reference_method = small ? "brute" : "exact";
      return;
    }
    if (inst.size <= ref.brute_cap) {
      inst.reference = brute_force_maxsat(inst.formula).violated;
      inst.reference_method = "brute";
      return;
    }
    if (const auto exact = exact_maxsat(inst.formula, ref.node_limit)) {
      inst.reference = exact->violated;
      inst.reference_method = "exact";
      return;
    }
    if (ref.pt_fallback) {
      const auto H = maxsat_to_ising(inst.formula);
      const auto res = parallel_tempering(H, derive_seed({cfg.seed, hash_name("reference"), hash_name(inst.id)}), ref.pt);
      inst.reference = count_violated(inst.formula, assignment_from_spins(res.config));
      inst.reference_method = "pt";
    }
  } catch (const std::exception&) {
    inst.reference.reset();
    inst.reference_method = "none";
  }
}

SolveOptions solve_options(const ExperimentConfig& cfg, const EnsemblePoint& pt, std::uint64_t seed)
{
  SolveOptions o;
  o.lambda = pt.lambda;
  o.nc = pt.nc;
  o.seed = seed;
  o.sa = cfg.sa;
  o.pt = cfg.pt;
  o.brute_cap = cfg.reference.brute_cap;
  o.node_limit = cfg.reference.node_limit;
  return o;
}

} // namespace

std::unique_ptr<CorrelationProvider> make_provider(int p, double q, int grid, const GradientDescentOptions& gd)
{
  if (p == 1) {
    GridSpec spec;
    spec.size = grid;
    return std::make_unique<GridQaoaProvider>(spec, q);
  }
  return std::make_unique<GradientQaoaProvider>(p, gd);
}

Solution solve_mis(const Graph& g, Algorithm algo, const SolveOptions& o, const CorrelationProvider& provider)
{
  Solution out;
  std::vector<int> set;
  const QiroOptions qo{o.nc, o.seed};
  switch (algo) {
  case Algorithm::qiro: {
    const auto r = run_qiro(MisProblem{g, o.lambda}, provider, qo);
    set = r.solution;
    out.provider_calls = r.provider_calls;
    break;
  }
  case Algorithm::qiro_bt: {
    const auto r = run_qiro_bt(MisProblem{g, o.lambda}, provider, qo);
    set = r.solution;
    out.provider_calls = r.provider_calls;
    break;
  }
  case Algorithm::rqaoa: {
    const auto r = rqaoa(mis_to_ising(g, o.lambda), o.nc, provider, o.seed);
    set = set_from_spins(r.config);
    out.provider_calls = r.provider_calls;
    break;
  }
  case Algorithm::greedy_min: set = min_degree_greedy(g, o.seed); break;
  case Algorithm::greedy_rand: set = random_greedy(g, o.seed); break;
  case Algorithm::sa: set = set_from_spins(simulated_annealing(mis_to_ising(g, o.lambda), o.seed, o.sa).config); break;
  case Algorithm::pt: set = set_from_spins(parallel_tempering(mis_to_ising(g, o.lambda), o.seed, o.pt).config); break;
  case Algorithm::brute: set = g.size() <= o.brute_cap ? brute_force_mis(g) : exact_mis(g); break;
  }
  std::sort(set.begin(), set.end());
  out.objective = static_cast<int>(set.size());
  out.valid = is_independent(g, set);
  out.vertices = std::move(set);
  return out;
}

Solution solve_maxsat(const CnfFormula& phi, Algorithm algo, const SolveOptions& o, const CorrelationProvider& provider)
{
  Solution out;
  const QiroOptions qo{o.nc, o.seed};
  switch (algo) {
  case Algorithm::qiro: {
    const auto r = run_qiro(phi, provider, qo);
    out.assignment = r.solution;
    out.provider_calls = r.provider_calls;
    break;
  }
  case Algorithm::qiro_bt: {
    const auto r = run_qiro_bt(phi, provider, qo);
    out.assignment = r.solution;
    out.provider_calls = r.provider_calls;
    break;
  }
  case Algorithm::rqaoa: {
    const auto r = rqaoa(maxsat_to_ising(phi), o.nc, provider, o.seed);
    out.assignment = assignment_from_spins(r.config);
    out.provider_calls = r.provider_calls;
    break;
  }
  case Algorithm::sa:
    out.assignment = assignment_from_spins(simulated_annealing(maxsat_to_ising(phi), o.seed, o.sa).config);
    break;
  case Algorithm::pt:
    out.assignment = assignment_from_spins(parallel_tempering(maxsat_to_ising(phi), o.seed, o.pt).config);
    break;
  case Algorithm::brute: {
    if (phi.num_vars() <= o.brute_cap) {
      out.assignment = brute_force_maxsat(phi).assignment;
    } else {
      const auto exact = exact_maxsat(phi, o.node_limit);
      if (!exact) throw std::runtime_error("exact MAX-2-SAT search exceeded its node limit");
      out.assignment = exact->assignment;
    }
    break;
  }
  case Algorithm::greedy_min:
  case Algorithm::greedy_rand: throw std::invalid_argument("greedy algorithms only apply to MIS");
  }
  out.objective = count_violated(phi, out.assignment);
  return out;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& options)
{
  cfg.validate();
  const bool udg = cfg.family == GraphFamily::unit_disk;
  const std::vector<int> ns = udg ? std::vector<int>{cfg.udg.lattice_side} : cfg.n;
  const std::vector<double> densities = udg ? std::vector<double>{cfg.udg.fill_fraction} : cfg.density;
  const std::vector<double> lambdas = cfg.problem == Problem::mis ? cfg.lambda : std::vector<double>{0.0};

  // instances depend only on (n, density, index)
  std::vector<Instance> instances;
  for (int n : ns)
    for (double d : densities)
      for (int k = 0; k < cfg.instances; ++k) {
        Instance inst;
        inst.id = instance_id(cfg, n, d, k);
        inst.n_key = n;
        inst.density_key = d;
        const auto seed = instance_seed(cfg.seed, inst.id);
        if (udg) {
          UdgConfig u = cfg.udg;
          u.seed = seed;
          inst.graph = gen_udg_lattice(u);
          inst.size = inst.graph.size();
        } else if (cfg.problem == Problem::mis) {
          inst.graph = gen_erdos_renyi({n, d, seed});
          inst.size = n;
        } else {
          inst.formula = gen_random_max2sat({n, d, seed});
          inst.size = n;
        }
        instances.push_back(std::move(inst));
      }
  parallel_for(instances.size(), cfg.threads, [&](std::size_t k) { compute_reference(cfg, instances[k]); });

  struct Cell
  {
    std::size_t point;
    std::size_t instance;
    Algorithm algo;
    int run;
  };
  std::vector<EnsemblePoint> points;
  std::vector<Cell> cells;
  const int nc = cfg.threshold();
  for (int n : ns)
    for (double d : densities)
      for (double l : lambdas)
        for (double q : cfg.q)
          for (int p : cfg.p) {
            points.push_back({n, d, l, q, p, nc});
            for (std::size_t i = 0; i < instances.size(); ++i) {
              if (instances[i].n_key != n || instances[i].density_key != d) continue;
              for (auto a : cfg.algorithms)
                for (int r = 0; r < cfg.runs; ++r) cells.push_back({points.size() - 1, i, a, r});
            }
          }

  std::vector<std::unique_ptr<CorrelationProvider>> providers;
  for (const auto& pt : points) providers.push_back(make_provider(pt.p, pt.q, cfg.grid, cfg.gd));

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  parallel_for(cells.size(), cfg.threads, [&](std::size_t k) {
    const Cell& c = cells[k];
    const Instance& inst = instances[c.instance];
    const EnsemblePoint& pt = points[c.point];
    RunRecord& r = records[k];
    r.problem = cfg.problem;
    r.family = cfg.family;
    r.point = pt;
    r.instance = inst.id;
    r.size = inst.size;
    r.algorithm = c.algo;
    r.run = c.run;
    r.seed = cell_seed(cfg.seed, inst.id, c.algo, c.run);
    r.reference = inst.reference;
    r.reference_method = inst.reference_method;
    const auto start = std::chrono::steady_clock::now();
    try {
      const SolveOptions so = solve_options(cfg, pt, r.seed);
      const Solution res = cfg.problem == Problem::mis ? solve_mis(inst.graph, c.algo, so, *providers[c.point])
                                                       : solve_maxsat(inst.formula, c.algo, so, *providers[c.point]);
      r.objective = res.objective;
      r.valid = res.valid;
      r.provider_calls = res.provider_calls;
      if (r.reference) {
        // a PT reference is only an upper bound, so "at least as good" counts
        const bool reached = cfg.problem == Problem::mis ? r.objective >= *r.reference : r.objective <= *r.reference;
        r.success = r.valid && reached;
      }
    } catch (const std::exception& e) {
      r.error = e.what();
      r.valid = false;
      r.success.reset();
    }
    if (options.timing)
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const auto finished = ++done;
    if (options.progress) {
      const std::lock_guard lock(progress_mutex);
      options.progress(finished, cells.size());
    }
  });
  return records;
}

// ---------------------------------------------------------------------------
// JSONL
// ---------------------------------------------------------------------------

std::string to_json_line(const RunRecord& r)
{
  ordered_json j;
  j["problem"] = to_string(r.problem);
  j["family"] = to_string(r.family);
  j["n"] = r.point.n;
  j["density"] = r.point.density;
  j["lambda"] = r.point.lambda;
  j["q"] = r.point.q;
  j["p"] = r.point.p;
  j["nc"] = r.point.nc;
  j["instance"] = r.instance;
  j["size"] = r.size;
  j["algorithm"] = to_string(r.algorithm);
  j["run"] = r.run;
  j["seed"] = r.seed;
  j["objective"] = r.objective;
  j["reference"] = r.reference ? ordered_json(*r.reference) : ordered_json(nullptr);
  j["reference_method"] = r.reference_method;
  j["success"] = r.success ? ordered_json(*r.success) : ordered_json(nullptr);
  j["valid"] = r.valid;
  j["provider_calls"] = r.provider_calls;
  if (r.wall_ms) j["wall_ms"] = *r.wall_ms;
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump();
}

RunRecord record_from_json(std::string_view line)
{
  RunRecord r;
  try {
    const json j = json::parse(line.begin(), line.end());
    r.problem = parse_problem(j.at("problem").get<std::string>());
    r.family = parse_family(j.at("family").get<std::string>());
    r.point.n = j.at("n").get<int>();
    r.point.density = j.at("density").get<double>();
    r.point.lambda = j.at("lambda").get<double>();
    r.point.q = j.at("q").get<double>();
    r.point.p = j.at("p").get<int>();
    r.point.nc = j.at("nc").get<int>();
    r.instance = j.at("instance").get<std::string>();
    r.size = j.at("size").get<int>();
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
    r.run = j.at("run").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.objective = j.at("objective").get<int>();
    if (!j.at("reference").is_null()) r.reference = j["reference"].get<int>();
    r.reference_method = j.at("reference_method").get<std::string>();
    if (!j.at("success").is_null()) r.success = j["success"].get<bool>();
    r.valid = j.at("valid").get<bool>();
    r.provider_calls = j.at("provider_calls").get<int>();
    if (j.contains("wall_ms")) r.wall_ms = j["wall_ms"].get<double>();
    if (j.contains("error")) r.error = j["error"].get<std::string>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("record: ") + e.what());
  }
  return r;
}

void write_jsonl(std::ostream& os, const std::vector<RunRecord>& records)
{
  for (const auto& r : records) os << to_json_line(r) << '\n';
}

std::vector<RunRecord> read_jsonl(std::istream& is)
{
  std::vector<RunRecord> out;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json(line));
    } catch (const std::invalid_argument& e) {
      throw ParseError(number, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Summaries
// ---------------------------------------------------------------------------

double median(std::vector<double> values)
{
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 == 1 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records)
{
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  struct Acc
  {
    SummaryRow row;
    std::set<std::string> instances;
    std::map<int, std::pair<int, int>> success; // run -> (hits, with reference)
    std::set<int> runs;
    int count = 0;
    int valid = 0;
    double objective_sum = 0.0;
    double calls_sum = 0.0;
    double ratio_sum = 0.0;
    int ratio_count = 0;
  };
  std::vector<Acc> groups;
  for (const auto& r : records) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Acc& a) {
      return a.row.problem == r.problem && a.row.family == r.family && a.row.point == r.point &&
             a.row.algorithm == r.algorithm;
    });
    if (it == groups.end()) {
      groups.emplace_back();
      it = std::prev(groups.end());
      it->row.problem = r.problem;
      it->row.family = r.family;
      it->row.point = r.point;
      it->row.algorithm = r.algorithm;
    }
    Acc& a = *it;
    a.instances.insert(r.instance);
    a.runs.insert(r.run);
    if (!r.error.empty()) {
      ++a.row.errors;
      continue;
    }
    ++a.count;
    a.valid += r.valid;
    a.objective_sum += r.objective;
    a.calls_sum += r.provider_calls;
    if (r.success) {
      auto& [hits, total] = a.success[r.run];
      hits += *r.success;
      ++total;
    }
    if (r.problem == Problem::mis && r.valid && r.reference && *r.reference > 0) {
      a.ratio_sum += static_cast<double>(r.objective) / *r.reference;
      ++a.ratio_count;
    }
  }
  std::vector<SummaryRow> out;
  for (auto& a : groups) {
    SummaryRow row = a.row;
    row.instances = static_cast<int>(a.instances.size());
    row.runs = static_cast<int>(a.runs.size());
    for (const auto& [run, st] : a.success) row.success_by_run.push_back(100.0 * st.first / st.second);
    if (!row.success_by_run.empty()) {
      row.success_median = median(row.success_by_run);
      row.success_min = *std::min_element(row.success_by_run.begin(), row.success_by_run.end());
      row.success_max = *std::max_element(row.success_by_run.begin(), row.success_by_run.end());
    }
    if (a.count > 0) {
      row.validity = static_cast<double>(a.valid) / a.count;
      row.mean_objective = a.objective_sum / a.count;
      row.mean_provider_calls = a.calls_sum / a.count;
    }
    if (a.ratio_count > 0) row.ratio = a.ratio_sum / a.ratio_count;
    out.push_back(std::move(row));
  }
  return out;
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows)
{
  const auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string();
    std::ostringstream ss;
    ss.precision(10);
    ss << *v;
    return ss.str();
  };
  os << "problem,family,n,density,lambda,q,p,nc,algorithm,instances,runs,success_median,success_min,success_max,"
        "validity,ratio,mean_objective,mean_provider_calls,errors\n";
  for (const auto& r : rows) {
    os << to_string(r.problem) << ',' << to_string(r.family) << ',' << r.point.n << ',' << opt(r.point.density) << ','
       << opt(r.point.lambda) << ',' << opt(r.point.q) << ',' << r.point.p << ',' << r.point.nc << ','
       << to_string(r.algorithm) << ',' << r.instances << ',' << r.runs << ',' << opt(r.success_median) << ','
       << opt(r.success_min) << ',' << opt(r.success_max) << ',' << opt(r.validity) << ',' << opt(r.ratio) << ','
       << opt(r.mean_objective) << ',' << opt(r.mean_provider_calls) << ',' << r.errors << '\n';
  }
}

} // namespace qiro::bench
