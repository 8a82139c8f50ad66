#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qiro/baselines.hpp"
#include "qiro/instances.hpp"
#include "qiro/qaoa.hpp"

namespace qiro::bench {

enum class Problem : std::uint8_t { mis, max2sat };
enum class GraphFamily : std::uint8_t { erdos_renyi, unit_disk };
enum class Algorithm : std::uint8_t { qiro, qiro_bt, rqaoa, greedy_min, greedy_rand, sa, pt, brute };

std::string_view to_string(Problem p);
std::string_view to_string(GraphFamily f);
std::string_view to_string(Algorithm a);
std::string_view to_string(GradientMethod m);
Problem parse_problem(std::string_view s);
GraphFamily parse_family(std::string_view s);
Algorithm parse_algorithm(std::string_view s);
GradientMethod parse_gradient(std::string_view s);

/// How reference optima are obtained: enumeration up to brute_cap
/// variables, then exact branch and bound within node_limit, then parallel
/// tempering (an upper bound for MAX-2-SAT) if pt_fallback is set.
struct ReferenceConfig
{
  int brute_cap = kBruteForceCap;
  std::int64_t node_limit = 50'000'000;
  bool pt_fallback = true;
  PtConfig pt{};
};

struct ExperimentConfig
{
  std::string name = "experiment";
  Problem problem = Problem::mis;
  GraphFamily family = GraphFamily::erdos_renyi;
  /// Vertex or variable counts; unused for unit-disk graphs.
  std::vector<int> n{20};
  /// Expected ER degree (MIS) or clause ratio (MAX-2-SAT).
  std::vector<double> density{3.0};
  /// Lattice geometry for unit-disk graphs; the seed field is ignored.
  UdgConfig udg{};
  std::vector<double> lambda{1.1};
  std::vector<double> q{0.0};
  std::vector<int> p{1};
  int grid = 30;
  /// Recursion threshold; defaults to 15 (MIS) or 10 (MAX-2-SAT).
  std::optional<int> nc;
  GradientDescentOptions gd{};
  SaConfig sa{};
  PtConfig pt{};
  std::vector<Algorithm> algorithms{Algorithm::qiro};
  int runs = 10;
  int instances = 50;
  std::uint64_t seed = 0;
  /// Worker threads; the output does not depend on it.
  int threads = 1;
  ReferenceConfig reference{};

  int threshold() const;
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// JSON; unknown keys are rejected so typos do not silently fall back to
/// defaults.
ExperimentConfig config_from_json(std::string_view text);
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::string& path);

/// One point of the parameter sweep. For unit-disk ensembles n is the
/// lattice side and density the fill fraction.
struct EnsemblePoint
{
  int n = 0;
  double density = 0.0;
  double lambda = 0.0;
  double q = 0.0;
  int p = 1;
  int nc = 0;

  bool operator==(const EnsemblePoint&) const = default;
};

struct RunRecord
{
  Problem problem = Problem::mis;
  GraphFamily family = GraphFamily::erdos_renyi;
  EnsemblePoint point;
  std::string instance;
  /// Vertices or variables of the instance.
  int size = 0;
  Algorithm algorithm = Algorithm::qiro;
  int run = 0;
  std::uint64_t seed = 0;
  /// |IS| for MIS (also for invalid sets), violated clauses for MAX-2-SAT.
  int objective = 0;
  std::optional<int> reference;
  /// "brute", "exact", "pt" or "none".
  std::string reference_method;
  /// Empty when there is no reference; success implies validity.
  std::optional<bool> success;
  bool valid = true;
  std::optional<double> wall_ms;
  int provider_calls = 0;
  /// Set when the cell threw; objective and flags are then meaningless.
  std::string error;
};

/// Settings of a single solver call.
struct SolveOptions
{
  double lambda = 1.1;
  /// Recursion threshold for qiro, qiro-bt and rqaoa.
  int nc = 0;
  std::uint64_t seed = 0;
  SaConfig sa{};
  PtConfig pt{};
  int brute_cap = kBruteForceCap;
  std::int64_t node_limit = 50'000'000;
};

/// Grid search with q-quantile selection at p = 1, gradient descent on the
/// state vector otherwise.
std::unique_ptr<CorrelationProvider> make_provider(int p, double q, int grid, const GradientDescentOptions& gd);

struct Solution
{
  /// |IS| for MIS (also for invalid sets), violated clauses for MAX-2-SAT.
  int objective = 0;
  bool valid = true;
  int provider_calls = 0;
  /// MIS: chosen vertices, ascending.
  std::vector<int> vertices;
  /// MAX-2-SAT: the full assignment.
  Assignment assignment;
};

/// SA, PT and RQAOA run on the penalty Hamiltonian and are decoded
/// without repair, so their sets may be invalid.
Solution solve_mis(const Graph& g, Algorithm algo, const SolveOptions& options, const CorrelationProvider& provider);
/// Throws std::invalid_argument for the MIS-only greedy algorithms.
Solution solve_maxsat(const CnfFormula& phi, Algorithm algo, const SolveOptions& options,
                      const CorrelationProvider& provider);

/// Instance identity and seed depend only on the problem, the ensemble
/// parameters and the index, never on the algorithm roster or the sweep of
/// lambda, q or p.
std::string instance_id(const ExperimentConfig& cfg, int n, double density, int index);
std::uint64_t instance_seed(std::uint64_t master, const std::string& id);
/// Seed of one (instance, algorithm, run) cell.
std::uint64_t cell_seed(std::uint64_t master, const std::string& instance, Algorithm algo, int run);

struct RunOptions
{
  bool timing = false;
  /// Called after each finished cell with (done, total); may be empty.
  std::function<void(std::size_t, std::size_t)> progress;
};

/// Records in canonical order: point, instance, algorithm (config order),
/// run. Identical configs give identical records whatever the thread count.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

std::string to_json_line(const RunRecord& r);
RunRecord record_from_json(std::string_view line);
void write_jsonl(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_jsonl(std::istream& is);

struct SummaryRow
{
  Problem problem = Problem::mis;
  GraphFamily family = GraphFamily::erdos_renyi;
  EnsemblePoint point;
  Algorithm algorithm = Algorithm::qiro;
  int instances = 0;
  int runs = 0;
  /// Success percentage per run index over instances with a reference,
  /// then median / min / max across run indices. Empty without references.
  std::vector<double> success_by_run;
  std::optional<double> success_median;
  std::optional<double> success_min;
  std::optional<double> success_max;
  /// Fraction of valid records.
  double validity = 0.0;
  /// Mean |IS| / |MIS| over valid MIS records with a reference; empty when
  /// there is none.
  std::optional<double> ratio;
  double mean_objective = 0.0;
  double mean_provider_calls = 0.0;
  int errors = 0;
};

double median(std::vector<double> values);

/// Groups by (problem, family, point, algorithm) in order of first
/// appearance. Throws std::invalid_argument on empty input.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

} // namespace qiro::bench
