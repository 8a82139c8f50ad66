#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "qiro/correlations.hpp"
#include "qiro/model.hpp"
#include "qiro/qaoa.hpp"
#include "qiro/random.hpp"

namespace qiro {

inline constexpr int kMisThreshold = 15;
inline constexpr int kSatThreshold = 10;

struct QiroOptions
{
  int nc = 0;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// MIS
// ---------------------------------------------------------------------------

struct MisProblem
{
  Graph graph;
  double lambda = 1.1;
};

/// The four reductions, named after what they do to the live graph.
enum class MisRule : std::uint8_t
{
  include_vertex, // M_ii >= 0: i joins the set, i and its neighbours leave
  exclude_vertex, // M_ii < 0: i leaves
  exclude_pair,   // M_ij > 0: i and j leave
  exclude_common, // M_ij <= 0: common neighbours of i and j leave
};

/// Reversal swaps include_vertex <-> exclude_vertex and
/// exclude_pair <-> exclude_common.
MisRule opposite(MisRule rule);

/// Vertices are original labels; j is -1 for one-point rules.
struct MisDecision
{
  MisRule rule = MisRule::include_vertex;
  int i = -1;
  int j = -1;
};

/// A partially reduced MIS problem: the live part of the original graph
/// plus the vertices already committed to the independent set.
class MisState
{
public:
  MisState() = default;
  explicit MisState(const MisProblem& problem);

  const Graph& graph() const { return *graph_; }
  double lambda() const { return lambda_; }
  int size() const { return live_count_; }
  bool live(int v) const { return live_[static_cast<std::size_t>(v)] != 0; }

  /// Live vertices ascending; compact index k of the state Hamiltonian is
  /// live_vertices()[k].
  std::vector<int> live_vertices() const;
  Hamiltonian hamiltonian() const;

  const std::vector<int>& independent_set() const { return set_; }
  const std::vector<MisDecision>& decisions() const { return decisions_; }

  void remove(int v);
  /// Adds v to the set and removes v and its live neighbours.
  void include(int v);
  /// Applies one reduction; returns the number of vertices removed.
  int apply(const MisDecision& d);

private:
  std::shared_ptr<const Graph> graph_;
  double lambda_ = 1.1;
  std::vector<char> live_;
  int live_count_ = 0;
  std::vector<int> set_;
  std::vector<MisDecision> decisions_;
};

/// Solves every live connected component with fewer than nc vertices
/// exactly and removes it.
void mis_component_sweep(MisState& s, int nc);

/// One reduction driven by M (indexed like s.live_vertices()): walks the
/// entries by descending |value| until a rule removes a vertex, then runs
/// the component sweep. Returns the decision that was applied.
MisDecision reduce_mis(MisState& s, const Correlations& M, int nc, Rng& rng);

// ---------------------------------------------------------------------------
// MAX-2-SAT
// ---------------------------------------------------------------------------

/// x_var := x_target (positive) or NOT x_target.
struct Substitution
{
  int var = -1;
  int target = -1;
  bool positive = true;
};

/// One-point: x_i := value. Two-point: x_i -> x_j or NOT x_j. Original
/// variable labels.
struct SatDecision
{
  bool two_point = false;
  int i = -1;
  int j = -1;
  /// One-point: the value assigned. Two-point: sign of the substitution.
  bool positive = true;

  SatDecision flipped() const
  {
    SatDecision d = *this;
    d.positive = !d.positive;
    return d;
  }
};

/// Fixed values and substitutions gathered during a reduction sequence.
/// Every variable is fixed, substituted, or still free; free variables that
/// no longer occur in the formula resolve to FALSE.
struct SatLedger
{
  Assignment fixed;
  std::vector<Substitution> substitutions;
  std::vector<SatDecision> decisions;

  /// Resolves substitutions newest first, so every chain ends in a fixed
  /// or free variable.
  Assignment reconstruct() const;
};

class SatState
{
public:
  SatState() = default;
  explicit SatState(const CnfFormula& phi);

  /// Current formula over the original variable labels; its violation
  /// offset counts clauses already known to be violated.
  const CnfFormula& formula() const { return formula_; }
  const SatLedger& ledger() const { return ledger_; }

  /// Number of variables still occurring in the formula.
  int size() const { return static_cast<int>(live_.size()); }
  const std::vector<int>& live_vars() const { return live_; }
  /// maxsat_to_ising of the formula over live_vars() in compact indices.
  Hamiltonian hamiltonian() const;

  void assign(int var, bool value);
  void assign(std::span<const std::pair<int, bool>> values);
  void substitute(const Substitution& s);
  /// Replaces the clause list, offset increment included.
  void replace_clauses(std::vector<std::vector<Literal>> clauses, int extra_violations);
  void apply(const SatDecision& d);
  /// Exhaustively assigns all live variables.
  void brute_force();

private:
  void set_formula(CnfFormula phi);

  CnfFormula formula_;
  SatLedger ledger_;
  std::vector<int> live_;
};

// Inference rules. Each returns true when it changed the formula and keeps
// the optimum: opt(before) = opt(after) + offset increase.
bool pure_literal_rule(SatState& s);
bool dominating_unit_clause_rule(SatState& s);
bool almost_common_clause_rule(SatState& s);
bool complementary_unit_clause_rule(SatState& s);

/// Runs the four rules in order until a full pass changes nothing or at
/// most nc variables remain. Returns true if anything changed.
bool inference_fixpoint(SatState& s, int nc);

/// Brute force when at most nc variables remain, inference otherwise.
void sat_bookkeeping(SatState& s, int nc);

/// One reduction: the largest-|M| entry fixes or substitutes a variable,
/// followed by inference and the brute-force tail.
SatDecision reduce_maxsat(SatState& s, const Correlations& M, int nc, Rng& rng);

// ---------------------------------------------------------------------------
// Recursion and backtracking
// ---------------------------------------------------------------------------

/// State before a correlation-informed reduction, plus the decision taken.
template <class State, class Decision>
struct Snapshot
{
  State node;
  Decision decision;
};

using MisSnapshot = Snapshot<MisState, MisDecision>;
using SatSnapshot = Snapshot<SatState, SatDecision>;

struct MisRun
{
  std::vector<int> solution;
  /// |solution|
  int objective = 0;
  std::vector<MisSnapshot> snapshots;
  int provider_calls = 0;
};

struct SatRun
{
  Assignment solution;
  /// Violated clauses of the original formula.
  int objective = 0;
  std::vector<SatSnapshot> snapshots;
  int provider_calls = 0;
};

MisRun run_qiro(const MisProblem& problem, const CorrelationProvider& provider, const QiroOptions& options);
SatRun run_qiro(const CnfFormula& phi, const CorrelationProvider& provider, const QiroOptions& options);

/// The opposite decision at a snapshot, followed by the same bookkeeping
/// as the original step. No correlations are needed.
MisState reverse_reduce(const MisSnapshot& snap, int nc);
SatState reverse_reduce(const SatSnapshot& snap, int nc);

struct MisBtRun
{
  std::vector<int> solution;
  int objective = 0;
  /// 0 for the initial pass, k for the branch reversing snapshot k-1.
  int best_branch = 0;
  int reversals = 0;
  int provider_calls = 0;
  int initial_objective = 0;
};

struct SatBtRun
{
  Assignment solution;
  int objective = 0;
  int best_branch = 0;
  int reversals = 0;
  int provider_calls = 0;
  int initial_objective = 0;
};

/// QIRO, then one deviation per snapshot of the initial path, each branch
/// completed with fresh reductions. Keeps the best solution; ties go to the
/// earlier branch.
MisBtRun run_qiro_bt(const MisProblem& problem, const CorrelationProvider& provider, const QiroOptions& options);
SatBtRun run_qiro_bt(const CnfFormula& phi, const CorrelationProvider& provider, const QiroOptions& options);

} // namespace qiro
