#include "qiro/qiro.hpp"

#include <algorithm>
#include <stdexcept>

namespace qiro {

namespace {

// Seed layout: branch 0 is the initial pass, branch k >= 1 the deviation at
// snapshot k - 1. Each branch owns a tie-breaking stream and a provider
// seed per reduction.
std::uint64_t branch_seed(std::uint64_t seed, int branch) { return derive_seed({seed, 0xb4a2c3ULL, static_cast<std::uint64_t>(branch)}); }

std::uint64_t call_seed(std::uint64_t branch, int call) { return derive_seed({branch, 0xca11ULL, static_cast<std::uint64_t>(call)}); }

template <class State, class Decision, class ReduceFn>
int run_to_completion(State& s, const CorrelationProvider& provider, int nc, std::uint64_t seed,
                      std::vector<Snapshot<State, Decision>>* snapshots, ReduceFn reduce)
{
  Rng rng(derive_seed({seed, 0x71e5ULL}));
  int calls = 0;
  while (s.size() > 0) {
    const auto M = provider.correlations(s.hamiltonian(), call_seed(seed, calls));
    ++calls;
    State before = snapshots ? s : State{};
    const Decision d = reduce(s, M, nc, rng);
    if (snapshots) snapshots->push_back({std::move(before), d});
  }
  return calls;
}

int check_nc(int nc)
{
  if (nc < 0) throw std::invalid_argument("qiro: threshold nc must be non-negative");
  return nc;
}

} // namespace

MisRun run_qiro(const MisProblem& problem, const CorrelationProvider& provider, const QiroOptions& options)
{
  const int nc = check_nc(options.nc);
  MisState s(problem);
  mis_component_sweep(s, nc);
  MisRun out;
  out.provider_calls = run_to_completion<MisState, MisDecision>(s, provider, nc, branch_seed(options.seed, 0),
                                                                 &out.snapshots, reduce_mis);
  out.solution = s.independent_set();
  std::sort(out.solution.begin(), out.solution.end());
  out.objective = static_cast<int>(out.solution.size());
  return out;
}

SatRun run_qiro(const CnfFormula& phi, const CorrelationProvider& provider, const QiroOptions& options)
{
  const int nc = check_nc(options.nc);
  SatState s(phi);
  if (s.size() <= nc) s.brute_force();
  SatRun out;
  out.provider_calls = run_to_completion<SatState, SatDecision>(s, provider, nc, branch_seed(options.seed, 0),
                                                                 &out.snapshots, reduce_maxsat);
  out.solution = s.ledger().reconstruct();
  out.objective = count_violated(phi, out.solution);
  return out;
}

MisBtRun run_qiro_bt(const MisProblem& problem, const CorrelationProvider& provider, const QiroOptions& options)
{
  const int nc = check_nc(options.nc);
  const MisRun initial = run_qiro(problem, provider, options);
  MisBtRun out;
  out.solution = initial.solution;
  out.objective = out.initial_objective = initial.objective;
  out.provider_calls = initial.provider_calls;
  for (std::size_t k = 0; k < initial.snapshots.size(); ++k) {
    const int branch = static_cast<int>(k) + 1;
    MisState s = reverse_reduce(initial.snapshots[k], nc);
    ++out.reversals;
    out.provider_calls += run_to_completion<MisState, MisDecision>(s, provider, nc, branch_seed(options.seed, branch),
                                                                   nullptr, reduce_mis);
    if (static_cast<int>(s.independent_set().size()) > out.objective) {
      out.solution = s.independent_set();
      std::sort(out.solution.begin(), out.solution.end());
      out.objective = static_cast<int>(out.solution.size());
      out.best_branch = branch;
    }
  }
  return out;
}

SatBtRun run_qiro_bt(const CnfFormula& phi, const CorrelationProvider& provider, const QiroOptions& options)
{
  const int nc = check_nc(options.nc);
  const SatRun initial = run_qiro(phi, provider, options);
  SatBtRun out;
  out.solution = initial.solution;
  out.objective = out.initial_objective = initial.objective;
  out.provider_calls = initial.provider_calls;
  for (std::size_t k = 0; k < initial.snapshots.size(); ++k) {
    const int branch = static_cast<int>(k) + 1;
    SatState s = reverse_reduce(initial.snapshots[k], nc);
    ++out.reversals;
    out.provider_calls += run_to_completion<SatState, SatDecision>(s, provider, nc, branch_seed(options.seed, branch),
                                                                   nullptr, reduce_maxsat);
    const Assignment a = s.ledger().reconstruct();
    const int cost = count_violated(phi, a);
    if (cost < out.objective) {
      out.solution = a;
      out.objective = cost;
      out.best_branch = branch;
    }
  }
  return out;
}

} // namespace qiro
