#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qiro/model.hpp"

namespace qiro {

// Greedy MIS heuristics. Both always return an independent set, sorted.

/// Repeatedly adds a uniformly random live vertex and deletes it together
/// with its neighbours.
std::vector<int> random_greedy(const Graph& g, std::uint64_t seed);

/// Repeatedly adds a live vertex of minimum current degree (ties uniformly
/// at random) and deletes it together with its neighbours.
std::vector<int> min_degree_greedy(const Graph& g, std::uint64_t seed);

struct AnnealResult
{
  Spins config;
  double energy = 0.0;
  /// Successive improvements of the best-seen energy.
  std::vector<double> best_trace;
};

struct SaConfig
{
  int flips_per_variable = 600;
  double beta_initial = 0.0;
  double beta_final = 6.0;
};

/// Single-spin Metropolis from a random start; inverse temperature rises
/// linearly over the attempted flips. Returns the best configuration seen.
AnnealResult simulated_annealing(const Hamiltonian& H, std::uint64_t seed, const SaConfig& cfg = {});

struct PtConfig
{
  std::vector<double> temperatures{0.10, 0.20, 0.29, 0.39, 0.50, 0.62, 0.75, 0.90, 1.09, 1.33, 1.67, 2.20};
  int cycles = 15000;
  int sweeps_per_cycle = 1;

  void validate() const;
};

struct PtResult : AnnealResult
{
  std::vector<std::int64_t> exchange_attempts;
  std::vector<std::int64_t> exchange_accepts;
};

/// Metropolis criterion for swapping replicas at inverse temperatures
/// beta_lo > beta_hi holding energies e_lo, e_hi.
double exchange_probability(double beta_lo, double energy_lo, double beta_hi, double energy_hi);

/// Replica-exchange Monte Carlo. Each cycle sweeps every replica once over
/// all spins, then attempts neighbour exchanges from the coldest pair up.
PtResult parallel_tempering(const Hamiltonian& H, std::uint64_t seed, const PtConfig& cfg = {});

inline constexpr int kBruteForceCap = 25;

struct IsingOptimum
{
  Spins config;
  double energy = 0.0;
};

// Exhaustive searches. Ties resolve to the lexicographically smallest
// configuration with FALSE (z = -1) before TRUE, variable 0 first.

IsingOptimum brute_force_ising(const Hamiltonian& H, int cap = kBruteForceCap);
std::vector<int> brute_force_mis(const Graph& g, int cap = kBruteForceCap);

struct SatOptimum
{
  Assignment assignment;
  int violated = 0;
};

SatOptimum brute_force_maxsat(const CnfFormula& phi, int cap = kBruteForceCap);

/// Exact MIS by branch and bound (clique-cover bound, degree <= 1 folding).
/// Works for graphs of up to 256 vertices.
std::vector<int> exact_mis(const Graph& g);

/// Exact MAX-2-SAT by branch and bound; nullopt when `node_limit` search
/// nodes are exhausted before optimality is proven.
std::optional<SatOptimum> exact_maxsat(const CnfFormula& phi, std::int64_t node_limit = 50'000'000);

struct HardnessReport
{
  int mis_size = 0;
  std::int64_t count_at_mis = 0;
  std::int64_t count_below_mis = 0;
  double hp = 0.0;
};

/// Counts independent sets of size |MIS| and |MIS|-1 (the empty set counts
/// as size 0) and returns N_{|MIS|-1} / (|MIS| N_{|MIS|}).
HardnessReport hardness_parameter(const Graph& g, int cap = kBruteForceCap);

} // namespace qiro
