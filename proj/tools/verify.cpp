#include "verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "qiro/baselines.hpp"
#include "qiro/instances.hpp"
#include "qiro/qiro.hpp"
#include "qiro/rqaoa.hpp"
#include "qiro/statevector.hpp"

namespace qiro::cli {

namespace {

/// Returns an empty string on success, else a description of the first
/// failure.
using Suite = std::function<std::string(int trials, Rng& rng)>;

Spins spins_of(std::uint64_t x, int n)
{
  Spins z(n);
  for (int i = 0; i < n; ++i) z[i] = ((x >> i) & 1U) ? 1 : -1;
  return z;
}

Hamiltonian random_hamiltonian(int n, Rng& rng)
{
  Hamiltonian::Vector h(n);
  for (int i = 0; i < n; ++i) h[i] = uniform_real(rng, -1.0, 1.0);
  std::vector<Coupling<double>> J;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (bernoulli(rng, 0.4)) J.push_back({i, j, uniform_real(rng, -1.0, 1.0)});
  return Hamiltonian(std::move(h), std::move(J), uniform_real(rng, -1.0, 1.0));
}

std::string correlations_suite(int trials, Rng& rng)
{
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 9));
    const Hamiltonian H = t % 2 == 0 ? mis_to_ising(gen_erdos_renyi({n, std::min(2.5, n - 1.0), rng()}), 1.1)
                                     : maxsat_to_ising(gen_random_max2sat({n, 2.0, rng()}));
    const double beta = uniform_real(rng, 0.0, 3.2);
    const double gamma = uniform_real(rng, 0.0, 6.3);
    const auto closed = p1_correlations(H, beta, gamma);
    const QaoaStatevector<double> sv(H);
    const auto exact = sv.correlations(sv.prepare(std::vector<double>{beta}, std::vector<double>{gamma}));
    double err = 0.0;
    for (int i = 0; i < n; ++i) err = std::max(err, std::abs(closed.diag(i) - exact.diag(i)));
    for (const auto& c : exact.offdiag()) err = std::max(err, std::abs(closed.at(c.i, c.j) - c.value));
    if (err > 1e-9) return "closed form differs from state vector by " + std::to_string(err);
  }
  return {};
}

std::string encoding_suite(int trials, Rng& rng)
{
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 9));
    const Graph g = gen_erdos_renyi({n, std::min(2.0, n - 1.0), rng()});
    const CnfFormula phi = gen_random_max2sat({n, 1.5, rng()});
    const Hamiltonian Hm = mis_to_ising(g, 1.3);
    const Hamiltonian Hs = maxsat_to_ising(phi);
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
      const Spins z = spins_of(x, n);
      const auto set = set_from_spins(z);
      int edges = 0;
      for (const auto& [u, v] : g.edges()) edges += (z[u] == 1 && z[v] == 1);
      const double mis = -static_cast<double>(set.size()) + 1.3 * edges;
      if (std::abs(Hm.energy(z) - mis) > 1e-12) return "MIS energy mismatch";
      if (Hs.energy(z) != count_violated(phi, assignment_from_spins(z))) return "MAX-2-SAT energy mismatch";
    }
  }
  return {};
}

std::string inference_suite(int trials, Rng& rng)
{
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 11));
    const CnfFormula phi = gen_random_max2sat({n, uniform_real(rng, 0.5, 3.0), rng()});
    SatState s(phi);
    inference_fixpoint(s, 0);
    // the reduced formula keeps original labels and counts settled clauses
    // in its violation offset
    const int before = brute_force_maxsat(phi).violated;
    if (brute_force_maxsat(s.formula()).violated != before) return "inference changed the optimum";
    s.brute_force();
    if (count_violated(phi, s.ledger().reconstruct()) != before) return "reconstruction is not optimal";
  }
  return {};
}

std::string elimination_suite(int trials, Rng& rng)
{
  for (int t = 0; t < trials; ++t) {
    const int n = 2 + static_cast<int>(uniform_index(rng, 8));
    const Hamiltonian H = random_hamiltonian(n, rng);
    EliminationRecord rec;
    rec.i = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    rec.sign = bernoulli(rng, 0.5) ? 1 : -1;
    if (bernoulli(rng, 0.5)) {
      rec.kind = EliminationRecord::Kind::two_point;
      do rec.j = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
      while (rec.j == rec.i);
    }
    const Hamiltonian R = eliminate_variable(H, rec);
    for (std::uint64_t x = 0; x < (1ULL << (n - 1)); ++x) {
      const Spins zr = spins_of(x, n - 1);
      Spins z(n);
      for (int k = 0, r = 0; k < n; ++k)
        if (k != rec.i) z[k] = zr[r++];
      z[rec.i] = rec.kind == EliminationRecord::Kind::two_point ? rec.sign * z[rec.j] : rec.sign;
      if (std::abs(R.energy(zr) - H.energy(z)) > 1e-12) return "elimination broke the energy identity";
    }
  }
  return {};
}

std::string feasibility_suite(int trials, Rng& rng)
{
  // adversarial correlations: uniform noise in [-1, 1]
  const CallbackProvider noise([](const Hamiltonian& H, std::uint64_t seed) {
    Rng r(seed);
    Correlations::Vector d(H.size());
    for (int i = 0; i < H.size(); ++i) d[i] = uniform_real(r, -1.0, 1.0);
    std::vector<Coupling<double>> off;
    for (int i = 0; i < H.size(); ++i)
      for (int j = i + 1; j < H.size(); ++j) off.push_back({i, j, uniform_real(r, -1.0, 1.0)});
    return Correlations(std::move(d), std::move(off));
  });
  for (int t = 0; t < trials; ++t) {
    const int n = 1 + static_cast<int>(uniform_index(rng, 40));
    const Graph g = gen_erdos_renyi({n, std::min(uniform_real(rng, 1.0, 6.0), n - 1.0), rng()});
    const auto r = run_qiro(MisProblem{g, 1.1}, noise, {static_cast<int>(uniform_index(rng, 6)), rng()});
    if (!is_independent(g, r.solution)) return "QIRO returned a dependent set";
  }
  return {};
}

std::string hardness_suite(int, Rng&)
{
  if (hardness_parameter(Graph(2, {{0, 1}})).hp != 0.5) return "single edge";
  if (std::abs(hardness_parameter(Graph(3, {{0, 1}, {1, 2}, {0, 2}})).hp - 1.0 / 3.0) > 1e-15) return "triangle";
  if (hardness_parameter(Graph(2, {})).hp != 1.0) return "two isolated vertices";
  return {};
}

} // namespace

bool run_verify(std::ostream& os, int trials, std::uint64_t seed)
{
  struct Entry
  {
    const char* name;
    int default_trials;
    Suite suite;
  };
  const std::vector<Entry> suites{
    {"correlations: closed form vs state vector", 200, correlations_suite},
    {"encoding: spin energies equal objectives", 100, encoding_suite},
    {"inference: rules keep the optimum", 200, inference_suite},
    {"elimination: energy identity", 200, elimination_suite},
    {"qiro: independent sets under noise", 300, feasibility_suite},
    {"hardness: closed cases", 1, hardness_suite},
  };
  bool ok = true;
  for (std::size_t k = 0; k < suites.size(); ++k) {
    Rng rng(derive_seed({seed, static_cast<std::uint64_t>(k)}));
    const auto start = std::chrono::steady_clock::now();
    std::string failure;
    try {
      failure = suites[k].suite(trials > 0 ? trials : suites[k].default_trials, rng);
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    os << (failure.empty() ? "PASS " : "FAIL ") << suites[k].name << " (" << secs << " s)";
    if (!failure.empty()) os << ": " << failure;
    os << '\n';
    ok = ok && failure.empty();
  }
  return ok;
}

} // namespace qiro::cli
