#pragma once

#include <cstdint>
#include <vector>

#include "qiro/instances.hpp"
#include "qiro/model.hpp"
#include "qiro/random.hpp"

namespace fixture {

inline qiro::Graph path(int n)
{
  std::vector<qiro::Edge> e;
  for (int v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
  return qiro::Graph(n, e);
}

inline qiro::Graph complete(int n)
{
  std::vector<qiro::Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.push_back({u, v});
  return qiro::Graph(n, e);
}

inline qiro::Graph star(int leaves)
{
  std::vector<qiro::Edge> e;
  for (int v = 1; v <= leaves; ++v) e.push_back({0, v});
  return qiro::Graph(leaves + 1, e);
}

inline qiro::Graph random_graph(int n, double degree, std::uint64_t seed)
{
  return qiro::gen_erdos_renyi({n, std::min(degree, static_cast<double>(n - 1)), seed});
}

/// Random clause lengths 1 or 2 and duplicate clauses included.
inline qiro::CnfFormula random_formula(int n, int m, std::uint64_t seed, double unit_fraction = 0.2)
{
  qiro::Rng rng(seed);
  std::vector<std::vector<qiro::Literal>> clauses;
  for (int k = 0; k < m; ++k) {
    std::vector<qiro::Literal> c;
    const int len = (n < 2 || qiro::bernoulli(rng, unit_fraction)) ? 1 : 2;
    while (static_cast<int>(c.size()) < len) {
      const int v = static_cast<int>(qiro::uniform_index(rng, static_cast<std::uint64_t>(n)));
      if (!c.empty() && c[0].var == v) continue;
      c.push_back({v, qiro::bernoulli(rng, 0.5)});
    }
    clauses.push_back(c);
  }
  return qiro::CnfFormula(n, clauses);
}

inline qiro::Hamiltonian random_hamiltonian(int n, double density, std::uint64_t seed)
{
  qiro::Rng rng(seed);
  qiro::Hamiltonian::Vector h(n);
  for (int i = 0; i < n; ++i) h[i] = qiro::uniform_real(rng, -1.0, 1.0);
  std::vector<qiro::Coupling<double>> J;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (qiro::bernoulli(rng, density)) J.push_back({i, j, qiro::uniform_real(rng, -1.0, 1.0)});
  return qiro::Hamiltonian(h, J, qiro::uniform_real(rng, -2.0, 2.0));
}

} // namespace fixture
