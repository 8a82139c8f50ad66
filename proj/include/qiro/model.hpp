#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "qiro/spin_hamiltonian.hpp"

namespace qiro {

struct Edge
{
  int u = 0;
  int v = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Undirected simple graph on vertices 0..n-1. Edges are stored with u < v,
/// sorted and deduplicated; adjacency lists are sorted.
class Graph
{
public:
  Graph() = default;
  explicit Graph(int n);
  Graph(int n, std::vector<Edge> edges);

  int size() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const int> neighbors(int v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return static_cast<int>(adjacency_[static_cast<std::size_t>(v)].size()); }
  bool adjacent(int u, int v) const;

  bool operator==(const Graph& other) const { return n_ == other.n_ && edges_ == other.edges_; }

private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
};

/// Subgraph induced by `vertices` (any order); vertex k of the result is
/// vertices[k] of the parent, preserving the given order.
Graph induced_subgraph(const Graph& g, std::span<const int> vertices);

/// Connected components, each sorted ascending, ordered by smallest vertex.
std::vector<std::vector<int>> connected_components(const Graph& g);

struct Literal
{
  int var = 0;
  bool negated = false;

  /// Truth value of the literal under variable value `x`.
  bool holds(bool x) const { return x != negated; }
  Literal operator!() const { return {var, !negated}; }
  auto operator<=>(const Literal&) const = default;
};

/// Disjunction of one or two literals. An empty clause only ever exists
/// transiently inside reductions; formulas account for it through their
/// violation offset.
class Clause
{
public:
  Clause() = default;
  explicit Clause(Literal a) : lits_{a, {}}, size_(1) {}
  Clause(Literal a, Literal b) : lits_{a, b}, size_(2) {}

  int size() const { return size_; }
  std::span<const Literal> literals() const { return {lits_.data(), static_cast<std::size_t>(size_)}; }
  const Literal& operator[](int k) const { return lits_[static_cast<std::size_t>(k)]; }
  bool contains_var(int var) const;

  bool operator==(const Clause& o) const;
  bool operator<(const Clause& o) const;

private:
  std::array<Literal, 2> lits_{};
  int size_ = 0;
};

/// Per-variable truth assignment; entries may be unset while a solution is
/// being built.
class Assignment
{
public:
  Assignment() = default;
  explicit Assignment(int n) : values_(static_cast<std::size_t>(n), kUnset) {}
  Assignment(std::initializer_list<bool> values);

  int size() const { return static_cast<int>(values_.size()); }
  bool is_set(int var) const { return values_[static_cast<std::size_t>(var)] != kUnset; }
  bool operator[](int var) const { return values_[static_cast<std::size_t>(var)] == 1; }
  void set(int var, bool value) { values_[static_cast<std::size_t>(var)] = value ? 1 : 0; }
  void unset(int var) { values_[static_cast<std::size_t>(var)] = kUnset; }
  bool complete() const;

  bool operator==(const Assignment&) const = default;

private:
  static constexpr std::int8_t kUnset = -1;
  std::vector<std::int8_t> values_;
};

/// CNF with at most two literals per clause. Construction normalizes each
/// clause: duplicate literals collapse, tautologies vanish, and empty
/// clauses are folded into the violation offset. Duplicate clauses are kept.
class CnfFormula
{
public:
  CnfFormula() = default;
  explicit CnfFormula(int num_vars) : num_vars_(num_vars) {}
  CnfFormula(int num_vars, std::vector<std::vector<Literal>> clauses, int violation_offset = 0);
  CnfFormula(int num_vars, std::vector<Clause> clauses, int violation_offset = 0);

  int num_vars() const { return num_vars_; }
  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t num_clauses() const { return clauses_.size(); }
  int violation_offset() const { return violation_offset_; }
  bool empty() const { return clauses_.empty(); }

  /// Variables occurring in at least one clause, ascending.
  std::vector<int> occurring_vars() const;

  bool operator==(const CnfFormula&) const = default;

private:
  int num_vars_ = 0;
  std::vector<Clause> clauses_;
  int violation_offset_ = 0;
};

/// Normalizes a raw literal list into `out`; returns false for tautologies.
bool normalize_clause(std::span<const Literal> lits, std::vector<Literal>& out);

// Encodings. Spin convention throughout: z = 2x - 1, so z = +1 means the
// vertex is in the set / the variable is TRUE.

/// Ising form of  -sum_i x_i + lambda * sum_{(i,j) in E} x_i x_j.
Hamiltonian mis_to_ising(const Graph& g, double lambda);

/// Ising form of the violated-clause count (violation offset excluded).
Hamiltonian maxsat_to_ising(const CnfFormula& phi);

inline int to_spin(bool x) { return x ? 1 : -1; }
inline bool to_bool(int z) { return z > 0; }

Spins spins_from_assignment(const Assignment& a);
Assignment assignment_from_spins(const Spins& z);
Spins spins_from_set(int n, std::span<const int> vertices);
std::vector<int> set_from_spins(const Spins& z);

bool is_independent(const Graph& g, std::span<const int> vertices);

/// Edges with both endpoints in `vertices`.
int count_conflicts(const Graph& g, std::span<const int> vertices);

/// -|S| + lambda * (edges inside S).
double mis_cost(const Graph& g, std::span<const int> vertices, double lambda);

/// Clauses with every literal false, plus the formula's violation offset.
int count_violated(const CnfFormula& phi, const Assignment& a);

} // namespace qiro
