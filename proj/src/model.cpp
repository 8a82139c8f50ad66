#include "qiro/model.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qiro {

Graph::Graph(int n)
  : n_(n), adjacency_(static_cast<std::size_t>(n))
{
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
}

Graph::Graph(int n, std::vector<Edge> edges)
  : Graph(n)
{
  for (auto& e : edges) {
    if (e.u == e.v) throw std::invalid_argument("Graph: self-loop on vertex " + std::to_string(e.u));
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw std::out_of_range("Graph: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (const auto& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& row : adjacency_) std::sort(row.begin(), row.end());
}

bool Graph::adjacent(int u, int v) const
{
  const auto row = neighbors(u);
  return std::binary_search(row.begin(), row.end(), v);
}

Graph induced_subgraph(const Graph& g, std::span<const int> vertices)
{
  std::vector<int> index(static_cast<std::size_t>(g.size()), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k) index[vertices[k]] = static_cast<int>(k);
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < vertices.size(); ++k)
    for (int w : g.neighbors(vertices[k]))
      if (index[w] > static_cast<int>(k)) edges.push_back({static_cast<int>(k), index[w]});
  return Graph(static_cast<int>(vertices.size()), std::move(edges));
}

std::vector<std::vector<int>> connected_components(const Graph& g)
{
  std::vector<std::vector<int>> out;
  std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
  std::vector<int> stack;
  for (int s = 0; s < g.size(); ++s) {
    if (seen[s]) continue;
    auto& comp = out.emplace_back();
    stack.push_back(s);
    seen[s] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : g.neighbors(v))
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
  }
  return out;
}

bool Clause::contains_var(int var) const
{
  for (const auto& l : literals())
    if (l.var == var) return true;
  return false;
}

bool Clause::operator==(const Clause& o) const
{
  return size_ == o.size_ && std::equal(literals().begin(), literals().end(), o.literals().begin());
}

bool Clause::operator<(const Clause& o) const
{
  return std::lexicographical_compare(literals().begin(), literals().end(), o.literals().begin(), o.literals().end());
}

Assignment::Assignment(std::initializer_list<bool> values)
{
  values_.reserve(values.size());
  for (bool v : values) values_.push_back(v ? 1 : 0);
}

bool Assignment::complete() const
{
  return std::none_of(values_.begin(), values_.end(), [](auto v) { return v == kUnset; });
}

bool normalize_clause(std::span<const Literal> lits, std::vector<Literal>& out)
{
  out.clear();
  for (const auto& l : lits) {
    bool dup = false;
    for (const auto& o : out) {
      if (o.var != l.var) continue;
      if (o.negated != l.negated) return false; // x or not x
      dup = true;
    }
    if (!dup) out.push_back(l);
  }
  std::sort(out.begin(), out.end());
  return true;
}

namespace {

void check_literal(int num_vars, const Literal& l)
{
  if (l.var < 0 || l.var >= num_vars)
    throw std::out_of_range("CnfFormula: literal variable " + std::to_string(l.var) + " out of range");
}

} // namespace

CnfFormula::CnfFormula(int num_vars, std::vector<std::vector<Literal>> clauses, int violation_offset)
  : num_vars_(num_vars), violation_offset_(violation_offset)
{
  if (violation_offset < 0) throw std::invalid_argument("CnfFormula: negative violation offset");
  std::vector<Literal> norm;
  for (const auto& raw : clauses) {
    for (const auto& l : raw) check_literal(num_vars, l);
    if (!normalize_clause(raw, norm)) continue;
    if (norm.size() > 2) throw std::invalid_argument("CnfFormula: clause with more than two literals");
    if (norm.empty())
      ++violation_offset_;
    else if (norm.size() == 1)
      clauses_.emplace_back(norm[0]);
    else
      clauses_.emplace_back(norm[0], norm[1]);
  }
}

CnfFormula::CnfFormula(int num_vars, std::vector<Clause> clauses, int violation_offset)
  : num_vars_(num_vars), violation_offset_(violation_offset)
{
  if (violation_offset < 0) throw std::invalid_argument("CnfFormula: negative violation offset");
  std::vector<Literal> norm;
  for (const auto& c : clauses) {
    for (const auto& l : c.literals()) check_literal(num_vars, l);
    if (!normalize_clause(c.literals(), norm)) continue;
    if (norm.empty())
      ++violation_offset_;
    else if (norm.size() == 1)
      clauses_.emplace_back(norm[0]);
    else
      clauses_.emplace_back(norm[0], norm[1]);
  }
}

std::vector<int> CnfFormula::occurring_vars() const
{
  std::vector<char> seen(static_cast<std::size_t>(num_vars_), 0);
  for (const auto& c : clauses_)
    for (const auto& l : c.literals()) seen[l.var] = 1;
  std::vector<int> out;
  for (int v = 0; v < num_vars_; ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

Hamiltonian mis_to_ising(const Graph& g, double lambda)
{
  if (!(lambda > 1.0)) throw std::invalid_argument("mis_to_ising: penalty lambda must exceed 1");
  const int n = g.size();
  Hamiltonian::Vector h(n);
  for (int i = 0; i < n; ++i) h[i] = -0.5 + lambda * g.degree(i) / 4.0;
  std::vector<Coupling<double>> J;
  J.reserve(g.num_edges());
  for (const auto& e : g.edges()) J.push_back({e.u, e.v, lambda / 4.0});
  const double c = -n / 2.0 + lambda * static_cast<double>(g.num_edges()) / 4.0;
  return Hamiltonian(std::move(h), std::move(J), c);
}

Hamiltonian maxsat_to_ising(const CnfFormula& phi)
{
  // A literal is false with indicator (1 - s z)/2, s = +1 for a positive
  // literal; a clause is violated with the product of its indicators.
  Hamiltonian::Vector h = Hamiltonian::Vector::Zero(phi.num_vars());
  std::vector<Coupling<double>> J;
  double c = 0.0;
  for (const auto& cl : phi.clauses()) {
    if (cl.size() == 1) {
      const double s = cl[0].negated ? -1.0 : 1.0;
      h[cl[0].var] -= 0.5 * s;
      c += 0.5;
    } else {
      const double sa = cl[0].negated ? -1.0 : 1.0;
      const double sb = cl[1].negated ? -1.0 : 1.0;
      h[cl[0].var] -= 0.25 * sa;
      h[cl[1].var] -= 0.25 * sb;
      J.push_back({cl[0].var, cl[1].var, 0.25 * sa * sb});
      c += 0.25;
    }
  }
  return Hamiltonian(std::move(h), std::move(J), c);
}

Spins spins_from_assignment(const Assignment& a)
{
  Spins z(a.size());
  for (int i = 0; i < a.size(); ++i) z[i] = to_spin(a[i]);
  return z;
}

Assignment assignment_from_spins(const Spins& z)
{
  Assignment a(static_cast<int>(z.size()));
  for (int i = 0; i < z.size(); ++i) a.set(i, to_bool(z[i]));
  return a;
}

Spins spins_from_set(int n, std::span<const int> vertices)
{
  Spins z = Spins::Constant(n, -1);
  for (int v : vertices) z[v] = 1;
  return z;
}

std::vector<int> set_from_spins(const Spins& z)
{
  std::vector<int> out;
  for (int i = 0; i < z.size(); ++i)
    if (z[i] > 0) out.push_back(i);
  return out;
}

int count_conflicts(const Graph& g, std::span<const int> vertices)
{
  std::vector<char> in(static_cast<std::size_t>(g.size()), 0);
  for (int v : vertices) {
    if (v < 0 || v >= g.size()) throw std::out_of_range("vertex " + std::to_string(v) + " not in graph");
    in[v] = 1;
  }
  int conflicts = 0;
  for (const auto& e : g.edges())
    if (in[e.u] && in[e.v]) ++conflicts;
  return conflicts;
}

bool is_independent(const Graph& g, std::span<const int> vertices)
{
  return count_conflicts(g, vertices) == 0;
}

double mis_cost(const Graph& g, std::span<const int> vertices, double lambda)
{
  std::vector<int> distinct(vertices.begin(), vertices.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  return -static_cast<double>(distinct.size()) + lambda * count_conflicts(g, distinct);
}

int count_violated(const CnfFormula& phi, const Assignment& a)
{
  if (a.size() < phi.num_vars()) throw std::invalid_argument("count_violated: assignment shorter than formula");
  for (int v = 0; v < phi.num_vars(); ++v)
    if (!a.is_set(v)) throw std::invalid_argument("count_violated: variable " + std::to_string(v) + " unassigned");
  int violated = phi.violation_offset();
  for (const auto& cl : phi.clauses()) {
    bool sat = false;
    for (const auto& l : cl.literals()) sat = sat || l.holds(a[l.var]);
    if (!sat) ++violated;
  }
  return violated;
}

} // namespace qiro
