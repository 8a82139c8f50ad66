#include <algorithm>
#include <stdexcept>

#include "qiro/baselines.hpp"
#include "qiro/qiro.hpp"
#include "qiro/selection.hpp"

namespace qiro {

MisRule opposite(MisRule rule)
{
  switch (rule) {
  case MisRule::include_vertex: return MisRule::exclude_vertex;
  case MisRule::exclude_vertex: return MisRule::include_vertex;
  case MisRule::exclude_pair: return MisRule::exclude_common;
  case MisRule::exclude_common: return MisRule::exclude_pair;
  }
  throw std::logic_error("opposite: unknown MIS rule");
}

MisState::MisState(const MisProblem& problem)
  : graph_(std::make_shared<const Graph>(problem.graph)),
    lambda_(problem.lambda),
    live_(static_cast<std::size_t>(problem.graph.size()), 1),
    live_count_(problem.graph.size())
{
  if (!(problem.lambda > 1.0)) throw std::invalid_argument("MisState: penalty lambda must exceed 1");
}

std::vector<int> MisState::live_vertices() const
{
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(live_count_));
  for (int v = 0; v < graph_->size(); ++v)
    if (live_[v]) out.push_back(v);
  return out;
}

Hamiltonian MisState::hamiltonian() const
{
  const auto verts = live_vertices();
  return mis_to_ising(induced_subgraph(*graph_, verts), lambda_);
}

void MisState::remove(int v)
{
  if (!live_[v]) return;
  live_[v] = 0;
  --live_count_;
}

void MisState::include(int v)
{
  if (!live_[v]) throw std::logic_error("MisState::include: vertex " + std::to_string(v) + " is not live");
  set_.push_back(v);
  for (int w : graph_->neighbors(v)) remove(w);
  remove(v);
}

int MisState::apply(const MisDecision& d)
{
  const int before = live_count_;
  switch (d.rule) {
  case MisRule::include_vertex: include(d.i); break;
  case MisRule::exclude_vertex: remove(d.i); break;
  case MisRule::exclude_pair:
    remove(d.i);
    remove(d.j);
    break;
  case MisRule::exclude_common: {
    std::vector<int> common;
    const auto a = graph_->neighbors(d.i);
    const auto b = graph_->neighbors(d.j);
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    for (int k : common) remove(k);
    break;
  }
  }
  const int removed = before - live_count_;
  if (removed > 0) decisions_.push_back(d);
  return removed;
}

void mis_component_sweep(MisState& s, int nc)
{
  const Graph& g = s.graph();
  std::vector<char> seen(static_cast<std::size_t>(g.size()), 0);
  std::vector<int> component;
  std::vector<int> stack;
  for (int root = 0; root < g.size(); ++root) {
    if (!s.live(root) || seen[root]) continue;
    component.clear();
    stack.assign(1, root);
    seen[root] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (int w : g.neighbors(v))
        if (s.live(w) && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    if (static_cast<int>(component.size()) >= nc) continue;
    std::sort(component.begin(), component.end());
    const Graph sub = induced_subgraph(g, component);
    const auto best = sub.size() <= kBruteForceCap ? brute_force_mis(sub) : exact_mis(sub);
    for (int k : best) s.include(component[k]);
    for (int v : component) s.remove(v);
  }
}

MisDecision reduce_mis(MisState& s, const Correlations& M, int nc, Rng& rng)
{
  if (s.size() == 0) throw std::invalid_argument("reduce_mis: graph is empty");
  const auto verts = s.live_vertices();
  if (M.size() != static_cast<int>(verts.size()))
    throw std::invalid_argument("reduce_mis: correlation matrix does not match the live graph");
  for (const auto& e : ranked_entries(M, rng)) {
    MisDecision d;
    d.i = verts[e.i];
    if (e.one_point()) {
      d.rule = e.value >= 0.0 ? MisRule::include_vertex : MisRule::exclude_vertex;
    } else {
      d.j = verts[e.j];
      if (!s.graph().adjacent(d.i, d.j)) continue;
      // an exactly zero two-point value counts as negative: it removes
      // the fewest vertices
      d.rule = e.value > 0.0 ? MisRule::exclude_pair : MisRule::exclude_common;
    }
    if (s.apply(d) == 0) continue;
    mis_component_sweep(s, nc);
    return d;
  }
  throw std::logic_error("reduce_mis: no correlation entry removed a vertex");
}

MisState reverse_reduce(const MisSnapshot& snap, int nc)
{
  MisState s = snap.node;
  MisDecision d = snap.decision;
  d.rule = opposite(d.rule);
  s.apply(d);
  mis_component_sweep(s, nc);
  return s;
}

} // namespace qiro
