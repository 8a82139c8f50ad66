#include "qiro/baselines.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

#include "qiro/random.hpp"

namespace qiro {

namespace {

void check_cap(int n, int cap, const char* who)
{
  if (n > cap)
    throw std::length_error(std::string(who) + ": " + std::to_string(n) + " variables exceed cap of " +
                            std::to_string(cap));
}

/// Live-vertex bookkeeping shared by the greedy heuristics.
class LiveGraph
{
public:
  explicit LiveGraph(const Graph& g)
    : g_(g), live_(static_cast<std::size_t>(g.size()), 1), degree_(static_cast<std::size_t>(g.size()))
  {
    for (int v = 0; v < g.size(); ++v) degree_[v] = g.degree(v);
    remaining_ = g.size();
  }

  int remaining() const { return remaining_; }
  bool live(int v) const { return live_[v] != 0; }
  int degree(int v) const { return degree_[v]; }

  /// Takes v into the set: v and its live neighbours leave the graph.
  void take(int v)
  {
    std::vector<int> gone{v};
    for (int w : g_.neighbors(v))
      if (live_[w]) gone.push_back(w);
    for (int u : gone) remove(u);
  }

private:
  void remove(int u)
  {
    live_[u] = 0;
    --remaining_;
    for (int w : g_.neighbors(u))
      if (live_[w]) --degree_[w];
  }

  const Graph& g_;
  std::vector<char> live_;
  std::vector<int> degree_;
  int remaining_ = 0;
};

} // namespace

std::vector<int> random_greedy(const Graph& g, std::uint64_t seed)
{
  Rng rng(seed);
  LiveGraph live(g);
  std::vector<int> out;
  std::vector<int> pool;
  while (live.remaining() > 0) {
    pool.clear();
    for (int v = 0; v < g.size(); ++v)
      if (live.live(v)) pool.push_back(v);
    const int v = pool[uniform_index(rng, pool.size())];
    out.push_back(v);
    live.take(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> min_degree_greedy(const Graph& g, std::uint64_t seed)
{
  Rng rng(seed);
  LiveGraph live(g);
  std::vector<int> out;
  std::vector<int> pool;
  while (live.remaining() > 0) {
    int best = std::numeric_limits<int>::max();
    pool.clear();
    for (int v = 0; v < g.size(); ++v) {
      if (!live.live(v)) continue;
      if (live.degree(v) < best) {
        best = live.degree(v);
        pool.clear();
      }
      if (live.degree(v) == best) pool.push_back(v);
    }
    const int v = pool[uniform_index(rng, pool.size())];
    out.push_back(v);
    live.take(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

Spins random_spins(int n, Rng& rng)
{
  Spins z(n);
  for (int i = 0; i < n; ++i) z[i] = (rng() >> 63) ? 1 : -1;
  return z;
}

/// Metropolis acceptance of an energy change at inverse temperature beta.
bool metropolis(double delta, double beta, Rng& rng)
{
  if (delta <= 0.0) return true;
  return uniform_real(rng) < std::exp(-beta * delta);
}

} // namespace

AnnealResult simulated_annealing(const Hamiltonian& H, std::uint64_t seed, const SaConfig& cfg)
{
  const int n = H.size();
  Rng rng(seed);
  AnnealResult out;
  Spins z = random_spins(n, rng);
  double energy = H.energy(z);
  out.config = z;
  out.energy = energy;
  out.best_trace.push_back(energy);
  if (n == 0) return out;

  const std::int64_t steps = static_cast<std::int64_t>(cfg.flips_per_variable) * n;
  const double span = cfg.beta_final - cfg.beta_initial;
  for (std::int64_t t = 0; t < steps; ++t) {
    const double beta = steps > 1 ? cfg.beta_initial + span * static_cast<double>(t) / static_cast<double>(steps - 1)
                                  : cfg.beta_final;
    const int i = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    const double delta = -2.0 * z[i] * H.local_field(i, z);
    if (!metropolis(delta, beta, rng)) continue;
    z[i] = -z[i];
    energy += delta;
    if (energy < out.energy - 1e-9) {
      out.config = z;
      out.energy = energy;
      out.best_trace.push_back(energy);
    }
  }
  out.energy = H.energy(out.config);
  return out;
}

void PtConfig::validate() const
{
  if (temperatures.empty()) throw std::invalid_argument("PtConfig: need at least one replica");
  for (std::size_t k = 0; k < temperatures.size(); ++k) {
    if (!(temperatures[k] > 0.0)) throw std::invalid_argument("PtConfig: temperatures must be positive");
    if (k > 0 && !(temperatures[k] > temperatures[k - 1]))
      throw std::invalid_argument("PtConfig: temperatures must be strictly increasing");
  }
  if (cycles < 0 || sweeps_per_cycle < 1) throw std::invalid_argument("PtConfig: invalid cycle counts");
}

double exchange_probability(double beta_lo, double energy_lo, double beta_hi, double energy_hi)
{
  const double arg = (beta_lo - beta_hi) * (energy_lo - energy_hi);
  return arg >= 0.0 ? 1.0 : std::exp(arg);
}

PtResult parallel_tempering(const Hamiltonian& H, std::uint64_t seed, const PtConfig& cfg)
{
  cfg.validate();
  const int n = H.size();
  const auto replicas = cfg.temperatures.size();
  Rng rng(seed);
  std::vector<double> beta(replicas);
  for (std::size_t k = 0; k < replicas; ++k) beta[k] = 1.0 / cfg.temperatures[k];

  std::vector<Spins> z(replicas);
  std::vector<double> energy(replicas);
  for (std::size_t k = 0; k < replicas; ++k) {
    z[k] = random_spins(n, rng);
    energy[k] = H.energy(z[k]);
  }
  PtResult out;
  out.exchange_attempts.assign(replicas > 0 ? replicas - 1 : 0, 0);
  out.exchange_accepts.assign(replicas > 0 ? replicas - 1 : 0, 0);
  const auto best_it = std::min_element(energy.begin(), energy.end());
  out.config = z[static_cast<std::size_t>(best_it - energy.begin())];
  out.energy = *best_it;
  out.best_trace.push_back(out.energy);

  for (int cycle = 0; cycle < cfg.cycles; ++cycle) {
    for (std::size_t k = 0; k < replicas; ++k) {
      for (int sweep = 0; sweep < cfg.sweeps_per_cycle; ++sweep)
        for (int i = 0; i < n; ++i) {
          const double delta = -2.0 * z[k][i] * H.local_field(i, z[k]);
          if (!metropolis(delta, beta[k], rng)) continue;
          z[k][i] = -z[k][i];
          energy[k] += delta;
          if (energy[k] < out.energy - 1e-9) {
            out.config = z[k];
            out.energy = energy[k];
            out.best_trace.push_back(out.energy);
          }
        }
    }
    for (std::size_t k = 0; k + 1 < replicas; ++k) {
      ++out.exchange_attempts[k];
      const double p = exchange_probability(beta[k], energy[k], beta[k + 1], energy[k + 1]);
      if (p >= 1.0 || uniform_real(rng) < p) {
        std::swap(z[k], z[k + 1]);
        std::swap(energy[k], energy[k + 1]);
        ++out.exchange_accepts[k];
      }
    }
  }
  out.energy = H.energy(out.config);
  return out;
}

IsingOptimum brute_force_ising(const Hamiltonian& H, int cap)
{
  const int n = H.size();
  check_cap(n, cap, "brute_force_ising");
  IsingOptimum best;
  best.energy = std::numeric_limits<double>::infinity();
  Spins z = Spins::Constant(n, -1);
  std::vector<double> partial(static_cast<std::size_t>(n) + 1, H.offset());
  // depth-first in lexicographic order, FALSE branch first; partial[i] is the
  // energy of the terms among variables < i
  auto visit = [&](auto&& self, int i) -> void {
    if (i == n) {
      if (partial[n] < best.energy - 1e-9) {
        best.energy = partial[n];
        best.config = z;
      }
      return;
    }
    for (int s : {-1, 1}) {
      z[i] = s;
      double e = partial[i] + H.field(i) * s;
      for (const auto& nb : H.neighbors(i))
        if (nb.k < i) e += nb.value * s * z[nb.k];
      partial[i + 1] = e;
      self(self, i + 1);
    }
    z[i] = -1;
  };
  visit(visit, 0);
  best.energy = H.energy(best.config);
  return best;
}

std::vector<int> brute_force_mis(const Graph& g, int cap)
{
  const int n = g.size();
  check_cap(n, cap, "brute_force_mis");
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  std::vector<int> current;
  std::vector<int> best;
  bool found = false;
  // exclusion before inclusion enumerates independent sets in lexicographic
  // order of their indicator vectors; only strict improvements replace best
  auto visit = [&](auto&& self, int i) -> void {
    if (found && static_cast<int>(current.size()) + (n - i) <= static_cast<int>(best.size())) return;
    if (i == n) {
      if (!found || current.size() > best.size()) {
        best = current;
        found = true;
      }
      return;
    }
    self(self, i + 1);
    if (blocked[i]) return;
    std::vector<int> newly;
    for (int w : g.neighbors(i))
      if (w > i && !blocked[w]) {
        blocked[w] = 1;
        newly.push_back(w);
      }
    current.push_back(i);
    self(self, i + 1);
    current.pop_back();
    for (int w : newly) blocked[w] = 0;
  };
  visit(visit, 0);
  return best;
}

SatOptimum brute_force_maxsat(const CnfFormula& phi, int cap)
{
  const int n = phi.num_vars();
  check_cap(n, cap, "brute_force_maxsat");
  // bit (n-1-i) of k holds x_i, so increasing k is lexicographic order
  struct Mask
  {
    std::uint64_t vars;
    std::uint64_t falsifying;
  };
  std::vector<Mask> masks;
  masks.reserve(phi.num_clauses());
  for (const auto& c : phi.clauses()) {
    Mask m{0, 0};
    for (const auto& l : c.literals()) {
      const std::uint64_t bit = std::uint64_t{1} << (n - 1 - l.var);
      m.vars |= bit;
      if (l.negated) m.falsifying |= bit;
    }
    masks.push_back(m);
  }
  const std::uint64_t total = std::uint64_t{1} << n;
  std::uint64_t best_k = 0;
  int best = std::numeric_limits<int>::max();
  for (std::uint64_t k = 0; k < total; ++k) {
    int violated = 0;
    for (const auto& m : masks) violated += (k & m.vars) == m.falsifying;
    if (violated < best) {
      best = violated;
      best_k = k;
      if (best == 0) break;
    }
  }
  SatOptimum out{Assignment(n), best + phi.violation_offset()};
  for (int i = 0; i < n; ++i) out.assignment.set(i, ((best_k >> (n - 1 - i)) & 1U) != 0);
  return out;
}

namespace {

using Bits = std::bitset<256>;

class MisBranchAndBound
{
public:
  explicit MisBranchAndBound(const Graph& g)
    : n_(g.size()), adj_(static_cast<std::size_t>(g.size()))
  {
    for (const auto& e : g.edges()) {
      adj_[e.u].set(static_cast<std::size_t>(e.v));
      adj_[e.v].set(static_cast<std::size_t>(e.u));
    }
    best_ = min_degree_greedy(g, 0);
  }

  std::vector<int> solve()
  {
    Bits all;
    for (int v = 0; v < n_; ++v) all.set(static_cast<std::size_t>(v));
    std::vector<int> current;
    search(all, current);
    std::sort(best_.begin(), best_.end());
    return best_;
  }

private:
  int degree_in(int v, const Bits& p) const { return static_cast<int>((adj_[v] & p).count()); }

  /// Greedy partition of p into cliques; an independent set takes at most
  /// one vertex per clique.
  int clique_cover(Bits p) const
  {
    int cliques = 0;
    while (p.any()) {
      int u = first(p);
      p.reset(static_cast<std::size_t>(u));
      Bits cand = adj_[u] & p;
      while (cand.any()) {
        const int w = first(cand);
        p.reset(static_cast<std::size_t>(w));
        cand &= adj_[w];
        cand.reset(static_cast<std::size_t>(w));
      }
      ++cliques;
    }
    return cliques;
  }

  static int first(const Bits& b)
  {
    for (std::size_t k = 0; k < b.size(); ++k)
      if (b.test(k)) return static_cast<int>(k);
    return -1;
  }

  void search(Bits p, std::vector<int>& current)
  {
    const auto mark = current.size();
    // vertices of degree 0 or 1 belong to some maximum independent set
    for (bool changed = true; changed;) {
      changed = false;
      for (int v = 0; v < n_; ++v)
        if (p.test(static_cast<std::size_t>(v)) && degree_in(v, p) <= 1) {
          current.push_back(v);
          p &= ~adj_[v];
          p.reset(static_cast<std::size_t>(v));
          changed = true;
        }
    }
    if (p.none()) {
      if (current.size() > best_.size()) best_ = current;
      current.resize(mark);
      return;
    }
    if (static_cast<int>(current.size()) + clique_cover(p) <= static_cast<int>(best_.size())) {
      current.resize(mark);
      return;
    }
    int pivot = -1;
    int pivot_degree = -1;
    for (int v = 0; v < n_; ++v)
      if (p.test(static_cast<std::size_t>(v))) {
        const int d = degree_in(v, p);
        if (d > pivot_degree) {
          pivot = v;
          pivot_degree = d;
        }
      }
    Bits with = p & ~adj_[pivot];
    with.reset(static_cast<std::size_t>(pivot));
    current.push_back(pivot);
    search(with, current);
    current.pop_back();
    Bits without = p;
    without.reset(static_cast<std::size_t>(pivot));
    search(without, current);
    current.resize(mark);
  }

  int n_;
  std::vector<Bits> adj_;
  std::vector<int> best_;
};

} // namespace

std::vector<int> exact_mis(const Graph& g)
{
  if (g.size() > 256) throw std::length_error("exact_mis: graphs above 256 vertices are not supported");
  if (g.size() == 0) return {};
  return MisBranchAndBound(g).solve();
}

namespace {

class MaxSatBranchAndBound
{
public:
  MaxSatBranchAndBound(const CnfFormula& phi, std::int64_t node_limit)
    : phi_(phi), n_(phi.num_vars()), value_(static_cast<std::size_t>(phi.num_vars()), -1), limit_(node_limit)
  {
    occurrences_.resize(static_cast<std::size_t>(n_));
    for (std::size_t c = 0; c < phi.clauses().size(); ++c)
      for (const auto& l : phi.clauses()[c].literals()) occurrences_[l.var].push_back(static_cast<int>(c));
    order_.resize(static_cast<std::size_t>(n_));
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return occurrences_[a].size() > occurrences_[b].size(); });
    const auto seed = simulated_annealing(maxsat_to_ising(phi), 0x5eed);
    best_assignment_ = assignment_from_spins(seed.config);
    best_ = count_violated(phi, best_assignment_) - phi.violation_offset();
  }

  std::optional<SatOptimum> solve()
  {
    search(0, 0);
    if (nodes_ > limit_) return std::nullopt;
    return SatOptimum{best_assignment_, best_ + phi_.violation_offset()};
  }

private:
  /// Lower bound: falsified clauses plus, per free variable, the smaller of
  /// its positive and negative effective unit counts.
  int lower_bound(int violated)
  {
    pos_units_.assign(static_cast<std::size_t>(n_), 0);
    neg_units_.assign(static_cast<std::size_t>(n_), 0);
    for (const auto& c : phi_.clauses()) {
      int free_lits = 0;
      Literal last{};
      bool satisfied = false;
      for (const auto& l : c.literals()) {
        const int v = value_[l.var];
        if (v < 0) {
          ++free_lits;
          last = l;
        } else if (l.holds(v == 1)) {
          satisfied = true;
        }
      }
      if (satisfied || free_lits != 1) continue;
      (last.negated ? neg_units_ : pos_units_)[last.var]++;
    }
    int bound = violated;
    for (int v = 0; v < n_; ++v) bound += std::min(pos_units_[v], neg_units_[v]);
    return bound;
  }

  int falsified_by(int var) const
  {
    int count = 0;
    for (int c : occurrences_[var]) {
      bool all_false = true;
      for (const auto& l : phi_.clauses()[c].literals()) {
        const int v = value_[l.var];
        if (v < 0 || l.holds(v == 1)) {
          all_false = false;
          break;
        }
      }
      count += all_false;
    }
    return count;
  }

  void search(int depth, int violated)
  {
    if (++nodes_ > limit_) return;
    if (lower_bound(violated) >= best_) return;
    if (depth == n_) {
      best_ = violated;
      for (int v = 0; v < n_; ++v) best_assignment_.set(v, value_[v] == 1);
      return;
    }
    const int var = order_[depth];
    int first_value = 1;
    {
      int pos = 0;
      int neg = 0;
      for (int c : occurrences_[var])
        for (const auto& l : phi_.clauses()[c].literals())
          if (l.var == var) (l.negated ? neg : pos)++;
      first_value = pos >= neg ? 1 : 0;
    }
    for (int value : {first_value, 1 - first_value}) {
      value_[var] = value;
      search(depth + 1, violated + falsified_by(var));
      if (nodes_ > limit_) break;
    }
    value_[var] = -1;
  }

  const CnfFormula& phi_;
  int n_;
  std::vector<int> value_;
  std::vector<std::vector<int>> occurrences_;
  std::vector<int> order_;
  std::vector<int> pos_units_;
  std::vector<int> neg_units_;
  Assignment best_assignment_;
  int best_ = 0;
  std::int64_t nodes_ = 0;
  std::int64_t limit_;
};

} // namespace

std::optional<SatOptimum> exact_maxsat(const CnfFormula& phi, std::int64_t node_limit)
{
  if (phi.num_vars() == 0) return SatOptimum{Assignment(0), phi.violation_offset()};
  return MaxSatBranchAndBound(phi, node_limit).solve();
}

HardnessReport hardness_parameter(const Graph& g, int cap)
{
  const int n = g.size();
  check_cap(n, cap, "hardness_parameter");
  // counts[s] = number of independent sets of size s, by branching on the
  // lowest live vertex (exclude / include-and-block-neighbours)
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::uint64_t> nbr(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges()) {
    nbr[e.u] |= std::uint64_t{1} << e.v;
    nbr[e.v] |= std::uint64_t{1} << e.u;
  }
  auto count = [&](auto&& self, std::uint64_t live, int size) -> void {
    if (live == 0) {
      ++counts[size];
      return;
    }
    const int v = std::countr_zero(live);
    const std::uint64_t rest = live & (live - 1);
    self(self, rest, size);
    self(self, rest & ~nbr[v], size + 1);
  };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  count(count, all, 0);

  HardnessReport r;
  for (int s = n; s >= 0; --s)
    if (counts[s] > 0) {
      r.mis_size = s;
      break;
    }
  r.count_at_mis = counts[r.mis_size];
  r.count_below_mis = r.mis_size > 0 ? counts[r.mis_size - 1] : 0;
  r.hp = r.mis_size > 0 ? static_cast<double>(r.count_below_mis) / (r.mis_size * static_cast<double>(r.count_at_mis))
                        : 0.0;
  return r;
}

} // namespace qiro
