#include <algorithm>
#include <map>
#include <stdexcept>

#include "qiro/baselines.hpp"
#include "qiro/qiro.hpp"
#include "qiro/selection.hpp"

namespace qiro {

Assignment SatLedger::reconstruct() const
{
  const int n = fixed.size();
  Assignment out(n);
  std::vector<char> substituted(static_cast<std::size_t>(n), 0);
  for (const auto& s : substitutions) substituted[s.var] = 1;
  for (int v = 0; v < n; ++v)
    if (!substituted[v]) out.set(v, fixed.is_set(v) && fixed[v]);
  for (auto it = substitutions.rbegin(); it != substitutions.rend(); ++it)
    out.set(it->var, out[it->target] == it->positive);
  return out;
}

SatState::SatState(const CnfFormula& phi)
{
  ledger_.fixed = Assignment(phi.num_vars());
  set_formula(phi);
}

void SatState::set_formula(CnfFormula phi)
{
  formula_ = std::move(phi);
  live_ = formula_.occurring_vars();
}

Hamiltonian SatState::hamiltonian() const
{
  std::vector<int> compact(static_cast<std::size_t>(formula_.num_vars()), -1);
  for (std::size_t k = 0; k < live_.size(); ++k) compact[live_[k]] = static_cast<int>(k);
  std::vector<Clause> clauses;
  clauses.reserve(formula_.num_clauses());
  for (const auto& c : formula_.clauses()) {
    if (c.size() == 1)
      clauses.emplace_back(Literal{compact[c[0].var], c[0].negated});
    else
      clauses.emplace_back(Literal{compact[c[0].var], c[0].negated}, Literal{compact[c[1].var], c[1].negated});
  }
  return maxsat_to_ising(CnfFormula(size(), std::move(clauses)));
}

namespace {

/// Per-variable image under a partial assignment / substitution.
struct Image
{
  enum class Kind : std::uint8_t { same, constant, literal };
  Kind kind = Kind::same;
  bool value = false;
  Literal lit{};
};

CnfFormula rewrite(const CnfFormula& phi, const std::vector<Image>& image)
{
  std::vector<std::vector<Literal>> out;
  out.reserve(phi.num_clauses());
  for (const auto& c : phi.clauses()) {
    std::vector<Literal> lits;
    bool satisfied = false;
    for (const auto& l : c.literals()) {
      const auto& im = image[l.var];
      if (im.kind == Image::Kind::same) {
        lits.push_back(l);
      } else if (im.kind == Image::Kind::constant) {
        if (l.holds(im.value)) satisfied = true;
      } else {
        lits.push_back(l.negated ? !im.lit : im.lit);
      }
    }
    if (!satisfied) out.push_back(std::move(lits));
  }
  // empty lists become violations; tautologies vanish
  return CnfFormula(phi.num_vars(), std::move(out), phi.violation_offset());
}

} // namespace

void SatState::assign(int var, bool value)
{
  const std::pair<int, bool> one{var, value};
  assign(std::span<const std::pair<int, bool>>(&one, 1));
}

void SatState::assign(std::span<const std::pair<int, bool>> values)
{
  if (values.empty()) return;
  std::vector<Image> image(static_cast<std::size_t>(formula_.num_vars()));
  for (const auto& [var, value] : values) {
    if (ledger_.fixed.is_set(var)) throw std::logic_error("SatState::assign: variable fixed twice");
    ledger_.fixed.set(var, value);
    image[var] = {Image::Kind::constant, value, {}};
  }
  set_formula(rewrite(formula_, image));
}

void SatState::substitute(const Substitution& s)
{
  if (s.var == s.target) throw std::invalid_argument("SatState::substitute: variable substituted by itself");
  std::vector<Image> image(static_cast<std::size_t>(formula_.num_vars()));
  image[s.var] = {Image::Kind::literal, false, Literal{s.target, !s.positive}};
  ledger_.substitutions.push_back(s);
  set_formula(rewrite(formula_, image));
}

void SatState::replace_clauses(std::vector<std::vector<Literal>> clauses, int extra_violations)
{
  set_formula(CnfFormula(formula_.num_vars(), std::move(clauses), formula_.violation_offset() + extra_violations));
}

void SatState::apply(const SatDecision& d)
{
  if (d.two_point)
    substitute({d.i, d.j, d.positive});
  else
    assign(d.i, d.positive);
  ledger_.decisions.push_back(d);
}

void SatState::brute_force()
{
  if (live_.empty()) return;
  std::vector<int> compact(static_cast<std::size_t>(formula_.num_vars()), -1);
  for (std::size_t k = 0; k < live_.size(); ++k) compact[live_[k]] = static_cast<int>(k);
  std::vector<Clause> clauses;
  for (const auto& c : formula_.clauses()) {
    if (c.size() == 1)
      clauses.emplace_back(Literal{compact[c[0].var], c[0].negated});
    else
      clauses.emplace_back(Literal{compact[c[0].var], c[0].negated}, Literal{compact[c[1].var], c[1].negated});
  }
  const CnfFormula sub(size(), std::move(clauses));
  const auto best = sub.num_vars() <= kBruteForceCap ? brute_force_maxsat(sub) : *exact_maxsat(sub, INT64_MAX);
  std::vector<std::pair<int, bool>> values;
  for (std::size_t k = 0; k < live_.size(); ++k) values.emplace_back(live_[k], best.assignment[static_cast<int>(k)]);
  assign(values);
}

namespace {

struct LiteralCounts
{
  std::vector<int> pos_all, neg_all, pos_unit, neg_unit;

  explicit LiteralCounts(const CnfFormula& phi)
  {
    const auto n = static_cast<std::size_t>(phi.num_vars());
    pos_all.assign(n, 0);
    neg_all.assign(n, 0);
    pos_unit.assign(n, 0);
    neg_unit.assign(n, 0);
    for (const auto& c : phi.clauses())
      for (const auto& l : c.literals()) {
        (l.negated ? neg_all : pos_all)[l.var]++;
        if (c.size() == 1) (l.negated ? neg_unit : pos_unit)[l.var]++;
      }
  }
};

} // namespace

bool pure_literal_rule(SatState& s)
{
  const LiteralCounts counts(s.formula());
  std::vector<std::pair<int, bool>> values;
  for (int v : s.live_vars()) {
    if (counts.neg_all[v] == 0)
      values.emplace_back(v, true);
    else if (counts.pos_all[v] == 0)
      values.emplace_back(v, false);
  }
  // pure literals satisfy every clause they touch, so fixing them together
  // is the same as fixing them one by one
  s.assign(values);
  return !values.empty();
}

bool dominating_unit_clause_rule(SatState& s)
{
  bool changed = false;
  const auto vars = s.live_vars();
  for (int v : vars) {
    const LiteralCounts counts(s.formula());
    if (counts.pos_all[v] + counts.neg_all[v] == 0) continue;
    if (counts.pos_all[v] <= counts.neg_unit[v]) {
      s.assign(v, false);
      changed = true;
    } else if (counts.neg_all[v] <= counts.pos_unit[v]) {
      s.assign(v, true);
      changed = true;
    }
  }
  return changed;
}

bool almost_common_clause_rule(SatState& s)
{
  const auto& clauses = s.formula().clauses();
  std::vector<char> used(clauses.size(), 0);
  // index of unused 2-clauses by their literal pair
  std::multimap<std::pair<Literal, Literal>, std::size_t> by_pair;
  for (std::size_t k = 0; k < clauses.size(); ++k)
    if (clauses[k].size() == 2) by_pair.emplace(std::pair(clauses[k][0], clauses[k][1]), k);

  auto take_partner = [&](Literal a, Literal b, std::size_t self) -> bool {
    if (b < a) std::swap(a, b);
    auto [lo, hi] = by_pair.equal_range(std::pair(a, b));
    for (auto it = lo; it != hi; ++it)
      if (it->second != self && !used[it->second]) {
        used[it->second] = 1;
        return true;
      }
    return false;
  };

  std::vector<std::vector<Literal>> out;
  bool changed = false;
  for (std::size_t k = 0; k < clauses.size(); ++k) {
    if (used[k]) continue;
    const auto& c = clauses[k];
    if (c.size() == 2) {
      used[k] = 1;
      // (l v m) and (!l v m) collapse to (m); either literal may be the
      // shared one
      if (take_partner(!c[0], c[1], k)) {
        out.push_back({c[1]});
        changed = true;
        continue;
      }
      if (take_partner(c[0], !c[1], k)) {
        out.push_back({c[0]});
        changed = true;
        continue;
      }
    }
    out.emplace_back(c.literals().begin(), c.literals().end());
  }
  if (changed) s.replace_clauses(std::move(out), 0);
  return changed;
}

bool complementary_unit_clause_rule(SatState& s)
{
  const LiteralCounts counts(s.formula());
  std::vector<int> drop_pos(counts.pos_unit.size(), 0);
  std::vector<int> drop_neg(counts.neg_unit.size(), 0);
  int pairs = 0;
  for (std::size_t v = 0; v < drop_pos.size(); ++v) {
    const int k = std::min(counts.pos_unit[v], counts.neg_unit[v]);
    drop_pos[v] = drop_neg[v] = k;
    pairs += k;
  }
  if (pairs == 0) return false;
  std::vector<std::vector<Literal>> out;
  for (const auto& c : s.formula().clauses()) {
    if (c.size() == 1) {
      auto& budget = (c[0].negated ? drop_neg : drop_pos)[c[0].var];
      if (budget > 0) {
        --budget;
        continue;
      }
    }
    out.emplace_back(c.literals().begin(), c.literals().end());
  }
  // each removed pair costs exactly one violation whatever the variable is
  s.replace_clauses(std::move(out), pairs);
  return true;
}

bool inference_fixpoint(SatState& s, int nc)
{
  bool any = false;
  bool changed = true;
  while (changed && s.size() > nc) {
    changed = false;
    changed |= pure_literal_rule(s);
    changed |= dominating_unit_clause_rule(s);
    changed |= almost_common_clause_rule(s);
    changed |= complementary_unit_clause_rule(s);
    any |= changed;
  }
  return any;
}

void sat_bookkeeping(SatState& s, int nc)
{
  inference_fixpoint(s, nc);
  if (s.size() <= nc) s.brute_force();
}

SatDecision reduce_maxsat(SatState& s, const Correlations& M, int nc, Rng& rng)
{
  if (s.size() == 0) throw std::invalid_argument("reduce_maxsat: formula has no variables left");
  const auto& vars = s.live_vars();
  if (M.size() != static_cast<int>(vars.size()))
    throw std::invalid_argument("reduce_maxsat: correlation matrix does not match the live variables");
  const auto ranked = ranked_entries(M, rng);
  const auto& e = ranked.front();
  SatDecision d;
  d.i = vars[e.i];
  d.two_point = !e.one_point();
  d.j = d.two_point ? vars[e.j] : -1;
  // a value of exactly zero rounds towards TRUE / the positive substitution
  d.positive = e.value >= 0.0;
  s.apply(d);
  sat_bookkeeping(s, nc);
  return d;
}

SatState reverse_reduce(const SatSnapshot& snap, int nc)
{
  SatState s = snap.node;
  s.apply(snap.decision.flipped());
  sat_bookkeeping(s, nc);
  return s;
}

} // namespace qiro
