#include "qiro/rqaoa.hpp"

#include <stdexcept>
#include <string>

#include "qiro/baselines.hpp"
#include "qiro/selection.hpp"

namespace qiro {

Hamiltonian eliminate_variable(const Hamiltonian& H, const EliminationRecord& rec)
{
  const int n = H.size();
  const int i = rec.i;
  const bool two = rec.kind == EliminationRecord::Kind::two_point;
  if (i < 0 || i >= n) throw std::out_of_range("eliminate_variable: index " + std::to_string(i) + " is not live");
  if (two && (rec.j < 0 || rec.j >= n || rec.j == i))
    throw std::out_of_range("eliminate_variable: invalid partner index");
  if (rec.sign != 1 && rec.sign != -1) throw std::invalid_argument("eliminate_variable: sign must be +1 or -1");

  const double s = rec.sign;
  const auto shifted = [i](int k) { return k > i ? k - 1 : k; };
  Hamiltonian::Vector h(n - 1);
  for (int k = 0; k < n; ++k)
    if (k != i) h[shifted(k)] = H.field(k);
  double c = H.offset();
  std::vector<Coupling<double>> J;
  J.reserve(H.couplings().size());
  for (const auto& e : H.couplings())
    if (e.i != i && e.j != i) J.push_back({shifted(e.i), shifted(e.j), e.value});

  if (two) {
    const int j = shifted(rec.j);
    h[j] += s * H.field(i);
    for (const auto& nb : H.neighbors(i)) {
      if (nb.k == rec.j)
        c += s * nb.value;
      else
        J.push_back({j, shifted(nb.k), s * nb.value}); // aggregated by the constructor
    }
  } else {
    c += s * H.field(i);
    for (const auto& nb : H.neighbors(i)) h[shifted(nb.k)] += s * nb.value;
  }
  // couplings that cancel to exactly zero leave the support
  return Hamiltonian(std::move(h), std::move(J), c);
}

void replay_eliminations(std::span<const EliminationRecord> records, Spins& z)
{
  for (auto it = records.rbegin(); it != records.rend(); ++it)
    z[it->i] = it->kind == EliminationRecord::Kind::two_point ? it->sign * z[it->j] : it->sign;
}

RqaoaResult rqaoa(const Hamiltonian& H, int nc, const CorrelationProvider& provider, std::uint64_t seed)
{
  if (nc < 0) throw std::invalid_argument("rqaoa: threshold nc must be non-negative");
  RqaoaResult out;
  Rng rng(derive_seed({seed, 0x7a0aULL}));
  Hamiltonian cur = H;
  std::vector<int> labels(static_cast<std::size_t>(H.size()));
  for (int k = 0; k < H.size(); ++k) labels[k] = k;

  while (cur.size() > nc && cur.size() > 0) {
    const auto M =
      provider.correlations(cur, derive_seed({seed, 0xca11ULL, static_cast<std::uint64_t>(out.provider_calls)}));
    ++out.provider_calls;
    const auto top = ranked_entries(M, rng).front();
    EliminationRecord rec;
    rec.sign = top.value >= 0.0 ? 1 : -1;
    rec.i = top.i;
    if (!top.one_point()) {
      rec.kind = EliminationRecord::Kind::two_point;
      rec.j = top.j;
    }
    cur = eliminate_variable(cur, rec);
    EliminationRecord global = rec;
    global.i = labels[rec.i];
    if (global.kind == EliminationRecord::Kind::two_point) global.j = labels[rec.j];
    out.records.push_back(global);
    labels.erase(labels.begin() + rec.i);
  }

  const auto tail = brute_force_ising(cur);
  out.config = Spins::Zero(H.size());
  for (std::size_t k = 0; k < labels.size(); ++k) out.config[labels[k]] = tail.config[static_cast<Eigen::Index>(k)];
  replay_eliminations(out.records, out.config);
  out.energy = H.energy(out.config);
  return out;
}

MisDecoding decode_mis(const Graph& g, const Spins& z)
{
  MisDecoding d;
  d.set = set_from_spins(z);
  d.valid = is_independent(g, d.set);
  return d;
}

} // namespace qiro
