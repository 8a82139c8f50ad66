#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "qiro/spin_hamiltonian.hpp"

namespace qiro {

/// One-point values <Z_i> on the diagonal and two-point values <Z_i Z_j> on
/// the coupling support of the Hamiltonian they were computed for.
template <class Scalar = double>
class CorrelationMatrix
{
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  CorrelationMatrix() = default;

  /// Entries are clamped into [-1, 1]; round-off can push exact
  /// expectation values a few ulp outside.
  CorrelationMatrix(Vector diag, std::vector<Coupling<Scalar>> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag))
  {
    const int n = size();
    for (auto& e : offdiag_) {
      if (e.i == e.j || e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
        throw std::out_of_range("CorrelationMatrix: invalid off-diagonal index");
      if (e.i > e.j) std::swap(e.i, e.j);
      e.value = clamp(e.value);
    }
    diag_ = diag_.unaryExpr([](Scalar v) { return clamp(v); });
    std::sort(offdiag_.begin(), offdiag_.end(),
              [](const auto& a, const auto& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
    for (std::size_t k = 1; k < offdiag_.size(); ++k)
      if (offdiag_[k].i == offdiag_[k - 1].i && offdiag_[k].j == offdiag_[k - 1].j)
        throw std::invalid_argument("CorrelationMatrix: duplicate off-diagonal entry");
  }

  int size() const { return static_cast<int>(diag_.size()); }
  const Vector& diag() const { return diag_; }
  Scalar diag(int i) const { return diag_[i]; }
  std::span<const Coupling<Scalar>> offdiag() const { return offdiag_; }

  bool contains(int i, int j) const { return find(i, j) != nullptr; }

  /// Off-diagonal entry; throws when (i, j) is outside the stored support.
  Scalar at(int i, int j) const
  {
    if (i == j) return diag_[i];
    const auto* e = find(i, j);
    if (!e) throw std::out_of_range("CorrelationMatrix: no entry for (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return e->value;
  }

  Scalar max_abs() const
  {
    Scalar m = diag_.size() ? diag_.cwiseAbs().maxCoeff() : Scalar(0);
    for (const auto& e : offdiag_) m = std::max(m, std::abs(e.value));
    return m;
  }

private:
  static Scalar clamp(Scalar v) { return std::clamp(v, Scalar(-1), Scalar(1)); }

  const Coupling<Scalar>* find(int i, int j) const
  {
    if (i > j) std::swap(i, j);
    auto it = std::lower_bound(offdiag_.begin(), offdiag_.end(), std::pair(i, j),
                               [](const auto& e, const auto& key) { return std::pair(e.i, e.j) < key; });
    return (it != offdiag_.end() && it->i == i && it->j == j) ? &*it : nullptr;
  }

  Vector diag_;
  std::vector<Coupling<Scalar>> offdiag_;
};

using Correlations = CorrelationMatrix<double>;

/// sum_i h_i M_ii + sum_{i<j} J_ij M_ij + c
template <class Scalar>
Scalar energy_from_correlations(const SpinHamiltonian<Scalar>& H, const CorrelationMatrix<Scalar>& M)
{
  if (M.size() != H.size()) throw std::invalid_argument("energy_from_correlations: size mismatch");
  Scalar e = H.offset() + H.fields().dot(M.diag());
  for (const auto& c : H.couplings()) e += c.value * M.at(c.i, c.j);
  return e;
}

// ---------------------------------------------------------------------------
// Depth-one QAOA in closed form.
//
// For |psi> = exp(-i beta H_mix) exp(-i gamma H_c) |+>^n with H_mix = -sum X,
// conjugating by the mixer maps Z_i to cos(2b) Z_i - sin(2b) Y_i, and the
// phase layer leaves only products of cosines of the couplings touching i
// and j. All four building blocks below are expectation values in the
// phase-evolved state, before the mixer is applied.
// ---------------------------------------------------------------------------

namespace detail {

template <class Scalar>
Scalar cos_product(std::span<const Neighbor<Scalar>> row, Scalar two_gamma, int skip)
{
  Scalar p(1);
  for (const auto& nb : row)
    if (nb.k != skip) p *= std::cos(two_gamma * nb.value);
  return p;
}

/// <Y_i> after the phase layer.
template <class Scalar>
Scalar phased_y(const SpinHamiltonian<Scalar>& H, int i, Scalar two_gamma)
{
  return std::sin(two_gamma * H.field(i)) * cos_product(H.neighbors(i), two_gamma, -1);
}

/// <Z_i Y_j> after the phase layer.
template <class Scalar>
Scalar phased_zy(const SpinHamiltonian<Scalar>& H, int i, int j, Scalar Jij, Scalar two_gamma)
{
  return std::cos(two_gamma * H.field(j)) * std::sin(two_gamma * Jij) * cos_product(H.neighbors(j), two_gamma, i);
}

/// <Y_i Y_j> after the phase layer: merges the two sorted neighbour rows so
/// the cost is O(deg_i + deg_j).
template <class Scalar>
Scalar phased_yy(const SpinHamiltonian<Scalar>& H, int i, int j, Scalar two_gamma)
{
  const auto a = H.neighbors(i);
  const auto b = H.neighbors(j);
  Scalar minus(1);
  Scalar plus(1);
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < a.size() || q < b.size()) {
    int k;
    Scalar ja(0);
    Scalar jb(0);
    if (q == b.size() || (p < a.size() && a[p].k < b[q].k)) {
      k = a[p].k;
      ja = a[p++].value;
    } else if (p == a.size() || b[q].k < a[p].k) {
      k = b[q].k;
      jb = b[q++].value;
    } else {
      k = a[p].k;
      ja = a[p++].value;
      jb = b[q++].value;
    }
    if (k == i || k == j) continue;
    minus *= std::cos(two_gamma * (ja - jb));
    plus *= std::cos(two_gamma * (ja + jb));
  }
  const Scalar hi = H.field(i);
  const Scalar hj = H.field(j);
  return Scalar(0.5) * (std::cos(two_gamma * (hi - hj)) * minus - std::cos(two_gamma * (hi + hj)) * plus);
}

} // namespace detail

/// Exact <Z_i> for every variable and <Z_i Z_j> on every coupling of H for
/// depth-one QAOA at angles (beta, gamma). O(deg) per one-point value and
/// O(deg_i + deg_j) per two-point value.
template <class Scalar>
CorrelationMatrix<Scalar> p1_correlations(const SpinHamiltonian<Scalar>& H, Scalar beta, Scalar gamma)
{
  using std::cos;
  using std::sin;
  const int n = H.size();
  const Scalar two_gamma = 2 * gamma;
  const Scalar s2b = sin(2 * beta);
  const Scalar c2b = cos(2 * beta);

  typename CorrelationMatrix<Scalar>::Vector diag(n);
  for (int i = 0; i < n; ++i) diag[i] = -s2b * detail::phased_y(H, i, two_gamma);

  std::vector<Coupling<Scalar>> off;
  off.reserve(H.couplings().size());
  for (const auto& c : H.couplings()) {
    const Scalar zy = detail::phased_zy(H, c.i, c.j, c.value, two_gamma);
    const Scalar yz = detail::phased_zy(H, c.j, c.i, c.value, two_gamma);
    const Scalar yy = detail::phased_yy(H, c.i, c.j, two_gamma);
    off.push_back({c.i, c.j, -s2b * c2b * (zy + yz) + s2b * s2b * yy});
  }
  return CorrelationMatrix<Scalar>(std::move(diag), std::move(off));
}

/// gamma-dependent sums from which the depth-one energy at any beta follows:
///   E(beta, gamma) = c - sin2b * field + sin2b cos2b * cross + sin^2 2b * yy
template <class Scalar>
struct P1EnergyTerms
{
  Scalar offset{};
  Scalar field{};
  Scalar cross{};
  Scalar yy{};

  Scalar energy(Scalar beta) const
  {
    const Scalar s = std::sin(2 * beta);
    const Scalar c = std::cos(2 * beta);
    return offset - s * field + s * c * cross + s * s * yy;
  }
};

template <class Scalar>
P1EnergyTerms<Scalar> p1_energy_terms(const SpinHamiltonian<Scalar>& H, Scalar gamma)
{
  const Scalar two_gamma = 2 * gamma;
  P1EnergyTerms<Scalar> t;
  t.offset = H.offset();
  for (int i = 0; i < H.size(); ++i) t.field += H.field(i) * detail::phased_y(H, i, two_gamma);
  for (const auto& c : H.couplings()) {
    const Scalar zy = detail::phased_zy(H, c.i, c.j, c.value, two_gamma);
    const Scalar yz = detail::phased_zy(H, c.j, c.i, c.value, two_gamma);
    t.cross -= c.value * (zy + yz);
    t.yy += c.value * detail::phased_yy(H, c.i, c.j, two_gamma);
  }
  return t;
}

template <class Scalar>
Scalar p1_energy(const SpinHamiltonian<Scalar>& H, Scalar beta, Scalar gamma)
{
  return p1_energy_terms(H, gamma).energy(beta);
}

} // namespace qiro
