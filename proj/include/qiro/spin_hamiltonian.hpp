#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace qiro {

using Spins = Eigen::VectorXi;

template <class Scalar = double>
struct Coupling
{
  int i = 0;
  int j = 0;
  Scalar value{};
};

template <class Scalar = double>
struct Neighbor
{
  int k = 0;
  Scalar value{};
};

/// Quadratic Ising cost  sum_i h_i z_i + sum_{i<j} J_ij z_i z_j + c  over
/// spins z_i = +-1. Couplings are stored once per unordered pair with i < j;
/// duplicate pairs aggregate on construction and exact zeros are dropped, so
/// the stored support is exactly the set of nonzero couplings.
template <class Scalar = double>
class SpinHamiltonian
{
public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  SpinHamiltonian() = default;

  explicit SpinHamiltonian(int n, Scalar offset = Scalar(0))
    : fields_(Vector::Zero(n)), adjacency_(static_cast<std::size_t>(n)), offset_(offset)
  {
  }

  SpinHamiltonian(Vector fields, std::vector<Coupling<Scalar>> couplings, Scalar offset = Scalar(0))
    : fields_(std::move(fields)), offset_(offset)
  {
    const int n = static_cast<int>(fields_.size());
    for (auto& c : couplings) {
      if (c.i == c.j) throw std::invalid_argument("SpinHamiltonian: diagonal coupling on " + std::to_string(c.i));
      if (c.i < 0 || c.j < 0 || c.i >= n || c.j >= n)
        throw std::out_of_range("SpinHamiltonian: coupling index out of range");
      if (c.i > c.j) std::swap(c.i, c.j);
    }
    std::sort(couplings.begin(), couplings.end(),
              [](const auto& a, const auto& b) { return std::pair(a.i, a.j) < std::pair(b.i, b.j); });
    for (const auto& c : couplings) {
      if (!couplings_.empty() && couplings_.back().i == c.i && couplings_.back().j == c.j)
        couplings_.back().value += c.value;
      else
        couplings_.push_back(c);
    }
    std::erase_if(couplings_, [](const auto& c) { return c.value == Scalar(0); });

    adjacency_.assign(static_cast<std::size_t>(n), {});
    for (const auto& c : couplings_) {
      adjacency_[c.i].push_back({c.j, c.value});
      adjacency_[c.j].push_back({c.i, c.value});
    }
    for (auto& row : adjacency_)
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
  }

  int size() const { return static_cast<int>(fields_.size()); }
  const Vector& fields() const { return fields_; }
  Scalar field(int i) const { return fields_[i]; }
  Scalar offset() const { return offset_; }
  std::span<const Coupling<Scalar>> couplings() const { return couplings_; }
  std::span<const Neighbor<Scalar>> neighbors(int i) const { return adjacency_[static_cast<std::size_t>(i)]; }

  /// J_ij, zero when the pair carries no coupling.
  Scalar coupling(int i, int j) const
  {
    const auto row = neighbors(i);
    auto it = std::lower_bound(row.begin(), row.end(), j, [](const auto& nb, int k) { return nb.k < k; });
    return (it != row.end() && it->k == j) ? it->value : Scalar(0);
  }

  /// Local field h_i + sum_k J_ik z_k seen by spin i.
  template <class SpinVector>
  Scalar local_field(int i, const SpinVector& z) const
  {
    Scalar f = fields_[i];
    for (const auto& nb : neighbors(i)) f += nb.value * Scalar(z[nb.k]);
    return f;
  }

  template <class SpinVector>
  Scalar energy(const SpinVector& z) const
  {
    if (static_cast<int>(z.size()) != size())
      throw std::invalid_argument("energy: spin vector has length " + std::to_string(z.size()) + ", expected " +
                                  std::to_string(size()));
    Scalar e = offset_;
    for (int i = 0; i < size(); ++i) e += fields_[i] * Scalar(z[i]);
    for (const auto& c : couplings_) e += c.value * Scalar(z[c.i]) * Scalar(z[c.j]);
    return e;
  }

private:
  Vector fields_;
  std::vector<Coupling<Scalar>> couplings_;
  std::vector<std::vector<Neighbor<Scalar>>> adjacency_;
  Scalar offset_ = Scalar(0);
};

using Hamiltonian = SpinHamiltonian<double>;

template <class Scalar, class SpinVector>
Scalar eval_ising(const SpinHamiltonian<Scalar>& H, const SpinVector& z)
{
  return H.energy(z);
}

} // namespace qiro
