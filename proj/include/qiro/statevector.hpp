#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qiro/correlations.hpp"
#include "qiro/spin_hamiltonian.hpp"

namespace qiro {

inline constexpr int kDefaultStatevectorCap = 20;

/// Dense 2^n-amplitude simulation of QAOA at any depth. Basis index bit i
/// set means qubit i is |1>, i.e. z_i = -1.
template <class Scalar = double>
class QaoaStatevector
{
public:
  using Complex = std::complex<Scalar>;
  using State = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit QaoaStatevector(const SpinHamiltonian<Scalar>& H, int max_qubits = kDefaultStatevectorCap)
    : H_(H), n_(H.size())
  {
    if (n_ > max_qubits)
      throw std::length_error("statevector: " + std::to_string(n_) + " qubits exceeds cap of " +
                              std::to_string(max_qubits));
    const std::size_t dim = std::size_t{1} << n_;
    energies_.resize(static_cast<Eigen::Index>(dim));
    std::vector<int> z(static_cast<std::size_t>(n_));
    for (std::size_t x = 0; x < dim; ++x) {
      for (int i = 0; i < n_; ++i) z[i] = ((x >> i) & 1U) ? -1 : 1;
      energies_[static_cast<Eigen::Index>(x)] = H.energy(z);
    }
    // Few distinct energy levels in practice, so phases are computed per
    // level rather than per amplitude.
    std::vector<std::uint32_t> order(dim);
    std::iota(order.begin(), order.end(), 0U);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return energies_[a] < energies_[b]; });
    level_of_.resize(dim);
    for (std::size_t r = 0; r < dim; ++r) {
      const Scalar e = energies_[order[r]];
      if (levels_.empty() || levels_.back() != e) levels_.push_back(e);
      level_of_[order[r]] = static_cast<std::uint32_t>(levels_.size() - 1);
    }
  }

  int qubits() const { return n_; }
  const RealVector& diagonal_energies() const { return energies_; }

  /// Amplitudes with real and imaginary parts stored apart, so the layer
  /// kernels are plain vectorizable real loops.
  struct Amplitudes
  {
    RealVector re;
    RealVector im;
  };

  /// |+>^n
  Amplitudes uniform_state() const
  {
    const auto dim = energies_.size();
    return {RealVector::Constant(dim, Scalar(1) / std::sqrt(Scalar(dim))), RealVector::Zero(dim)};
  }

  /// Alternating exp(-i gamma_k H_c) and exp(-i beta_k H_mix) layers on |+>^n.
  Amplitudes evolve(std::span<const Scalar> betas, std::span<const Scalar> gammas) const
  {
    if (betas.size() != gammas.size() || betas.empty())
      throw std::invalid_argument("statevector: need matching, nonempty beta/gamma vectors");
    Amplitudes psi = uniform_state();
    for (std::size_t layer = 0; layer < betas.size(); ++layer) {
      apply_phase(psi, gammas[layer]);
      apply_mixer(psi, betas[layer]);
    }
    return psi;
  }

  State prepare(std::span<const Scalar> betas, std::span<const Scalar> gammas) const
  {
    const Amplitudes a = evolve(betas, gammas);
    State psi(a.re.size());
    psi.real() = a.re;
    psi.imag() = a.im;
    return psi;
  }

  /// exp(-i gamma H_c), diagonal in the computational basis.
  void apply_phase(Amplitudes& psi, Scalar gamma) const
  {
    std::vector<Scalar> cs(levels_.size());
    std::vector<Scalar> sn(levels_.size());
    for (std::size_t l = 0; l < levels_.size(); ++l) {
      cs[l] = std::cos(gamma * levels_[l]);
      sn[l] = -std::sin(gamma * levels_[l]);
    }
    Scalar* re = psi.re.data();
    Scalar* im = psi.im.data();
    const auto dim = static_cast<std::size_t>(psi.re.size());
    for (std::size_t x = 0; x < dim; ++x) {
      const std::uint32_t l = level_of_[x];
      const Scalar r = re[x];
      const Scalar i = im[x];
      re[x] = cs[l] * r - sn[l] * i;
      im[x] = cs[l] * i + sn[l] * r;
    }
  }

  /// exp(-i beta H_mix) = prod_i (cos beta + i sin beta X_i)
  void apply_mixer(Amplitudes& psi, Scalar beta) const
  {
    const Scalar c = std::cos(beta);
    const Scalar sn = std::sin(beta);
    Scalar* re = psi.re.data();
    Scalar* im = psi.im.data();
    const auto dim = static_cast<std::size_t>(psi.re.size());
    // qubit 0 pairs neighbours; a dedicated loop avoids one-element blocks
    for (std::size_t x = 0; x + 1 < dim; x += 2) {
      const Scalar ar = re[x], ai = im[x];
      const Scalar br = re[x + 1], bi = im[x + 1];
      re[x] = c * ar - sn * bi;
      im[x] = c * ai + sn * br;
      re[x + 1] = c * br - sn * ai;
      im[x + 1] = c * bi + sn * ar;
    }
    for (int q = 1; q < n_; ++q) {
      const std::size_t bit = std::size_t{1} << q;
      for (std::size_t base = 0; base < dim; base += 2 * bit) {
        Scalar* __restrict lr = re + base;
        Scalar* __restrict li = im + base;
        Scalar* __restrict hr = re + base + bit;
        Scalar* __restrict hi = im + base + bit;
        for (std::size_t k = 0; k < bit; ++k) {
          const Scalar ar = lr[k], ai = li[k];
          const Scalar br = hr[k], bi = hi[k];
          lr[k] = c * ar - sn * bi;
          li[k] = c * ai + sn * br;
          hr[k] = c * br - sn * ai;
          hi[k] = c * bi + sn * ar;
        }
      }
    }
  }

  /// C|psi> with C the diagonal cost Hamiltonian.
  Amplitudes apply_cost(const Amplitudes& psi) const
  {
    return {psi.re.cwiseProduct(energies_), psi.im.cwiseProduct(energies_)};
  }

  /// Im <lam| C |psi>
  Scalar cost_overlap_imag(const Amplitudes& lam, const Amplitudes& psi) const
  {
    return (lam.re.cwiseProduct(psi.im) - lam.im.cwiseProduct(psi.re)).dot(energies_);
  }

  /// Im <lam| sum_i X_i |psi>
  Scalar mixer_overlap_imag(const Amplitudes& lam, const Amplitudes& psi) const
  {
    // builds sum_i X_i |psi> with vectorizable block adds, then one overlap
    Amplitudes flipped{RealVector::Zero(psi.re.size()), RealVector::Zero(psi.im.size())};
    const auto dim = static_cast<std::size_t>(psi.re.size());
    for (int part = 0; part < 2; ++part) {
      const Scalar* src = part == 0 ? psi.re.data() : psi.im.data();
      Scalar* dst = part == 0 ? flipped.re.data() : flipped.im.data();
      for (std::size_t x = 0; x + 1 < dim; x += 2) {
        dst[x] += src[x + 1];
        dst[x + 1] += src[x];
      }
      for (int q = 1; q < n_; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t base = 0; base < dim; base += 2 * bit) {
          const Scalar* __restrict sl = src + base;
          const Scalar* __restrict sh = src + base + bit;
          Scalar* __restrict dl = dst + base;
          Scalar* __restrict dh = dst + base + bit;
          for (std::size_t k = 0; k < bit; ++k) {
            dl[k] += sh[k];
            dh[k] += sl[k];
          }
        }
      }
    }
    return lam.re.dot(flipped.im) - lam.im.dot(flipped.re);
  }

  Scalar expectation(const Amplitudes& psi) const
  {
    return (psi.re.cwiseAbs2() + psi.im.cwiseAbs2()).dot(energies_);
  }
  Scalar expectation(const State& psi) const { return psi.cwiseAbs2().dot(energies_); }

  Scalar energy(std::span<const Scalar> betas, std::span<const Scalar> gammas) const
  {
    return expectation(evolve(betas, gammas));
  }

  /// <Z_i> for all i and <Z_i Z_j> on the coupling support of H.
  CorrelationMatrix<Scalar> correlations(const State& psi) const
  {
    const RealVector prob = psi.cwiseAbs2();
    typename CorrelationMatrix<Scalar>::Vector diag = CorrelationMatrix<Scalar>::Vector::Zero(n_);
    std::vector<Coupling<Scalar>> off;
    const auto couplings = H_.couplings();
    std::vector<Scalar> zz(couplings.size(), Scalar(0));
    for (Eigen::Index x = 0; x < prob.size(); ++x) {
      const Scalar p = prob[x];
      const auto ux = static_cast<std::uint64_t>(x);
      for (int i = 0; i < n_; ++i) diag[i] += ((ux >> i) & 1U) ? -p : p;
      for (std::size_t k = 0; k < couplings.size(); ++k) {
        const bool odd = (((ux >> couplings[k].i) ^ (ux >> couplings[k].j)) & 1U) != 0;
        zz[k] += odd ? -p : p;
      }
    }
    off.reserve(couplings.size());
    for (std::size_t k = 0; k < couplings.size(); ++k) off.push_back({couplings[k].i, couplings[k].j, zz[k]});
    return CorrelationMatrix<Scalar>(std::move(diag), std::move(off));
  }

private:
  SpinHamiltonian<Scalar> H_;
  int n_;
  RealVector energies_;
  std::vector<Scalar> levels_;
  std::vector<std::uint32_t> level_of_;
};

} // namespace qiro
