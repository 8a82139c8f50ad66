#pragma once

#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "qiro/correlations.hpp"
#include "qiro/spin_hamiltonian.hpp"
#include "qiro/statevector.hpp"

namespace qiro {

struct QaoaParams
{
  std::vector<double> beta;
  std::vector<double> gamma;

  int depth() const { return static_cast<int>(beta.size()); }
  static QaoaParams p1(double beta, double gamma) { return {{beta}, {gamma}}; }
  void validate() const;
};

/// Uniform grid over the (beta, gamma) plane. Points sit at cell centres:
/// beta_a = lo + (a + 1/2) * (hi - lo) / size, likewise for gamma.
struct GridSpec
{
  int size = 30;
  double beta_lo = 0.0;
  double beta_hi = std::numbers::pi;
  double gamma_lo = 0.0;
  double gamma_hi = 2.0 * std::numbers::pi;

  double beta(int a) const { return beta_lo + (a + 0.5) * (beta_hi - beta_lo) / size; }
  double gamma(int b) const { return gamma_lo + (b + 0.5) * (gamma_hi - gamma_lo) / size; }
};

/// energies(a, b) is the depth-one energy at (beta_a, gamma_b). The flat
/// index of a point is a * size + b.
struct EnergyGrid
{
  GridSpec spec;
  Eigen::MatrixXd energies;

  int count() const { return static_cast<int>(energies.size()); }
  double at_flat(int k) const { return energies(k / spec.size, k % spec.size); }
  QaoaParams params_at_flat(int k) const { return QaoaParams::p1(spec.beta(k / spec.size), spec.gamma(k % spec.size)); }
};

struct GridOptimum
{
  EnergyGrid grid;
  QaoaParams best;
  double best_energy = 0.0;
};

/// Depth-one energy on every grid point; argmin with ties to the lowest
/// flat index.
GridOptimum grid_optimize_p1(const Hamiltonian& H, const GridSpec& spec = {});

/// Parameters at rank floor(q * (count - 1)) of the ascending energy order.
/// Equal energies resolve to the lowest flat index carrying that energy.
QaoaParams quantile_params(const EnergyGrid& grid, double q);

/// Expectation of H in the QAOA state; closed form at depth one, dense
/// state vector otherwise.
double qaoa_energy(const Hamiltonian& H, const QaoaParams& params, int max_qubits = kDefaultStatevectorCap);

/// One- and two-point correlations of the QAOA state at any depth.
Correlations qaoa_correlations(const Hamiltonian& H, const QaoaParams& params,
                               int max_qubits = kDefaultStatevectorCap);

/// Central differences perturb one angle at a time. The adjoint method
/// returns the exact gradient from one forward and one backward sweep; it
/// only changes depth > 1, where the state vector is used.
enum class GradientMethod : std::uint8_t
{
  central_difference,
  adjoint,
};

struct GradientDescentOptions
{
  int iterations = 300;
  int restarts = 15;
  double learning_rate = 0.05;
  double fd_step = 1e-4;
  /// Initial angles are drawn uniformly from the grid ranges.
  GridSpec init_ranges{};
  int max_qubits = kDefaultStatevectorCap;
  GradientMethod gradient = GradientMethod::central_difference;
};

/// Gradient of the QAOA energy, betas first, then gammas.
Eigen::VectorXd qaoa_gradient(const Hamiltonian& H, const QaoaParams& params, GradientMethod method,
                              double fd_step = 1e-4, int max_qubits = kDefaultStatevectorCap);

struct GradientDescentResult
{
  QaoaParams params;
  double energy = 0.0;
  /// Energies of the accepted iterates of the winning restart.
  std::vector<double> trace;
};

/// Gradient descent from `restarts` random starts.
/// Each step starts at the base learning rate and halves it until the energy
/// does not increase; a restart ends early when no decrease can be found.
GradientDescentResult optimize_qaoa_gd(const Hamiltonian& H, int p, std::uint64_t seed,
                                       const GradientDescentOptions& options = {});

/// Source of correlation matrices for the recursive solvers. Implementations
/// must be deterministic in (H, seed) and safe to call concurrently.
class CorrelationProvider
{
public:
  virtual ~CorrelationProvider() = default;
  virtual Correlations correlations(const Hamiltonian& H, std::uint64_t seed) const = 0;
};

/// Depth-one QAOA with parameters taken at quantile q of a grid search;
/// q = 0 selects the optimum.
class GridQaoaProvider final : public CorrelationProvider
{
public:
  explicit GridQaoaProvider(GridSpec spec = {}, double q = 0.0);
  Correlations correlations(const Hamiltonian& H, std::uint64_t seed) const override;

private:
  GridSpec spec_;
  double q_;
};

/// QAOA of depth p optimised by gradient descent on the exact energy.
class GradientQaoaProvider final : public CorrelationProvider
{
public:
  GradientQaoaProvider(int p, GradientDescentOptions options = {});
  Correlations correlations(const Hamiltonian& H, std::uint64_t seed) const override;

private:
  int p_;
  GradientDescentOptions options_;
};

class CallbackProvider final : public CorrelationProvider
{
public:
  using Fn = std::function<Correlations(const Hamiltonian&, std::uint64_t)>;
  explicit CallbackProvider(Fn fn) : fn_(std::move(fn)) {}
  Correlations correlations(const Hamiltonian& H, std::uint64_t seed) const override { return fn_(H, seed); }

private:
  Fn fn_;
};

} // namespace qiro
