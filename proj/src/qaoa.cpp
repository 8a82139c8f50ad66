#include "qiro/qaoa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>

#include "qiro/random.hpp"

namespace qiro {

void QaoaParams::validate() const
{
  if (beta.empty() || beta.size() != gamma.size())
    throw std::invalid_argument("QaoaParams: need p >= 1 betas and gammas of equal length");
}

GridOptimum grid_optimize_p1(const Hamiltonian& H, const GridSpec& spec)
{
  if (spec.size < 2) throw std::invalid_argument("grid_optimize_p1: grid size must be at least 2");
  GridOptimum out;
  out.grid.spec = spec;
  out.grid.energies.resize(spec.size, spec.size);
  // the energy separates into gamma-only sums, so one pass per gamma column
  for (int b = 0; b < spec.size; ++b) {
    const auto terms = p1_energy_terms(H, spec.gamma(b));
    for (int a = 0; a < spec.size; ++a) out.grid.energies(a, b) = terms.energy(spec.beta(a));
  }
  int best = 0;
  for (int k = 1; k < out.grid.count(); ++k)
    if (out.grid.at_flat(k) < out.grid.at_flat(best)) best = k;
  out.best = out.grid.params_at_flat(best);
  out.best_energy = out.grid.at_flat(best);
  return out;
}

QaoaParams quantile_params(const EnergyGrid& grid, double q)
{
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile_params: q must lie in [0, 1]");
  const int count = grid.count();
  if (count == 0) throw std::invalid_argument("quantile_params: empty grid");
  std::vector<int> order(static_cast<std::size_t>(count));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return grid.at_flat(a) < grid.at_flat(b); });
  const auto rank = static_cast<std::size_t>(std::floor(q * (count - 1)));
  const double target = grid.at_flat(order[rank]);
  for (int k = 0; k < count; ++k)
    if (grid.at_flat(k) == target) return grid.params_at_flat(k);
  return grid.params_at_flat(order[rank]);
}

double qaoa_energy(const Hamiltonian& H, const QaoaParams& params, int max_qubits)
{
  params.validate();
  if (params.depth() == 1) return p1_energy(H, params.beta[0], params.gamma[0]);
  QaoaStatevector<double> sv(H, max_qubits);
  return sv.energy(params.beta, params.gamma);
}

Correlations qaoa_correlations(const Hamiltonian& H, const QaoaParams& params, int max_qubits)
{
  params.validate();
  if (params.depth() == 1) return p1_correlations(H, params.beta[0], params.gamma[0]);
  QaoaStatevector<double> sv(H, max_qubits);
  return sv.correlations(sv.prepare(params.beta, params.gamma));
}

namespace {

/// Energy as a function of the packed angle vector (beta_1..p, gamma_1..p).
/// In adjoint mode every state-vector evaluation keeps its intermediate
/// states, so the gradient at the last evaluated point needs only the
/// backward sweep.
class PackedEnergy
{
public:
  PackedEnergy(const Hamiltonian& H, int p, int max_qubits, GradientMethod method)
    : H_(H), p_(p), method_(method)
  {
    if (p > 1) sv_.emplace(H, max_qubits);
  }

  double operator()(const Eigen::VectorXd& theta) const
  {
    if (p_ == 1) return p1_energy(H_, theta[0], theta[1]);
    if (method_ == GradientMethod::adjoint) return record(theta);
    const std::span<const double> all(theta.data(), static_cast<std::size_t>(theta.size()));
    return sv_->energy(all.subspan(0, static_cast<std::size_t>(p_)), all.subspan(static_cast<std::size_t>(p_)));
  }

  /// Central differences. At depth > 1 each perturbed evaluation restarts
  /// from the cached state before the perturbed layer; the arithmetic is the
  /// same as a full evaluation, so results are bitwise unchanged.
  /// Exact gradient: the cost-weighted state is carried back through the
  /// layers, and each angle's derivative is an overlap with its generator
  /// at the point where that angle acts.
  void adjoint_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const
  {
    if (tape_theta_.size() != theta.size() || tape_theta_ != theta) record(theta);
    auto lam = sv_->apply_cost(after_mixer_[p_ - 1]);
    for (int k = p_ - 1; k >= 0; --k) {
      // the mixer is exp(+i beta sum_i X_i)
      grad[k] = -2 * sv_->mixer_overlap_imag(lam, after_mixer_[k]);
      sv_->apply_mixer(lam, -theta[k]);
      grad[p_ + k] = 2 * sv_->cost_overlap_imag(lam, after_phase_[k]);
      if (k > 0) sv_->apply_phase(lam, -theta[p_ + k]);
    }
  }

  void gradient(const Eigen::VectorXd& theta, double h, GradientMethod method, Eigen::VectorXd& grad) const
  {
    if (p_ > 1 && method == GradientMethod::adjoint && method_ == method) {
      adjoint_gradient(theta, grad);
      return;
    }
    if (p_ == 1) {
      for (int k = 0; k < 2; ++k) {
        Eigen::VectorXd up = theta;
        Eigen::VectorXd dn = theta;
        up[k] += h;
        dn[k] -= h;
        grad[k] = ((*this)(up) - (*this)(dn)) / (2 * h);
      }
      return;
    }
    using State = QaoaStatevector<double>::Amplitudes;
    std::vector<State> before(static_cast<std::size_t>(p_));
    State psi = sv_->uniform_state();
    for (int k = 0; k < p_; ++k) {
      before[k] = psi;
      sv_->apply_phase(psi, theta[p_ + k]);
      sv_->apply_mixer(psi, theta[k]);
    }
    const auto finish = [&](State s, int from) {
      for (int k = from; k < p_; ++k) {
        sv_->apply_phase(s, theta[p_ + k]);
        sv_->apply_mixer(s, theta[k]);
      }
      return sv_->expectation(s);
    };
    for (int k = 0; k < p_; ++k) {
      State phased = before[k];
      sv_->apply_phase(phased, theta[p_ + k]);
      State b_up = phased;
      State b_dn = std::move(phased);
      sv_->apply_mixer(b_up, theta[k] + h);
      sv_->apply_mixer(b_dn, theta[k] - h);
      grad[k] = (finish(std::move(b_up), k + 1) - finish(std::move(b_dn), k + 1)) / (2 * h);

      State g_up = before[k];
      State g_dn = before[k];
      sv_->apply_phase(g_up, theta[p_ + k] + h);
      sv_->apply_phase(g_dn, theta[p_ + k] - h);
      sv_->apply_mixer(g_up, theta[k]);
      sv_->apply_mixer(g_dn, theta[k]);
      grad[p_ + k] = (finish(std::move(g_up), k + 1) - finish(std::move(g_dn), k + 1)) / (2 * h);
    }
  }

private:
  using Amplitudes = QaoaStatevector<double>::Amplitudes;

  double record(const Eigen::VectorXd& theta) const
  {
    after_phase_.resize(static_cast<std::size_t>(p_));
    after_mixer_.resize(static_cast<std::size_t>(p_));
    Amplitudes psi = sv_->uniform_state();
    for (int k = 0; k < p_; ++k) {
      sv_->apply_phase(psi, theta[p_ + k]);
      after_phase_[k] = psi;
      sv_->apply_mixer(psi, theta[k]);
      after_mixer_[k] = psi;
    }
    tape_theta_ = theta;
    return sv_->expectation(psi);
  }

  const Hamiltonian& H_;
  int p_;
  GradientMethod method_;
  std::optional<QaoaStatevector<double>> sv_;
  mutable Eigen::VectorXd tape_theta_;
  mutable std::vector<Amplitudes> after_phase_;
  mutable std::vector<Amplitudes> after_mixer_;
};

QaoaParams unpack(const Eigen::VectorXd& theta, int p)
{
  QaoaParams out;
  out.beta.assign(theta.data(), theta.data() + p);
  out.gamma.assign(theta.data() + p, theta.data() + 2 * p);
  return out;
}

} // namespace

Eigen::VectorXd qaoa_gradient(const Hamiltonian& H, const QaoaParams& params, GradientMethod method, double fd_step,
                              int max_qubits)
{
  params.validate();
  const int p = params.depth();
  const PackedEnergy f(H, p, max_qubits, method);
  Eigen::VectorXd theta(2 * p);
  for (int k = 0; k < p; ++k) {
    theta[k] = params.beta[k];
    theta[p + k] = params.gamma[k];
  }
  Eigen::VectorXd grad(2 * p);
  f.gradient(theta, fd_step, method, grad);
  return grad;
}

GradientDescentResult optimize_qaoa_gd(const Hamiltonian& H, int p, std::uint64_t seed,
                                       const GradientDescentOptions& options)
{
  if (p < 1) throw std::invalid_argument("optimize_qaoa_gd: depth must be at least 1");
  if (options.restarts < 1) throw std::invalid_argument("optimize_qaoa_gd: need at least one restart");
  if (p > 1 && H.size() > options.max_qubits)
    throw std::length_error("optimize_qaoa_gd: " + std::to_string(H.size()) + " variables exceed state-vector cap");
  const PackedEnergy f(H, p, options.max_qubits, options.gradient);
  const auto& r = options.init_ranges;
  Rng rng(seed);

  GradientDescentResult best;
  bool have_best = false;
  Eigen::VectorXd grad(2 * p);
  for (int restart = 0; restart < options.restarts; ++restart) {
    Eigen::VectorXd theta(2 * p);
    for (int k = 0; k < p; ++k) theta[k] = uniform_real(rng, r.beta_lo, r.beta_hi);
    for (int k = 0; k < p; ++k) theta[p + k] = uniform_real(rng, r.gamma_lo, r.gamma_hi);
    double energy = f(theta);
    std::vector<double> trace{energy};

    for (int it = 0; it < options.iterations; ++it) {
      f.gradient(theta, options.fd_step, options.gradient, grad);
      if (!(grad.norm() > 1e-12)) break;
      double lr = options.learning_rate;
      bool moved = false;
      for (int halving = 0; halving < 40; ++halving, lr *= 0.5) {
        const Eigen::VectorXd cand = theta - lr * grad;
        const double e = f(cand);
        if (e <= energy) {
          moved = e < energy;
          theta = cand;
          energy = e;
          break;
        }
      }
      if (!moved) break;
      trace.push_back(energy);
    }
    if (!have_best || energy < best.energy) {
      best.params = unpack(theta, p);
      best.energy = energy;
      best.trace = std::move(trace);
      have_best = true;
    }
  }
  return best;
}

GridQaoaProvider::GridQaoaProvider(GridSpec spec, double q)
  : spec_(spec), q_(q)
{
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("GridQaoaProvider: q must lie in [0, 1]");
  if (spec.size < 2) throw std::invalid_argument("GridQaoaProvider: grid size must be at least 2");
}

Correlations GridQaoaProvider::correlations(const Hamiltonian& H, std::uint64_t) const
{
  const auto opt = grid_optimize_p1(H, spec_);
  const auto params = q_ == 0.0 ? opt.best : quantile_params(opt.grid, q_);
  return p1_correlations(H, params.beta[0], params.gamma[0]);
}

GradientQaoaProvider::GradientQaoaProvider(int p, GradientDescentOptions options)
  : p_(p), options_(options)
{
  if (p < 1) throw std::invalid_argument("GradientQaoaProvider: depth must be at least 1");
}

Correlations GradientQaoaProvider::correlations(const Hamiltonian& H, std::uint64_t seed) const
{
  const auto opt = optimize_qaoa_gd(H, p_, seed, options_);
  return qaoa_correlations(H, opt.params, options_.max_qubits);
}

} // namespace qiro
