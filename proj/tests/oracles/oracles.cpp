#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace oracle {

double mis_objective(const Graph& g, std::uint64_t x, double lambda)
{
  double e = -static_cast<double>(std::popcount(x));
  for (const auto& edge : g.edges())
    if (((x >> edge.u) & 1U) && ((x >> edge.v) & 1U)) e += lambda;
  return e;
}

int violated(const CnfFormula& phi, std::uint64_t x)
{
  int count = phi.violation_offset();
  for (const auto& c : phi.clauses()) {
    bool sat = false;
    for (const auto& l : c.literals()) {
      const bool value = ((x >> l.var) & 1U) != 0;
      if (value != l.negated) sat = true;
    }
    count += !sat;
  }
  return count;
}

double ising(const Hamiltonian& H, std::uint64_t x)
{
  auto z = [x](int i) { return ((x >> i) & 1U) ? 1.0 : -1.0; };
  double e = H.offset();
  for (int i = 0; i < H.size(); ++i) e += H.field(i) * z(i);
  for (const auto& c : H.couplings()) e += c.value * z(c.i) * z(c.j);
  return e;
}

namespace {

using Dense = Eigen::MatrixXcd;

Dense kron(const Dense& a, const Dense& b)
{
  Dense out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Operator acting as `op` on qubit q (qubit 0 is the least significant bit).
Dense on_qubit(const Dense& op, int q, int n)
{
  Dense out = Dense::Identity(1, 1);
  for (int k = n - 1; k >= 0; --k) out = kron(out, k == q ? op : Dense(Dense::Identity(2, 2)));
  return out;
}

} // namespace

Eigen::VectorXcd qaoa_state(const Hamiltonian& H, const std::vector<double>& betas, const std::vector<double>& gammas)
{
  const int n = H.size();
  const Eigen::Index dim = Eigen::Index{1} << n;
  // Z|0> = |0>, so z = +1 on an unset bit
  Dense Z(2, 2);
  Z << 1, 0, 0, -1;
  Dense X(2, 2);
  X << 0, 1, 1, 0;
  Dense Hc = H.offset() * Dense::Identity(dim, dim);
  for (int i = 0; i < n; ++i) Hc += H.field(i) * on_qubit(Z, i, n);
  for (const auto& c : H.couplings()) Hc += c.value * on_qubit(Z, c.i, n) * on_qubit(Z, c.j, n);
  Dense Hmix = Dense::Zero(dim, dim);
  for (int i = 0; i < n; ++i) Hmix -= on_qubit(X, i, n);

  auto expm_herm = [](const Dense& A, double t) {
    Eigen::SelfAdjointEigenSolver<Dense> es(A);
    const Eigen::VectorXcd phase =
      es.eigenvalues().unaryExpr([t](double ev) { return std::polar(1.0, -t * ev); }).cast<std::complex<double>>();
    return Dense(es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint());
  };

  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  for (std::size_t k = 0; k < betas.size(); ++k) {
    psi = expm_herm(Hc, gammas[k]) * psi;
    psi = expm_herm(Hmix, betas[k]) * psi;
  }
  return psi;
}

qiro::Correlations correlations(const Hamiltonian& H, const Eigen::VectorXcd& psi)
{
  const int n = H.size();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  std::vector<qiro::Coupling<double>> off;
  for (const auto& c : H.couplings()) off.push_back({c.i, c.j, 0.0});
  for (Eigen::Index x = 0; x < psi.size(); ++x) {
    const double p = std::norm(psi[x]);
    auto z = [x](int i) { return ((x >> i) & 1) ? -1.0 : 1.0; };
    for (int i = 0; i < n; ++i) diag[i] += p * z(i);
    for (auto& e : off) e.value += p * z(e.i) * z(e.j);
  }
  return qiro::Correlations(diag, off);
}

double energy(const Hamiltonian& H, const Eigen::VectorXcd& psi)
{
  double e = 0.0;
  const auto n = static_cast<std::uint64_t>(H.size());
  const std::uint64_t mask = n == 64 ? ~0ULL : (1ULL << n) - 1;
  // basis bit set means z = -1, the oracle energy uses bit set = +1
  for (Eigen::Index x = 0; x < psi.size(); ++x) e += std::norm(psi[x]) * ising(H, ~static_cast<std::uint64_t>(x) & mask);
  return e;
}

namespace {

bool independent(const Graph& g, std::uint64_t x)
{
  for (const auto& e : g.edges())
    if (((x >> e.u) & 1U) && ((x >> e.v) & 1U)) return false;
  return true;
}

} // namespace

std::vector<std::int64_t> independent_set_counts(const Graph& g)
{
  std::vector<std::int64_t> counts(static_cast<std::size_t>(g.size()) + 1, 0);
  for (std::uint64_t x = 0; x < (1ULL << g.size()); ++x)
    if (independent(g, x)) ++counts[static_cast<std::size_t>(std::popcount(x))];
  return counts;
}

int max_independent_set_size(const Graph& g)
{
  int best = 0;
  for (std::uint64_t x = 0; x < (1ULL << g.size()); ++x)
    if (independent(g, x)) best = std::max(best, std::popcount(x));
  return best;
}

int maxsat_optimum(const CnfFormula& phi)
{
  int best = std::numeric_limits<int>::max();
  for (std::uint64_t x = 0; x < (1ULL << phi.num_vars()); ++x) best = std::min(best, violated(phi, x));
  return best;
}

double ising_minimum(const Hamiltonian& H)
{
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t x = 0; x < (1ULL << H.size()); ++x) best = std::min(best, ising(H, x));
  return best;
}

} // namespace oracle
