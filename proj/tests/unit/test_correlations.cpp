#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qiro/correlations.hpp"
#include "qiro/statevector.hpp"

using namespace qiro;

namespace {

double max_abs_diff(const Correlations& a, const Correlations& b)
{
  REQUIRE(a.size() == b.size());
  REQUIRE(a.offdiag().size() == b.offdiag().size());
  double d = (a.diag() - b.diag()).cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < a.offdiag().size(); ++k) {
    REQUIRE(a.offdiag()[k].i == b.offdiag()[k].i);
    REQUIRE(a.offdiag()[k].j == b.offdiag()[k].j);
    d = std::max(d, std::abs(a.offdiag()[k].value - b.offdiag()[k].value));
  }
  return d;
}

Correlations sv_correlations(const Hamiltonian& H, std::vector<double> b, std::vector<double> g)
{
  const QaoaStatevector<double> sv(H);
  return sv.correlations(sv.prepare(b, g));
}

} // namespace

TEST_CASE("state vector agrees with dense matrix exponentials")
{
  for (std::uint64_t s = 0; s < 12; ++s) {
    const int n = 1 + static_cast<int>(s % 6);
    const auto H = fixture::random_hamiltonian(n, 0.6, s);
    const std::vector<double> b{0.3 + 0.1 * s, -0.7};
    const std::vector<double> g{0.9, 0.2 * s - 0.4};
    const auto psi = oracle::qaoa_state(H, b, g);
    const QaoaStatevector<double> sv(H);
    const auto mine = sv.prepare(b, g);
    CHECK((mine - psi).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(max_abs_diff(sv.correlations(mine), oracle::correlations(H, psi)) <= 1e-10);
    CHECK(sv.expectation(mine) == doctest::Approx(oracle::energy(H, psi)).epsilon(1e-10));
  }
}

TEST_CASE("closed form matches the state vector at depth one")
{
  Rng rng(42);
  for (std::uint64_t s = 0; s < 60; ++s) {
    const int n = 2 + static_cast<int>(s % 9);
    Hamiltonian H;
    switch (s % 3) {
    case 0: H = mis_to_ising(fixture::random_graph(n, 3.0, s), 1.1 + 0.1 * static_cast<double>(s % 7)); break;
    case 1: H = maxsat_to_ising(fixture::random_formula(n, 2 * n, s)); break;
    default: H = fixture::random_hamiltonian(n, 0.5, s); break;
    }
    const double beta = uniform_real(rng, 0, std::numbers::pi);
    const double gamma = uniform_real(rng, 0, 2 * std::numbers::pi);
    const auto closed = p1_correlations(H, beta, gamma);
    CHECK(max_abs_diff(closed, sv_correlations(H, {beta}, {gamma})) <= 1e-9);
    CHECK(p1_energy(H, beta, gamma) == doctest::Approx(energy_from_correlations(H, closed)).epsilon(1e-12));
  }
}

TEST_CASE("closed form special points")
{
  const auto H = fixture::random_hamiltonian(5, 0.7, 3);
  CHECK(p1_correlations(H, 0.8, 0.0).max_abs() == 0.0);
  CHECK(p1_correlations(H, 0.0, 1.3).max_abs() == 0.0);

  const Hamiltonian one(Hamiltonian::Vector::Constant(1, 1.0), {}, 0.0);
  const double q = std::numbers::pi / 4;
  CHECK(p1_correlations(one, q, q).diag(0) == doctest::Approx(-1.0));
  CHECK(sv_correlations(one, {q}, {q}).diag(0) == doctest::Approx(-1.0));

  const auto edge = mis_to_ising(Graph(2, {{0, 1}}), 1.1);
  CHECK(max_abs_diff(p1_correlations(edge, 0.4, 0.7), sv_correlations(edge, {0.4}, {0.7})) <= 1e-9);
}

TEST_CASE("state vector properties")
{
  const auto H = fixture::random_hamiltonian(6, 0.5, 11);
  const QaoaStatevector<double> sv(H);
  CHECK(sv.correlations(sv.prepare(std::vector<double>{0.3, 1.1}, std::vector<double>{0.0, 0.0})).max_abs() <=
        1e-14);
  // unitarity after every layer
  for (int p = 1; p <= 4; ++p) {
    std::vector<double> b(p, 0.37);
    std::vector<double> g(p, 1.21);
    CHECK(std::abs(sv.prepare(b, g).squaredNorm() - 1.0) <= 1e-12);
  }
  CHECK_THROWS_AS(QaoaStatevector<double>(fixture::random_hamiltonian(6, 0.5, 1), 5), std::length_error);
}

TEST_CASE("energy_from_correlations")
{
  const auto H = fixture::random_hamiltonian(5, 0.6, 8);
  std::vector<Coupling<double>> zero;
  for (const auto& c : H.couplings()) zero.push_back({c.i, c.j, 0.0});
  CHECK(energy_from_correlations(H, Correlations(Eigen::VectorXd::Zero(5), zero)) == doctest::Approx(H.offset()));

  // a basis state has M_ii = z_i and M_ij = z_i z_j
  const Spins z{{1, -1, -1, 1, 1}};
  std::vector<Coupling<double>> zz;
  for (const auto& c : H.couplings()) zz.push_back({c.i, c.j, static_cast<double>(z[c.i] * z[c.j])});
  CHECK(energy_from_correlations(H, Correlations(z.cast<double>(), zz)) == doctest::Approx(H.energy(z)));

  CHECK_THROWS(energy_from_correlations(H, Correlations(Eigen::VectorXd::Zero(5), {})));
}

TEST_CASE("correlation entries stay in [-1, 1]")
{
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto H = fixture::random_hamiltonian(7, 0.5, s + 50);
    CHECK(p1_correlations(H, 0.1 * s, 0.3 * s).max_abs() <= 1.0);
  }
}
