#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "qiro/qaoa.hpp"

using namespace qiro;

TEST_CASE("grid search basics")
{
  const Hamiltonian flat(Hamiltonian::Vector::Zero(3), {}, 2.0);
  const auto opt = grid_optimize_p1(flat);
  CHECK(opt.best.beta[0] == opt.grid.spec.beta(0));
  CHECK(opt.best.gamma[0] == opt.grid.spec.gamma(0));
  for (double q : {0.0, 0.3, 1.0}) {
    const auto p = quantile_params(opt.grid, q);
    CHECK(p.beta[0] == opt.grid.spec.beta(0));
    CHECK(p.gamma[0] == opt.grid.spec.gamma(0));
  }

  const auto H = fixture::random_hamiltonian(6, 0.5, 4);
  const auto g = grid_optimize_p1(H);
  CHECK(g.best_energy == g.grid.energies.minCoeff());
  CHECK(p1_energy(H, g.best.beta[0], g.best.gamma[0]) == doctest::Approx(g.best_energy));
  const auto top = quantile_params(g.grid, 1.0);
  CHECK(p1_energy(H, top.beta[0], top.gamma[0]) == doctest::Approx(g.grid.energies.maxCoeff()));
  const auto bottom = quantile_params(g.grid, 0.0);
  CHECK(bottom.beta == g.best.beta);
  CHECK(bottom.gamma == g.best.gamma);
  CHECK_THROWS(quantile_params(g.grid, 1.5));
  GridSpec tiny;
  tiny.size = 1;
  CHECK_THROWS(grid_optimize_p1(H, tiny));

  // the grid entry at flat index a * size + b sits at (beta_a, gamma_b)
  const int k = 7 * 30 + 19;
  const auto pk = g.grid.params_at_flat(k);
  CHECK(g.grid.at_flat(k) == doctest::Approx(p1_energy(H, pk.beta[0], pk.gamma[0])));
}

TEST_CASE("single qubit grid optimum")
{
  const Hamiltonian one(Hamiltonian::Vector::Constant(1, 1.0), {}, 0.5);
  const auto opt = grid_optimize_p1(one);
  // closed-form minimum -1 + c at beta = gamma = pi/4; a 30-point grid
  // lands within half a cell
  CHECK(opt.best_energy <= -1.0 + 0.5 + 0.02);
  CHECK(opt.best_energy >= -1.0 + 0.5);
}

TEST_CASE("quantiles are monotone in energy")
{
  const auto H = maxsat_to_ising(fixture::random_formula(8, 16, 2));
  const auto g = grid_optimize_p1(H);
  double last = -1e300;
  for (double q : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto p = quantile_params(g.grid, q);
    const double e = p1_energy(H, p.beta[0], p.gamma[0]);
    CHECK(e >= last - 1e-12);
    last = e;
  }
}

TEST_CASE("gradient descent")
{
  const auto H = mis_to_ising(fixture::random_graph(8, 3.0, 5), 1.1);
  SUBCASE("zero iterations return the random start")
  {
    GradientDescentOptions o;
    o.iterations = 0;
    o.restarts = 1;
    const auto r = optimize_qaoa_gd(H, 1, 17, o);
    Rng rng(17);
    const double b = uniform_real(rng, o.init_ranges.beta_lo, o.init_ranges.beta_hi);
    const double g = uniform_real(rng, o.init_ranges.gamma_lo, o.init_ranges.gamma_hi);
    CHECK(r.params.beta[0] == b);
    CHECK(r.params.gamma[0] == g);
  }
  SUBCASE("descent never increases the energy")
  {
    for (int p = 1; p <= 2; ++p) {
      GradientDescentOptions o;
      o.restarts = 3;
      const auto r = optimize_qaoa_gd(H, p, 3, o);
      for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
      CHECK(qaoa_energy(H, r.params) == doctest::Approx(r.energy));
    }
  }
  SUBCASE("depth one reaches the grid optimum")
  {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto Hs = maxsat_to_ising(fixture::random_formula(7, 14, s));
      const auto grid = grid_optimize_p1(Hs);
      const auto gd = optimize_qaoa_gd(Hs, 1, s);
      // slack: one grid cell of energy variation
      CHECK(gd.energy <= grid.best_energy + 1e-6);
    }
  }
  SUBCASE("depth two at least as good as depth one")
  {
    GradientDescentOptions o;
    o.restarts = 5;
    const auto r1 = optimize_qaoa_gd(H, 1, 9, o);
    const auto r2 = optimize_qaoa_gd(H, 2, 9, o);
    CHECK(r2.energy <= r1.energy + 1e-6);
  }
  CHECK_THROWS_AS(optimize_qaoa_gd(fixture::random_hamiltonian(8, 0.3, 1), 2, 0, {300, 1, 0.05, 1e-4, {}, 6}),
                  std::length_error);
}

TEST_CASE("adjoint gradient matches central differences")
{
  for (std::uint64_t s = 0; s < 12; ++s) {
    const auto H = fixture::random_hamiltonian(3 + static_cast<int>(s % 6), 0.5, s);
    Rng rng(s);
    const int p = 2 + static_cast<int>(s % 3);
    QaoaParams params;
    for (int k = 0; k < p; ++k) {
      params.beta.push_back(uniform_real(rng, 0.0, 3.0));
      params.gamma.push_back(uniform_real(rng, 0.0, 6.0));
    }
    const auto fd = qaoa_gradient(H, params, GradientMethod::central_difference, 1e-5);
    const auto adj = qaoa_gradient(H, params, GradientMethod::adjoint);
    CHECK((fd - adj).lpNorm<Eigen::Infinity>() <= 1e-6 * (1.0 + adj.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("providers")
{
  const auto H = mis_to_ising(fixture::random_graph(9, 3.0, 2), 1.1);
  const GridQaoaProvider grid;
  const auto M = grid.correlations(H, 0);
  const auto opt = grid_optimize_p1(H);
  const auto expect = p1_correlations(H, opt.best.beta[0], opt.best.gamma[0]);
  CHECK((M.diag() - expect.diag()).cwiseAbs().maxCoeff() == 0.0);

  GradientDescentOptions o;
  o.restarts = 2;
  o.iterations = 50;
  const GradientQaoaProvider gd(2, o);
  const auto a = gd.correlations(H, 5);
  const auto b = gd.correlations(H, 5);
  CHECK((a.diag() - b.diag()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.offdiag().size() == H.couplings().size());

  const CallbackProvider cb([](const Hamiltonian& h, std::uint64_t) { return p1_correlations(h, 0.1, 0.2); });
  CHECK(cb.correlations(H, 0).diag() == p1_correlations(H, 0.1, 0.2).diag());
  CHECK_THROWS(GridQaoaProvider({}, -0.1));
}
