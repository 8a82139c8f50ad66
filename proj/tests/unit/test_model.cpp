#include <bit>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qiro/model.hpp"

using namespace qiro;

TEST_CASE("mis_to_ising coefficients")
{
  SUBCASE("isolated vertex")
  {
    const auto H = mis_to_ising(Graph(1), 1.1);
    CHECK(H.field(0) == doctest::Approx(-0.5));
    CHECK(H.couplings().empty());
    CHECK(H.offset() == doctest::Approx(-0.5));
    CHECK(H.energy(Spins::Constant(1, 1)) == doctest::Approx(-1.0));
  }
  SUBCASE("single edge")
  {
    const auto H = mis_to_ising(fixture::path(2), 1.1);
    CHECK(H.field(0) == doctest::Approx(-0.225));
    CHECK(H.field(1) == doctest::Approx(-0.225));
    CHECK(H.coupling(0, 1) == doctest::Approx(0.275));
    CHECK(H.offset() == doctest::Approx(-0.725));
    CHECK(H.energy(Spins::Constant(2, 1)) == doctest::Approx(-0.9));
    CHECK(eval_ising(H, Spins{{1, -1}}) == doctest::Approx(-1.0));
  }
  CHECK_THROWS_AS(mis_to_ising(Graph(2), 1.0), std::invalid_argument);
}

TEST_CASE("maxsat_to_ising coefficients")
{
  const CnfFormula unit(1, std::vector<std::vector<Literal>>{{{0, true}}});
  const auto H1 = maxsat_to_ising(unit);
  CHECK(H1.field(0) == doctest::Approx(0.5));
  CHECK(H1.offset() == doctest::Approx(0.5));
  CHECK(H1.energy(Spins::Constant(1, 1)) == doctest::Approx(1.0));
  CHECK(H1.energy(Spins::Constant(1, -1)) == doctest::Approx(0.0));

  const CnfFormula two(2, std::vector<std::vector<Literal>>{{{0, false}, {1, false}}});
  const auto H2 = maxsat_to_ising(two);
  CHECK(H2.field(0) == doctest::Approx(-0.25));
  CHECK(H2.field(1) == doctest::Approx(-0.25));
  CHECK(H2.coupling(0, 1) == doctest::Approx(0.25));
  CHECK(H2.offset() == doctest::Approx(0.25));
  CHECK(H2.energy(Spins::Constant(2, -1)) == doctest::Approx(1.0));
  CHECK(H2.energy(Spins::Constant(2, 1)) == doctest::Approx(0.0));
}

TEST_CASE("eval_ising basics")
{
  const Hamiltonian constant(Hamiltonian::Vector::Zero(3), {}, 3.5);
  CHECK(eval_ising(constant, Spins{{1, -1, 1}}) == 3.5);
  const Hamiltonian single(Hamiltonian::Vector::Constant(1, 1.0), {}, 0.0);
  CHECK(eval_ising(single, Spins::Constant(1, -1)) == -1.0);
  CHECK_THROWS_AS(eval_ising(single, Spins::Constant(2, 1)), std::invalid_argument);
}

TEST_CASE("independence and MIS cost")
{
  const auto tri = fixture::complete(3);
  const std::vector<int> one{0};
  const std::vector<int> two{0, 1};
  CHECK(is_independent(tri, one));
  CHECK(mis_cost(tri, one, 1.5) == -1.0);
  CHECK_FALSE(is_independent(tri, two));
  CHECK(mis_cost(tri, two, 1.5) == doctest::Approx(-0.5));
  CHECK(is_independent(tri, std::vector<int>{}));
  CHECK(mis_cost(tri, std::vector<int>{}, 1.5) == 0.0);
}

TEST_CASE("count_violated")
{
  const CnfFormula phi(3, std::vector<std::vector<Literal>>{{{1, false}, {2, false}}, {{1, true}, {2, false}}});
  CHECK(count_violated(phi, Assignment{false, true, false}) == 1);
  const CnfFormula units(3, std::vector<std::vector<Literal>>{{{0, false}}, {{1, false}}, {{2, false}}});
  CHECK(count_violated(units, Assignment{true, true, true}) == 0);
  CHECK_THROWS(count_violated(units, Assignment(3)));
}

TEST_CASE("clause normalization")
{
  const CnfFormula phi(2, std::vector<std::vector<Literal>>{
                            {{0, false}, {0, false}}, // duplicate literal -> unit
                            {{0, false}, {0, true}},  // tautology -> dropped
                            {},                       // empty -> offset
                            {{1, false}, {0, true}},
                            {{1, false}, {0, true}}, // duplicate clause kept
                          });
  CHECK(phi.num_clauses() == 3);
  CHECK(phi.violation_offset() == 1);
  CHECK(phi.clauses()[0].size() == 1);
  CHECK(phi.clauses()[1][0] == Literal{0, true});
  CHECK_THROWS_AS(CnfFormula(3, std::vector<std::vector<Literal>>{{{0, false}, {1, false}, {2, false}}}),
                  std::invalid_argument);

  // duplicate clauses aggregate their coefficients, the support stays upper triangular
  const auto H = maxsat_to_ising(phi);
  CHECK(H.coupling(0, 1) == doctest::Approx(-0.5));
  CHECK(H.coupling(1, 0) == H.coupling(0, 1));
  for (const auto& c : H.couplings()) CHECK(c.i < c.j);
}

TEST_CASE("encoding soundness, exhaustive")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const auto g = fixture::random_graph(n, 2.5, seed);
    const double lambda = 1.1 + 0.37 * static_cast<double>(seed % 5);
    const auto H = mis_to_ising(g, lambda);
    const auto phi = fixture::random_formula(n, 3 * n, seed + 100);
    const auto Hs = maxsat_to_ising(phi);
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
      Spins z(n);
      for (int i = 0; i < n; ++i) z[i] = ((x >> i) & 1U) ? 1 : -1;
      CHECK(std::abs(H.energy(z) - oracle::mis_objective(g, x, lambda)) <= 1e-12);
      CHECK(Hs.energy(z) + phi.violation_offset() == static_cast<double>(oracle::violated(phi, x)));
      CHECK(count_violated(phi, assignment_from_spins(z)) == oracle::violated(phi, x));
    }
  }
}

TEST_CASE("MIS ground states are maximum independent sets")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int n = 4 + static_cast<int>(seed % 7);
    const auto g = fixture::random_graph(n, 3.0, seed + 7);
    const auto H = mis_to_ising(g, 1.3);
    const double ground = oracle::ising_minimum(H);
    const int alpha = oracle::max_independent_set_size(g);
    CHECK(ground == doctest::Approx(-alpha));
    for (std::uint64_t x = 0; x < (1ULL << n); ++x)
      if (std::abs(oracle::ising(H, x) - ground) < 1e-9) {
        std::vector<int> s;
        for (int i = 0; i < n; ++i)
          if ((x >> i) & 1U) s.push_back(i);
        CHECK(is_independent(g, s));
        CHECK(static_cast<int>(s.size()) == alpha);
      }
  }
}

TEST_CASE("graph helpers")
{
  const Graph g(5, {{3, 1}, {1, 3}, {0, 1}, {2, 4}});
  CHECK(g.num_edges() == 3);
  CHECK(g.adjacent(1, 3));
  CHECK_FALSE(g.adjacent(0, 3));
  CHECK_THROWS(Graph(2, {{0, 0}}));
  CHECK_THROWS(Graph(2, {{0, 2}}));
  const auto comps = connected_components(Graph(5, {{0, 2}, {3, 4}}));
  REQUIRE(comps.size() == 3);
  CHECK(comps[0] == std::vector<int>{0, 2});
  CHECK(comps[1] == std::vector<int>{1});
  const std::vector<int> keep{4, 3};
  const auto sub = induced_subgraph(Graph(5, {{3, 4}}), keep);
  CHECK(sub.size() == 2);
  CHECK(sub.adjacent(0, 1));
}
