#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qiro/baselines.hpp"
#include "qiro/qiro.hpp"
#include "qiro/rqaoa.hpp"

using namespace qiro;

namespace {

using Kind = EliminationRecord::Kind;

/// Spins of H' extended by the eliminated variable.
Spins extend(const Spins& reduced, const EliminationRecord& rec)
{
  Spins z(reduced.size() + 1);
  for (int k = 0, r = 0; k < z.size(); ++k)
    if (k != rec.i) z[k] = reduced[r++];
  z[rec.i] = rec.kind == Kind::two_point ? rec.sign * z[rec.j] : rec.sign;
  return z;
}

} // namespace

TEST_CASE("eliminate_variable examples")
{
  const Hamiltonian zz(Hamiltonian::Vector::Zero(2), {{0, 1, 1.0}}, 0.0);
  const auto c = eliminate_variable(zz, {Kind::two_point, 0, 1, -1});
  CHECK(c.size() == 1);
  CHECK(c.couplings().empty());
  CHECK(c.field(0) == 0.0);
  CHECK(c.offset() == -1.0);

  const Hamiltonian h0(Hamiltonian::Vector::Constant(1, 0.7), {}, 0.0);
  const auto d = eliminate_variable(h0, {Kind::one_point, 0, -1, 1});
  CHECK(d.size() == 0);
  CHECK(d.offset() == doctest::Approx(0.7));

  CHECK_THROWS(eliminate_variable(h0, {Kind::one_point, 1, -1, 1}));
  CHECK_THROWS(eliminate_variable(zz, {Kind::two_point, 0, 0, 1}));
}

TEST_CASE("elimination bookkeeping identity")
{
  for (std::uint64_t s = 0; s < 60; ++s) {
    const int n = 2 + static_cast<int>(s % 9);
    const auto H = fixture::random_hamiltonian(n, 0.5, s);
    Rng rng(s);
    EliminationRecord rec;
    rec.i = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
    rec.sign = bernoulli(rng, 0.5) ? 1 : -1;
    if (bernoulli(rng, 0.6)) {
      rec.kind = Kind::two_point;
      do rec.j = static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
      while (rec.j == rec.i);
    }
    const auto Hr = eliminate_variable(H, rec);
    REQUIRE(Hr.size() == n - 1);
    for (std::uint64_t x = 0; x < (1ULL << (n - 1)); ++x) {
      Spins zr(n - 1);
      for (int k = 0; k < n - 1; ++k) zr[k] = ((x >> k) & 1U) ? 1 : -1;
      CHECK(std::abs(Hr.energy(zr) - H.energy(extend(zr, rec))) <= 1e-12);
    }
    for (const auto& c : Hr.couplings()) CHECK(c.value != 0.0);
  }
}

TEST_CASE("reconstruction replays records newest first")
{
  Spins z{{0, 1}};
  const std::vector<EliminationRecord> recs{{Kind::two_point, 0, 1, -1}};
  replay_eliminations(recs, z);
  CHECK(z[0] == -1);

  Spins chain{{0, 0, -1}};
  const std::vector<EliminationRecord> two{{Kind::two_point, 0, 1, 1}, {Kind::two_point, 1, 2, -1}};
  replay_eliminations(two, chain);
  CHECK(chain[1] == 1);
  CHECK(chain[0] == 1);
}

TEST_CASE("rqaoa")
{
  const GridQaoaProvider provider;
  SUBCASE("below the threshold it is exact")
  {
    const auto H = fixture::random_hamiltonian(8, 0.4, 3);
    const auto r = rqaoa(H, 10, provider, 0);
    CHECK(r.provider_calls == 0);
    CHECK(r.energy == doctest::Approx(oracle::ising_minimum(H)));
  }
  SUBCASE("single edge decodes to one vertex")
  {
    const Graph g(2, {{0, 1}});
    const auto r = rqaoa(mis_to_ising(g, 1.1), 0, provider, 0);
    const auto dec = decode_mis(g, r.config);
    CHECK(dec.valid);
    CHECK(dec.set.size() == 1);
    CHECK(r.energy == doctest::Approx(-1.0));
  }
  SUBCASE("reported energy matches the original Hamiltonian")
  {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const auto phi = gen_random_max2sat({25, 2.0, s});
      const auto H = maxsat_to_ising(phi);
      const auto r = rqaoa(H, kSatThreshold, provider, s);
      CHECK(r.records.size() == 15);
      CHECK(r.energy == doctest::Approx(H.energy(r.config)));
      CHECK(count_violated(phi, assignment_from_spins(r.config)) == static_cast<int>(std::lround(r.energy)));
      // each variable eliminated at most once
      std::vector<int> seen(25, 0);
      for (const auto& rec : r.records) CHECK(seen[rec.i]++ == 0);
    }
  }
}
