#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qiro/model.hpp"
#include "qiro/qaoa.hpp"

namespace qiro {

/// Z_i -> sign (one-point) or Z_i -> sign * Z_j (two-point).
struct EliminationRecord
{
  enum class Kind : std::uint8_t { one_point, two_point };
  Kind kind = Kind::one_point;
  int i = 0;
  int j = -1;
  int sign = 1;
};

/// Substitutes the record into H and drops variable i; variables above i
/// shift down by one. For every z' of the result, extended by the
/// eliminated spin, the two Hamiltonians agree.
Hamiltonian eliminate_variable(const Hamiltonian& H, const EliminationRecord& rec);

/// Fills the eliminated spins of z (original labels) by replaying records
/// newest first. Entries of z named by a record are overwritten.
void replay_eliminations(std::span<const EliminationRecord> records, Spins& z);

struct RqaoaResult
{
  Spins config;
  double energy = 0.0;
  /// Records in elimination order, in original labels.
  std::vector<EliminationRecord> records;
  int provider_calls = 0;
};

/// Eliminates the largest-|M| entry (ties at random) until nc variables
/// remain, solves the rest exhaustively and reconstructs.
RqaoaResult rqaoa(const Hamiltonian& H, int nc, const CorrelationProvider& provider, std::uint64_t seed);

struct MisDecoding
{
  std::vector<int> set;
  bool valid = false;
};

/// Vertices with z = +1, and whether they are independent in g.
MisDecoding decode_mis(const Graph& g, const Spins& z);

} // namespace qiro
