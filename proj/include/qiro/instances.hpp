#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qiro/model.hpp"

namespace qiro {

/// G(n, p) with p = avg_degree / (n - 1).
struct ErConfig
{
  int n = 0;
  double avg_degree = 0.0;
  std::uint64_t seed = 0;
};

/// Unit-disk graph on a square lattice with unit lattice constant. Sites are
/// occupied uniformly at random; occupied sites closer than `radius` are
/// joined. A radius in (sqrt 2, 2) links nearest and diagonal neighbours.
struct UdgConfig
{
  int lattice_side = 14;
  double fill_fraction = 0.70;
  double radius = 1.5;
  std::uint64_t seed = 0;

  int num_sites() const;
};

/// Random MAX-2-SAT: round(alpha * n) clauses over two distinct variables
/// with independent uniform polarities.
struct SatGenConfig
{
  int n = 0;
  double alpha = 1.0;
  std::uint64_t seed = 0;
};

Graph gen_erdos_renyi(const ErConfig& cfg);

struct LatticeSite
{
  int row = 0;
  int col = 0;
};

/// Occupied sites in row-major order; vertex k of gen_udg_lattice sits at
/// site k.
std::vector<LatticeSite> udg_sites(const UdgConfig& cfg);
Graph gen_udg_lattice(const UdgConfig& cfg);

CnfFormula gen_random_max2sat(const SatGenConfig& cfg);

class ParseError : public std::runtime_error
{
public:
  ParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
  {
  }
  int line() const { return line_; }

private:
  int line_;
};

// Edge list: header "n m", then m lines "u v", 0-indexed. Blank lines and
// lines starting with '#' are ignored.
void write_edge_list(std::ostream& os, const Graph& g);
Graph read_edge_list(std::istream& is);

// DIMACS CNF, 1-indexed literals, clauses terminated by 0. The violation
// offset is written as that many empty clauses, which read back as offset.
void write_dimacs(std::ostream& os, const CnfFormula& phi);
CnfFormula read_dimacs(std::istream& is);

Graph load_edge_list(const std::string& path);
void save_edge_list(const std::string& path, const Graph& g);
CnfFormula load_dimacs(const std::string& path);
void save_dimacs(const std::string& path, const CnfFormula& phi);

} // namespace qiro
