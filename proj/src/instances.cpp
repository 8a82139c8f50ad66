#include "qiro/instances.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "qiro/random.hpp"

namespace qiro {

Graph gen_erdos_renyi(const ErConfig& cfg)
{
  if (cfg.n < 0) throw std::invalid_argument("gen_erdos_renyi: negative n");
  const double max_degree = std::max(0, cfg.n - 1);
  if (!(cfg.avg_degree >= 0.0) || cfg.avg_degree > max_degree)
    throw std::invalid_argument("gen_erdos_renyi: average degree must lie in [0, n-1]");
  const double p = cfg.n > 1 ? cfg.avg_degree / max_degree : 0.0;
  Rng rng(cfg.seed);
  std::vector<Edge> edges;
  for (int u = 0; u < cfg.n; ++u)
    for (int v = u + 1; v < cfg.n; ++v)
      if (uniform_real(rng) < p) edges.push_back({u, v});
  return Graph(cfg.n, std::move(edges));
}

int UdgConfig::num_sites() const
{
  return static_cast<int>(std::lround(fill_fraction * lattice_side * lattice_side));
}

std::vector<LatticeSite> udg_sites(const UdgConfig& cfg)
{
  if (cfg.lattice_side <= 0) throw std::invalid_argument("udg: lattice side must be positive");
  if (!(cfg.fill_fraction > 0.0) || cfg.fill_fraction > 1.0)
    throw std::invalid_argument("udg: fill fraction must lie in (0, 1]");
  if (!(cfg.radius > std::sqrt(2.0) && cfg.radius < 2.0))
    throw std::invalid_argument("udg: radius must lie strictly inside (sqrt 2, 2)");
  const int total = cfg.lattice_side * cfg.lattice_side;
  const int k = cfg.num_sites();
  if (k < 1) throw std::invalid_argument("udg: fill fraction selects no site");

  std::vector<int> sites(static_cast<std::size_t>(total));
  std::iota(sites.begin(), sites.end(), 0);
  Rng rng(cfg.seed);
  // partial Fisher-Yates: the first k slots are a uniform k-subset
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(total - i)));
    std::swap(sites[i], sites[j]);
  }
  sites.resize(static_cast<std::size_t>(k));
  std::sort(sites.begin(), sites.end());
  std::vector<LatticeSite> out;
  out.reserve(sites.size());
  for (int s : sites) out.push_back({s / cfg.lattice_side, s % cfg.lattice_side});
  return out;
}

Graph gen_udg_lattice(const UdgConfig& cfg)
{
  const auto sites = udg_sites(cfg);
  const double r2 = cfg.radius * cfg.radius;
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < sites.size(); ++a)
    for (std::size_t b = a + 1; b < sites.size(); ++b) {
      const double dr = sites[a].row - sites[b].row;
      const double dc = sites[a].col - sites[b].col;
      if (dr * dr + dc * dc < r2) edges.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
  return Graph(static_cast<int>(sites.size()), std::move(edges));
}

CnfFormula gen_random_max2sat(const SatGenConfig& cfg)
{
  if (cfg.n < 2) throw std::invalid_argument("gen_random_max2sat: need at least two variables");
  const long m = std::lround(cfg.alpha * cfg.n);
  if (m < 1) throw std::invalid_argument("gen_random_max2sat: alpha * n rounds to zero clauses");
  Rng rng(cfg.seed);
  std::vector<Clause> clauses;
  clauses.reserve(static_cast<std::size_t>(m));
  const auto n = static_cast<std::uint64_t>(cfg.n);
  for (long c = 0; c < m; ++c) {
    const int a = static_cast<int>(uniform_index(rng, n));
    int b = static_cast<int>(uniform_index(rng, n - 1));
    if (b >= a) ++b;
    const bool na = (rng() >> 63) != 0;
    const bool nb = (rng() >> 63) != 0;
    clauses.emplace_back(Literal{a, na}, Literal{b, nb});
  }
  return CnfFormula(cfg.n, std::move(clauses));
}

void write_edge_list(std::ostream& os, const Graph& g)
{
  os << g.size() << ' ' << g.num_edges() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

namespace {

bool skippable(const std::string& line, char comment)
{
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == comment;
}

} // namespace

Graph read_edge_list(std::istream& is)
{
  std::string line;
  int lineno = 0;
  long n = -1;
  long m = -1;
  std::vector<Edge> edges;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line, '#')) continue;
    std::istringstream ss(line);
    long a = 0;
    long b = 0;
    std::string extra;
    if (!(ss >> a >> b) || (ss >> extra)) throw ParseError(lineno, "expected two integers");
    if (n < 0) {
      if (a < 0 || b < 0) throw ParseError(lineno, "negative header value");
      n = a;
      m = b;
      continue;
    }
    if (a < 0 || b < 0 || a >= n || b >= n) throw ParseError(lineno, "vertex out of range");
    if (a == b) throw ParseError(lineno, "self-loop");
    edges.push_back({static_cast<int>(a), static_cast<int>(b)});
  }
  if (n < 0) throw ParseError(lineno, "missing header \"n m\"");
  if (static_cast<long>(edges.size()) != m)
    throw ParseError(lineno, "header announces " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));
  return Graph(static_cast<int>(n), std::move(edges));
}

void write_dimacs(std::ostream& os, const CnfFormula& phi)
{
  os << "p cnf " << phi.num_vars() << ' ' << phi.num_clauses() + static_cast<std::size_t>(phi.violation_offset())
     << '\n';
  for (const auto& c : phi.clauses()) {
    for (const auto& l : c.literals()) os << (l.negated ? -(l.var + 1) : l.var + 1) << ' ';
    os << "0\n";
  }
  for (int k = 0; k < phi.violation_offset(); ++k) os << "0\n";
}

CnfFormula read_dimacs(std::istream& is)
{
  std::string line;
  int lineno = 0;
  long n = -1;
  long m = -1;
  std::vector<std::vector<Literal>> clauses;
  std::vector<Literal> current;
  while (std::getline(is, line)) {
    ++lineno;
    if (skippable(line, 'c') || skippable(line, '%')) continue;
    std::istringstream ss(line);
    if (n < 0) {
      std::string p;
      std::string fmt;
      std::string extra;
      if (!(ss >> p >> fmt) || p != "p" || fmt != "cnf") throw ParseError(lineno, "expected \"p cnf <vars> <clauses>\"");
      if (!(ss >> n >> m) || (ss >> extra) || n < 0 || m < 0)
        throw ParseError(lineno, "malformed \"p cnf\" header arity");
      continue;
    }
    std::string tok;
    while (ss >> tok) {
      long lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError(lineno, "invalid literal \"" + tok + "\"");
      }
      if (lit == 0) {
        clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const long var = std::labs(lit);
      if (var > n) throw ParseError(lineno, "variable " + std::to_string(var) + " exceeds header count");
      current.push_back({static_cast<int>(var - 1), lit < 0});
      if (current.size() > 2) throw ParseError(lineno, "clause with more than two literals");
    }
  }
  if (n < 0) throw ParseError(lineno, "missing \"p cnf\" header");
  if (!current.empty()) throw ParseError(lineno, "unterminated clause");
  if (static_cast<long>(clauses.size()) != m)
    throw ParseError(lineno,
                     "header announces " + std::to_string(m) + " clauses, found " + std::to_string(clauses.size()));
  return CnfFormula(static_cast<int>(n), std::move(clauses));
}

namespace {

template <class Stream>
Stream open_or_throw(const std::string& path)
{
  Stream s(path);
  if (!s) throw std::runtime_error("cannot open " + path);
  return s;
}

} // namespace

Graph load_edge_list(const std::string& path)
{
  auto is = open_or_throw<std::ifstream>(path);
  return read_edge_list(is);
}

void save_edge_list(const std::string& path, const Graph& g)
{
  auto os = open_or_throw<std::ofstream>(path);
  write_edge_list(os, g);
}

CnfFormula load_dimacs(const std::string& path)
{
  auto is = open_or_throw<std::ifstream>(path);
  return read_dimacs(is);
}

void save_dimacs(const std::string& path, const CnfFormula& phi)
{
  auto os = open_or_throw<std::ofstream>(path);
  write_dimacs(os, phi);
}

} // namespace qiro
