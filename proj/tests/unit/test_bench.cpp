#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qiro/bench.hpp"
#include "qiro/qiro.hpp"

using namespace qiro;
using namespace qiro::bench;

namespace {

ExperimentConfig small_mis()
{
  ExperimentConfig c;
  c.problem = Problem::mis;
  c.n = {16};
  c.density = {3.0};
  c.instances = 3;
  c.runs = 2;
  c.seed = 11;
  c.algorithms = {Algorithm::qiro, Algorithm::greedy_rand, Algorithm::rqaoa};
  return c;
}

RunRecord record(int run, bool success)
{
  RunRecord r;
  r.point = {20, 3.0, 1.1, 0.0, 1, 15};
  r.instance = "i" + std::to_string(run);
  r.run = run;
  r.objective = 5;
  r.reference = success ? 5 : 6;
  r.reference_method = "brute";
  r.success = success;
  return r;
}

} // namespace

TEST_CASE("median")
{
  CHECK(median({0.0, 100.0}) == 50.0);
  CHECK(median({70.0, 70.0, 70.0}) == 70.0);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("summary takes the median across run indices")
{
  // run 0 solves the instance, run 1 does not
  const auto rows = summarize({record(0, true), record(1, false)});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].runs == 2);
  CHECK(*rows[0].success_median == 50.0);
  CHECK(*rows[0].success_min == 0.0);
  CHECK(*rows[0].success_max == 100.0);
  CHECK(rows[0].validity == 1.0);
}

TEST_CASE("brute force always succeeds")
{
  ExperimentConfig c = small_mis();
  c.algorithms = {Algorithm::brute};
  c.instances = 4;
  c.runs = 1;
  for (const auto& r : run_experiment(c)) {
    REQUIRE(r.success.has_value());
    CHECK(*r.success);
    CHECK(r.reference_method == "brute");
  }
  c.problem = Problem::max2sat;
  c.density = {2.0};
  for (const auto& r : run_experiment(c)) CHECK(*r.success);
}

TEST_CASE("references match an independent oracle")
{
  ExperimentConfig c = small_mis();
  c.algorithms = {Algorithm::greedy_min};
  c.runs = 1;
  const auto records = run_experiment(c);
  for (int k = 0; k < c.instances; ++k) {
    const auto id = instance_id(c, 16, 3.0, k);
    const Graph g = gen_erdos_renyi({16, 3.0, instance_seed(c.seed, id)});
    CHECK(records[k].instance == id);
    CHECK(*records[k].reference == oracle::max_independent_set_size(g));
  }
}

TEST_CASE("jsonl round trip")
{
  auto records = run_experiment(small_mis(), {.timing = true, .progress = {}});
  records[0].error = "boom";
  std::stringstream ss;
  write_jsonl(ss, records);
  const auto back = read_jsonl(ss);
  REQUIRE(back.size() == records.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    CHECK(to_json_line(back[k]) == to_json_line(records[k]));
    CHECK(back[k].point == records[k].point);
  }
}

TEST_CASE("output does not depend on the thread count")
{
  ExperimentConfig c = small_mis();
  const auto serial = run_experiment(c);
  c.threads = 3;
  const auto parallel = run_experiment(c);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t k = 0; k < serial.size(); ++k) CHECK(to_json_line(serial[k]) == to_json_line(parallel[k]));
}

TEST_CASE("cell seeds ignore the rest of the roster")
{
  ExperimentConfig a = small_mis();
  a.algorithms = {Algorithm::greedy_rand};
  ExperimentConfig b = small_mis();
  b.algorithms = {Algorithm::sa, Algorithm::greedy_rand};
  std::vector<std::string> lines_a;
  std::vector<std::string> lines_b;
  for (const auto& r : run_experiment(a)) lines_a.push_back(to_json_line(r));
  for (const auto& r : run_experiment(b))
    if (r.algorithm == Algorithm::greedy_rand) lines_b.push_back(to_json_line(r));
  CHECK(lines_a == lines_b);
}

TEST_CASE("q sweep reports validity and ratio")
{
  ExperimentConfig c = small_mis();
  c.q = {0.0, 0.5};
  c.instances = 2;
  c.runs = 1;
  const auto rows = summarize(run_experiment(c));
  CHECK(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(r.validity >= 0.0);
    CHECK(r.validity <= 1.0);
    if (r.algorithm != Algorithm::rqaoa) {
      CHECK(r.validity == 1.0);
      REQUIRE(r.ratio.has_value());
      CHECK(*r.ratio <= 1.0);
      CHECK(*r.ratio > 0.5);
    }
  }
  std::ostringstream csv;
  write_summary_csv(csv, rows);
  CHECK(csv.str().find("validity,ratio") != std::string::npos);
}

TEST_CASE("config parsing")
{
  const auto c = config_from_json(R"({
    // comments are allowed
    "problem": "max2sat", "n": [20, 40], "alpha": 2, "algorithms": ["qiro", "qiro-bt"],
    "gd": {"gradient": "adjoint"}, "runs": 3
  })");
  CHECK(c.problem == Problem::max2sat);
  CHECK(c.n == std::vector<int>{20, 40});
  CHECK(c.density == std::vector<double>{2.0});
  CHECK(c.threshold() == kSatThreshold);
  CHECK(c.gd.gradient == GradientMethod::adjoint);
  CHECK(config_from_json(config_to_json(c)).algorithms == c.algorithms);

  CHECK_THROWS_AS(config_from_json(R"({"runz": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"gd": {"steps": 3}})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"problem": "max2sat", "degree": 3})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"lambda": 1.0})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"p": 2, "q": 0.5})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"problem": "max2sat", "algorithms": ["greedy-min"]})"),
                  std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"problem": "max2sat", "graph": "unit-disk"})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json(R"({"algorithms": ["qiro", "qiro"]})"), std::invalid_argument);
  CHECK_THROWS_AS(config_from_json("{"), std::invalid_argument);
}

TEST_CASE("solvers report consistent objectives")
{
  const Graph g = fixture::random_graph(14, 3.0, 4);
  const GridQaoaProvider provider;
  SolveOptions o;
  o.nc = 3;
  o.seed = 9;
  const int best = oracle::max_independent_set_size(g);
  for (auto a : {Algorithm::qiro, Algorithm::qiro_bt, Algorithm::rqaoa, Algorithm::greedy_min,
                 Algorithm::greedy_rand, Algorithm::sa, Algorithm::pt, Algorithm::brute}) {
    const auto s = solve_mis(g, a, o, provider);
    CHECK(s.objective == static_cast<int>(s.vertices.size()));
    CHECK(s.valid == is_independent(g, s.vertices));
    if (s.valid) CHECK(s.objective <= best);
  }
  const CnfFormula phi = fixture::random_formula(12, 24, 4);
  const int opt = oracle::maxsat_optimum(phi);
  for (auto a : {Algorithm::qiro, Algorithm::qiro_bt, Algorithm::rqaoa, Algorithm::sa, Algorithm::pt,
                 Algorithm::brute}) {
    const auto s = solve_maxsat(phi, a, o, provider);
    CHECK(s.objective == count_violated(phi, s.assignment));
    CHECK(s.objective >= opt);
  }
  CHECK_THROWS_AS(solve_maxsat(phi, Algorithm::greedy_min, o, provider), std::invalid_argument);
}
