#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dcbo/experiment.hpp"

using namespace dcbo;

namespace {

TrialRecord record(int id, double f, std::optional<double> gap, long iters) {
  TrialRecord r;
  r.trial_id = id;
  r.final_f = f;
  r.gap = gap;
  r.iterations = iters;
  return r;
}

std::string config_error(const std::string& text) {
  try {
    parse_experiment_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("aggregate statistics") {
  const std::vector<TrialRecord> odd{record(0, 3.0, 3.0, 10), record(1, 1.0, 1.0, 20), record(2, 2.0, 2.0, 30)};
  const auto s = aggregate(odd, "sphere", 4);
  CHECK(s.uses_gap);
  CHECK(s.min == 1.0);
  CHECK(s.mean == 2.0);
  CHECK(s.median == 2.0);
  CHECK(s.mean_iterations == 20.0);
  CHECK(s.count == 3);

  const std::vector<TrialRecord> even{record(0, 4.0, {}, 1), record(1, 1.0, {}, 1), record(2, 3.0, {}, 1),
                                      record(3, 2.0, {}, 1)};
  const auto e = aggregate(even, "custom", 2);
  CHECK_FALSE(e.uses_gap);
  CHECK(e.median == 2.5);
  CHECK(e.mean == 2.5);

  // Gaps take precedence over raw values.
  const std::vector<TrialRecord> shifted{record(0, 5.0, 0.5, 1), record(1, 6.0, 1.5, 1)};
  CHECK(aggregate(shifted, "x", 1).mean == 1.0);
}

TEST_CASE("comparison report rounds to six decimals") {
  AggregateStats a;
  a.objective = "ackley";
  a.dim = 10;
  AggregateStats b = a;
  a.min = 0.0000001;
  b.min = 0.0000004;
  a.mean = 0.1;
  b.mean = 0.2;
  a.median = 0.3;
  b.median = 0.1;
  const auto r = compare_report(a, b);
  CHECK(r.min == Comparison::Tie);
  CHECK(r.mean == Comparison::ABetter);
  CHECK(r.median == Comparison::BBetter);
  CHECK(to_string(r.mean) == "A>B");
  CHECK(to_string(r.min) == "A=B");
  CHECK(to_string(r.median) == "A<B");
  CHECK(compare_report(a, b, 7).min == Comparison::ABetter);

  b.objective = "sphere";
  CHECK_THROWS_AS(compare_report(a, b), ConfigError);
  b.objective = "ackley";
  b.dim = 11;
  CHECK_THROWS_AS(compare_report(a, b), ConfigError);
}

TEST_CASE("config parsing") {
  const auto c = parse_experiment_config(R"({
    "algorithm": "hmpso",
    "objective": "rastrigin",
    "dim": 7,
    "agents": 12,
    "params": [0.5, 0.8, 0.4, 0.6],
    "trials": 3,
    "seed": 18446744073709551615,
    "domain": {"kind": "box", "lo": -2, "hi": 3},
    "format": "json"
  })");
  CHECK(c.algorithm == Algorithm::HmPso);
  CHECK(c.objective == "rastrigin");
  CHECK(c.dim == 7);
  CHECK(c.n_agents == 12);
  CHECK(c.params.gamma2 == 0.8);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.domain.kind == "box");
  CHECK(c.domain.hi == 3.0);
  CHECK(c.format == OutputFormat::Json);
  CHECK(c.resolved_max_iter() == 3500);

  const auto named = parse_experiment_config(R"({"params": {"gamma1": 0.3, "gamma2": 0.2, "gbar1": 0.1, "gbar2": 0.4}})");
  CHECK(named.params.gamma1 == 0.3);
  CHECK(named.params.gbar2 == 0.4);

  // Round trip through JSON.
  const nlohmann::json j = c;
  const auto back = j.get<ExperimentConfig>();
  CHECK(back.algorithm == c.algorithm);
  CHECK(back.seed == c.seed);
  CHECK(back.domain.lo == c.domain.lo);
  CHECK(back.params.gbar2 == c.params.gbar2);
}

TEST_CASE("config errors carry line numbers") {
  CHECK(config_error("{\n  \"dim\": 4,\n  \"agnets\": 3\n}").find("line 3") != std::string::npos);
  CHECK(config_error("{\n  \"dim\": -1\n}").find("line 2") != std::string::npos);
  CHECK(config_error("{\n  \"dim\": 4,\n\n  \"objective\": \"nope\"\n}").find("line 4") != std::string::npos);
  CHECK(config_error("{\n  \"dim\": 4,\n  \"trials\": \n}").find("line 4") != std::string::npos);
  CHECK(config_error("{\"algorithm\": \"sgd\"}").find("algorithm") != std::string::npos);
  CHECK(config_error("{\"params\": [1, 2]}").find("params") != std::string::npos);
  CHECK(config_error("{\"algorithm\": \"pso\", \"restarts\": 2}").find("restarts") != std::string::npos);
  CHECK(config_error("{\"dim\": \"ten\"}") != "");
  CHECK(config_error("[1, 2]") != "");
  CHECK(config_error("{\"max_dist\": 0}").find("max_dist") != std::string::npos);
}

TEST_CASE("algorithm and format names") {
  for (auto a : {Algorithm::Dcbo, Algorithm::SoftminCbo, Algorithm::Pso, Algorithm::HmPso}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK(parse_format("csv") == OutputFormat::Csv);
  CHECK_THROWS_AS(parse_algorithm("DCBO!"), ConfigError);
  CHECK_THROWS_AS(parse_format("xml"), ConfigError);
}

TEST_CASE("experiments are deterministic across worker counts") {
  for (auto algo : {Algorithm::Dcbo, Algorithm::SoftminCbo, Algorithm::Pso, Algorithm::HmPso}) {
    ExperimentConfig c;
    c.algorithm = algo;
    c.objective = "griewank";
    c.dim = 4;
    c.n_agents = 16;
    c.max_iter = 200;
    c.trials = 5;
    c.seed = 42;
    c.workers = 1;
    const auto one = run_experiment(c);
    c.workers = 3;
    const auto three = run_experiment(c);
    REQUIRE(one.trials.size() == 5);
    for (int t = 0; t < 5; ++t) {
      CHECK(one.trials[t].trial_id == t);
      CHECK(one.trials[t].final_f == three.trials[t].final_f);
      CHECK(one.trials[t].iterations == three.trials[t].iterations);
      CHECK(one.trials[t].seed == three.trials[t].seed);
      REQUIRE(one.trials[t].gap);
      CHECK(*one.trials[t].gap == one.trials[t].final_f);
    }
    CHECK(one.stats.median == three.stats.median);
    // Trials draw from distinct streams.
    CHECK(one.trials[0].final_f != one.trials[1].final_f);
    // A single trial matches the same trial run alone.
    const auto alone = run_trial(c, 3, Execution::Serial);
    CHECK(alone.final_f == one.trials[3].final_f);
  }
}

TEST_CASE("restarts and box domains in experiments") {
  ExperimentConfig c;
  c.objective = "rastrigin";
  c.dim = 3;
  c.n_agents = 10;
  c.restarts = 2;
  c.max_iter = 1000;
  const auto r = run_trial(c, 0, Execution::Serial);
  CHECK(r.iterations <= 1000);
  c.restarts = 0;
  c.domain = {"box", 0.5, 1.0};
  const auto boxed = run_trial(c, 0, Execution::Serial);
  // The box excludes the origin; the box minimum separates per coordinate.
  double coord_min = kInfinity;
  for (int k = 0; k <= 100000; ++k) {
    const double x = 0.5 + 0.5 * k / 100000.0;
    coord_min = std::min(coord_min, x * x - 10.0 * std::cos(2.0 * std::numbers::pi * x));
  }
  CHECK(boxed.final_f >= 30.0 + 3.0 * coord_min - 1e-6);
  CHECK(boxed.final_f > 2.0);
}

TEST_CASE("csv writers") {
  std::vector<TrialRecord> recs{record(0, 1.5, 0.5, 7), record(1, 2.0, {}, 9)};
  recs[0].seed = 11;
  recs[0].termination = Termination::Consensus;
  recs[0].fp_trace = {3.0, 2.0, 1.5};
  recs[0].p_jump_trace = {0.1, 0.2};
  recs[0].diameter_trace = {1.0, 0.5, 0.25};
  std::ostringstream out;
  write_trials_csv(out, recs);
  std::istringstream lines(out.str());
  std::string header, row0, row1;
  std::getline(lines, header);
  std::getline(lines, row0);
  std::getline(lines, row1);
  CHECK(header == "trial_id,seed,final_f,f_minus_min,iterations,termination,wall_ms");
  CHECK(row0 == "0,11,1.5,0.5,7,consensus,0.000");
  CHECK(row1 == "1,0,2,,9,max-iter,0.000");

  std::ostringstream traces;
  write_traces_csv(traces, recs);
  CHECK(traces.str() == "trial_id,iteration,fp,p_jump,diameter\n0,0,3,,1\n0,1,2,0.10000000000000001,0.5\n"
                        "0,2,1.5,0.20000000000000001,0.25\n");

  ExperimentResult result;
  result.trials = recs;
  result.stats = aggregate(recs, "custom", 1);
  const auto j = experiment_to_json(result);
  CHECK(j["trials"].size() == 2);
  CHECK(j["trials"][1]["f_minus_min"].is_null());
  CHECK(j["summary"]["count"] == 2);
}
