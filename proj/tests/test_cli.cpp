#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dcbo/cli.hpp"
#include "dcbo/types.hpp"

using namespace dcbo;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dcbo_cli");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "dcbo_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("number lists") {
  CHECK(parse_number_list("0.5,1,0.4,0.7") == std::vector<double>{0.5, 1.0, 0.4, 0.7});
  CHECK(parse_number_list(" 1 , 2e-3") == std::vector<double>{1.0, 2e-3});
  CHECK_THROWS_AS(parse_number_list("1,,2"), ConfigError);
  CHECK_THROWS_AS(parse_number_list("1,x"), ConfigError);
  CHECK_THROWS_AS(parse_number_list(""), ConfigError);
}

TEST_CASE("exit codes") {
  CHECK(cli({}).code == kExitConfigError);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"frobnicate"}).code == kExitConfigError);
  CHECK(cli({"run", "--algorithm", "foo"}).code == kExitConfigError);
  CHECK(cli({"run", "--objective", "nope"}).code == kExitConfigError);
  CHECK(cli({"run", "--dim", "0"}).code == kExitConfigError);
  CHECK(cli({"run", "--params", "1,2,3"}).code == kExitConfigError);
  CHECK(cli({"run", "--dim", "abc"}).code == kExitConfigError);
  CHECK(cli({"run", "--config", "/nonexistent/config.json"}).code == kExitConfigError);
  CHECK(cli({"portfolio", "--prices", "/nonexistent/prices.csv"}).code == kExitConfigError);
  CHECK(cli({"check-params", "--params", "0.5,1"}).code == kExitConfigError);
  const auto bad_out = cli({"run", "--objective", "sphere", "--dim", "2", "--max-iter", "5", "--output",
                            "/nonexistent/dir/out.csv"});
  CHECK(bad_out.code == kExitRuntimeError);
  CHECK(bad_out.err.find("error") != std::string::npos);
}

TEST_CASE("run writes csv to stdout") {
  const auto r = cli({"run", "--objective", "sphere", "--dim", "3", "--agents", "10", "--trials", "4",
                      "--max-iter", "50", "--seed", "5"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("trial_id,seed,final_f,f_minus_min,iterations,termination,wall_ms\n", 0) == 0);
  CHECK(count_lines(r.out) == 5);
}

TEST_CASE("run writes files and traces") {
  const auto dir = scratch_dir();
  const auto csv = dir / "run.csv";
  const auto r = cli({"run", "--algorithm", "softmin-cbo", "--objective", "ackley", "--dim", "2", "--agents", "8",
                      "--trials", "2", "--max-iter", "30", "--output", csv.string(), "--traces"});
  REQUIRE(r.code == kExitOk);
  CHECK(count_lines(slurp(csv)) == 3);
  const auto summary = nlohmann::json::parse(slurp(dir / "run.summary.json"));
  CHECK(summary["summary"]["count"] == 2);
  CHECK(summary["config"]["algorithm"] == "softmin-cbo");
  const auto traces = slurp(dir / "run.traces.csv");
  CHECK(traces.rfind("trial_id,iteration,fp,p_jump,diameter\n", 0) == 0);
  CHECK(count_lines(traces) > 2);

  const auto json_path = dir / "run.json";
  const auto j = cli({"run", "--algorithm", "pso", "--objective", "sphere", "--dim", "2", "--max-iter", "20",
                      "--format", "json", "--output", json_path.string()});
  REQUIRE(j.code == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(json_path));
  CHECK(doc["trials"].size() == 1);
  CHECK(doc["config"]["algorithm"] == "pso");
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch_dir();
  const auto cfg = dir / "cfg.json";
  {
    std::ofstream f(cfg);
    f << R"({"objective": "sphere", "dim": 2, "agents": 6, "trials": 3, "max_iter": 20})";
  }
  const auto r = cli({"run", "--config", cfg.string(), "--trials", "2"});
  REQUIRE(r.code == kExitOk);
  CHECK(count_lines(r.out) == 3);

  {
    std::ofstream f(cfg);
    f << "{\n  \"dim\": 2,\n  \"speed\": 3\n}\n";
  }
  const auto bad = cli({"run", "--config", cfg.string()});
  CHECK(bad.code == kExitConfigError);
  CHECK(bad.err.find("line 3") != std::string::npos);
}

TEST_CASE("run is reproducible from the seed") {
  const std::vector<std::string> args{"run", "--objective", "rastrigin", "--dim", "3", "--agents", "10",
                                      "--trials", "3", "--max-iter", "100", "--seed", "9"};
  auto strip_wall = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string out, line;
    while (std::getline(in, line)) out += line.substr(0, line.rfind(',')) + "\n";
    return out;
  };
  auto a = args;
  a.insert(a.end(), {"--workers", "1"});
  auto b = args;
  b.insert(b.end(), {"--workers", "2"});
  CHECK(strip_wall(cli(a).out) == strip_wall(cli(b).out));
}

TEST_CASE("sweep") {
  const auto dir = scratch_dir();
  const auto out = dir / "sweep.csv";
  const auto r = cli({"sweep", "--objectives", "sphere,ackley", "--dim", "2", "--agents", "8", "--trials", "2",
                      "--max-iter", "30", "--versus", "hmpso", "--output", out.string()});
  REQUIRE(r.code == kExitOk);
  CHECK(count_lines(slurp(out)) == 3);
  const auto summary = nlohmann::json::parse(slurp(dir / "sweep.summary.json"));
  CHECK(summary["b"] == "hmpso");
  int total = 0;
  for (const auto& [k, v] : summary["tally"]["mean"].items()) total += v.get<int>();
  CHECK(total == 2);
  CHECK(cli({"sweep", "--algorithm", "pso", "--versus", "pso"}).code == kExitConfigError);
}

TEST_CASE("check-params") {
  const auto r = cli({"check-params", "--params", "0.5,1,0.4,0.7", "--samples", "20000"});
  REQUIRE(r.code == kExitOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["second_moment"].get<double>() == doctest::Approx(1.25));
  CHECK(j["alpha_sweep"].size() == 20);
  CHECK(j.contains("b1a"));
}

TEST_CASE("portfolio") {
  const auto dir = scratch_dir();
  const auto prices = dir / "prices.csv";
  {
    std::ofstream f(prices);
    f << "A,B,C\n100,50,20\n101,50.5,20.1\n102,50.2,20.3\n101.5,51,20.2\n103,51.2,20.6\n";
  }
  const auto r = cli({"portfolio", "--prices", prices.string(), "--agents", "30", "--max-iter", "2000"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("sharpe") != std::string::npos);
  const auto s = cli({"portfolio", "--synthetic-assets", "4", "--algorithm", "softmin-cbo", "--agents", "20",
                      "--max-iter", "200"});
  CHECK(s.code == kExitOk);
  CHECK(cli({"portfolio", "--algorithm", "pso"}).code == kExitConfigError);
}

TEST_CASE("compsense") {
  const auto r = cli({"compsense", "--dim", "20", "--measurements", "10", "--sparsity", "2", "--radii", "4,8",
                      "--trials", "2", "--agents", "30", "--max-iter", "200"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("s,r,", 0) == 0);
  CHECK(count_lines(r.out) == 3);
  CHECK(cli({"compsense", "--sparsity", "3"}).code == kExitConfigError);
  CHECK(cli({"compsense", "--dim", "10", "--measurements", "10"}).code == kExitConfigError);
}

TEST_CASE("restart-demo") {
  const auto r = cli({"restart-demo", "--objective", "rastrigin", "--dim", "3", "--agents", "10", "--restarts",
                      "3", "--max-iter", "100"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("round,iterations,path_length,final_f\n", 0) == 0);
  CHECK(count_lines(r.out) == 5);
}
