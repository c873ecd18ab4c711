#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dcbo/baselines.hpp"
#include "dcbo/dynamics.hpp"

namespace dcbo {

enum class Algorithm { Dcbo, SoftminCbo, Pso, HmPso };
enum class OutputFormat { Csv, Json };

std::string to_string(Algorithm a);
/// Accepts dcbo, softmin-cbo, pso, hmpso.
Algorithm parse_algorithm(const std::string& name);
std::string to_string(OutputFormat f);
OutputFormat parse_format(const std::string& name);

/// "default" keeps the objective's own domain; "box" projects onto [lo, hi]^d.
struct DomainConfig {
  std::string kind = "default";
  double lo = -1.0;
  double hi = 1.0;
};

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Dcbo;
  std::string objective = "ackley";
  int dim = 10;
  DomainConfig domain;
  int n_agents = 50;
  DiffusionCoefficients params{};
  std::optional<int> mix_count;
  SoftminCboParams softmin{};
  /// w, c1, c2 apply to pso and hmpso; the stall rule only to pso. Plain pso
  /// never perturbs; hmpso perturbs with hm_perturb_std and has no stall stop.
  PsoParams pso{};
  double hm_perturb_std = 0.005;
  /// Unset means 500 * dim.
  std::optional<long> max_iter;
  double max_dist = 1e-7;
  /// Forced restarts; r > 0 runs r + 1 DCBO rounds of at most 100 * dim
  /// iterations each, inside the max_iter total budget.
  int restarts = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string output;
  OutputFormat format = OutputFormat::Csv;
  /// Trial-level worker threads; 0 means the OpenMP default.
  int workers = 0;
  bool traces = false;

  long resolved_max_iter() const { return max_iter.value_or(500L * dim); }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// JSON <-> config. from_json rejects unknown keys.
void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

/// Parses JSON text; errors carry the line number of the problem.
ExperimentConfig parse_experiment_config(const std::string& text);

struct TrialRecord {
  int trial_id = 0;
  std::uint64_t seed = 0;
  double final_f = kInfinity;
  /// final_f - known_min when the objective has a known minimum.
  std::optional<double> gap;
  long iterations = 0;
  Termination termination = Termination::MaxIter;
  double wall_ms = 0.0;
  long evaluations = 0;
  std::vector<double> fp_trace;
  std::vector<double> p_jump_trace;
  std::vector<double> diameter_trace;
};

struct AggregateStats {
  std::string objective;
  int dim = 0;
  /// Statistics are of f - min f when true, of f otherwise.
  bool uses_gap = false;
  double min = 0.0;
  double mean = 0.0;
  /// Middle order statistic; mean of the middle two for even counts.
  double median = 0.0;
  double mean_iterations = 0.0;
  int count = 0;
};

AggregateStats aggregate(const std::vector<TrialRecord>& records, const std::string& objective,
                         int dim);

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
  AggregateStats stats;
};

/// Builds the objective, domain and optimizer described by `config` and runs
/// a single trial. Streams depend only on (seed, trial_id).
TrialRecord run_trial(const ExperimentConfig& config, int trial_id, Execution execution);

/// All trials, in parallel across at most config.workers threads; the
/// records come back in trial order and do not depend on scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config);

enum class Comparison { ABetter, Tie, BBetter };
/// "A>B" when A is better (lower), "A=B", "A<B".
std::string to_string(Comparison c);

struct ComparisonReport {
  Comparison min = Comparison::Tie;
  Comparison mean = Comparison::Tie;
  Comparison median = Comparison::Tie;
};

/// Compares each statistic after rounding to `decimals` places. Throws
/// ConfigError when the two sides describe different objectives.
ComparisonReport compare_report(const AggregateStats& a, const AggregateStats& b, int decimals = 6);

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records);
/// Long-format trace table: trial_id, iteration, fp, p_jump, diameter.
void write_traces_csv(std::ostream& out, const std::vector<TrialRecord>& records);
nlohmann::json stats_to_json(const AggregateStats& s);
/// Config, aggregates and per-trial records. wall_ms is the only
/// non-deterministic field.
nlohmann::json experiment_to_json(const ExperimentResult& result);

}  // namespace dcbo
