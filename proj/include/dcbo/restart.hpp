#pragma once

#include <optional>
#include <vector>

#include "dcbo/dynamics.hpp"

namespace dcbo {

struct RestartReport {
  std::vector<TrialReport> rounds;
  /// f(p) at the end of each round; non-increasing.
  std::vector<double> round_best_values;
  long total_evaluations = 0;
  long total_iterations = 0;

  const Vector& best_point() const { return rounds.back().final_p; }
  double best_value() const { return round_best_values.back(); }
};

/// Repeated DCBO rounds. Round 0 draws all agents from `init`; every later
/// round puts the previous round's final p in agent 0 and redraws agents
/// 1..N-1. Each round stops on consensus or `stop_per_round.max_iter`.
/// With `total_iteration_budget`, rounds also stop once the summed iteration
/// count reaches the budget (the last round is truncated to fit).
RestartReport run_with_restart(const ObjectiveSpec& objective, const DcboParams& params,
                               const Domain& domain, int n_agents, const InitDistribution& init,
                               const StoppingCriteria& stop_per_round, int n_rounds,
                               const RngPolicy& rng, const RunOptions& options = {},
                               std::optional<long> total_iteration_budget = std::nullopt);

struct RoundDiagnostics {
  int round = 0;
  long iterations = 0;
  /// sum_n |p_{n+1} - p_n| over the round.
  double path_length = 0.0;
  double final_fp = kInfinity;
};

std::vector<RoundDiagnostics> emit_round_diagnostics(const RestartReport& report);

/// Sample Pearson correlation; 0 when either series is constant.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace dcbo
