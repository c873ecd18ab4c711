#include "dcbo/restart.hpp"

#include <cmath>
#include <numeric>

namespace dcbo {

RestartReport run_with_restart(const ObjectiveSpec& objective, const DcboParams& params,
                               const Domain& domain, int n_agents, const InitDistribution& init,
                               const StoppingCriteria& stop_per_round, int n_rounds,
                               const RngPolicy& rng, const RunOptions& options,
                               std::optional<long> total_iteration_budget) {
  if (n_rounds < 1) throw ConfigError("n_rounds must be >= 1");
  if (total_iteration_budget && *total_iteration_budget < 0) {
    throw ConfigError("total iteration budget must be >= 0");
  }
  stop_per_round.validate();
  params.anisotropic_count(n_agents);

  RestartReport report;
  for (int round = 0; round < n_rounds; ++round) {
    StoppingCriteria stop = stop_per_round;
    if (total_iteration_budget) {
      const long remaining = *total_iteration_budget - report.total_iterations;
      if (round > 0 && remaining <= 0) break;
      stop.max_iter = std::min(stop.max_iter, std::max(remaining, 0L));
    }
    const RngPolicy round_rng = rng.with_round(static_cast<std::uint32_t>(round));
    SwarmState state = init_swarm(objective, n_agents, init, round_rng, options);
    if (round > 0) {
      const TrialReport& prev = report.rounds.back();
      state.positions.col(0) = prev.final_p;
      state.values[0] = prev.final_fp;
      const ConsensusChoice choice = select_consensus_point(state.values);
      state.best_index = choice.index;
      state.p = state.positions.col(choice.index);
      state.fp = state.values[choice.index];
    }
    TrialReport round_report =
        run_from_state(std::move(state), objective, params, domain, stop, round_rng, options);
    round_report.evaluations += n_agents;
    report.total_evaluations += round_report.evaluations;
    report.total_iterations += round_report.iterations;
    report.round_best_values.push_back(round_report.final_fp);
    report.rounds.push_back(std::move(round_report));
  }
  return report;
}

std::vector<RoundDiagnostics> emit_round_diagnostics(const RestartReport& report) {
  if (report.rounds.empty()) throw ConfigError("restart report has no rounds");
  std::vector<RoundDiagnostics> rows;
  rows.reserve(report.rounds.size());
  for (std::size_t m = 0; m < report.rounds.size(); ++m) {
    const TrialReport& r = report.rounds[m];
    rows.push_back({static_cast<int>(m) + 1, r.iterations,
                    std::accumulate(r.p_jump_trace.begin(), r.p_jump_trace.end(), 0.0), r.final_fp});
  }
  return rows;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace dcbo
