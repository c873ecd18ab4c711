#include <cmath>

#include "dcbo/baselines.hpp"
#include "dcbo/kernels.hpp"

namespace dcbo {

void PsoParams::validate() const {
  if (!(w >= 0.0) || !(c1 >= 0.0) || !(c2 >= 0.0)) throw ConfigError("w, c1, c2 must be >= 0");
  if (!(perturb_std >= 0.0)) throw ConfigError("perturb_std must be >= 0");
  if (!(stall_tol >= 0.0)) throw ConfigError("stall_tol must be >= 0");
  if (stall_window < 0) throw ConfigError("stall_window must be >= 0");
}

PsoState init_pso(const ObjectiveSpec& objective, int n_agents, const InitDistribution& init,
                  const RngPolicy& rng, const RunOptions& options) {
  const SwarmState swarm = init_swarm(objective, n_agents, init, rng, options);
  PsoState state;
  state.positions = swarm.positions;
  state.values = swarm.values;
  state.velocities = Matrix::Zero(swarm.positions.rows(), swarm.positions.cols());
  state.pbest = swarm.positions;
  state.pbest_values = swarm.values;
  state.gbest = swarm.p;
  state.gbest_value = swarm.fp;
  return state;
}

PsoState step_pso(const PsoState& state, const ObjectiveSpec& objective, const PsoParams& params,
                  const Domain& domain, const RngPolicy& rng, const RunOptions& options) {
  PsoState next = state;
  const int n = static_cast<int>(state.positions.cols());
  const int d = static_cast<int>(state.positions.rows());
  const auto it = static_cast<std::uint64_t>(state.iteration);

  kernels::for_each_agent(options.execution, n, [&](int i) {
    const auto agent = static_cast<std::uint64_t>(i);
    CounterStream s1 = rng.stream(StreamPurpose::PsoCognitive, agent, it);
    CounterStream s2 = rng.stream(StreamPurpose::PsoSocial, agent, it);
    auto v = next.velocities.col(i);
    auto x = next.positions.col(i);
    for (int k = 0; k < d; ++k) {
      const double u1 = s1.uniform();
      const double u2 = s2.uniform();
      v[k] = params.w * v[k] + params.c1 * u1 * (state.pbest(k, i) - x[k]) +
             params.c2 * u2 * (state.gbest[k] - x[k]);
    }
    x += v;
    if (params.perturb_std > 0.0) {
      CounterStream sp = rng.stream(StreamPurpose::PsoPerturb, agent, it);
      for (int k = 0; k < d; ++k) x[k] += params.perturb_std * sp.normal();
    }
    domain.project_in_place(x);
    const double fx = objective(x);
    if (std::isnan(fx)) throw NanObjectiveError(i, state.iteration + 1);
    next.values[i] = fx;
    if (fx < next.pbest_values[i]) {
      next.pbest_values[i] = fx;
      next.pbest.col(i) = x;
    }
  });

  // gbest is reduced serially so ties resolve to the lowest index.
  for (int i = 0; i < n; ++i) {
    if (next.pbest_values[i] < next.gbest_value) {
      next.gbest_value = next.pbest_values[i];
      next.gbest = next.pbest.col(i);
    }
  }
  const double delta = state.gbest_value - next.gbest_value;
  const bool stalled = std::isfinite(delta) ? delta < params.stall_tol
                                            : next.gbest_value == state.gbest_value;
  next.stall_count = stalled ? state.stall_count + 1 : 0;
  ++next.iteration;
  return next;
}

TrialReport run_pso(const ObjectiveSpec& objective, const PsoParams& params, const Domain& domain,
                    int n_agents, const InitDistribution& init, const StoppingCriteria& stop,
                    const RngPolicy& rng, const RunOptions& options) {
  params.validate();
  stop.validate();
  PsoState state = init_pso(objective, n_agents, init, rng, options);
  TrialReport report;
  report.evaluations = n_agents;
  report.fp_trace.push_back(state.gbest_value);
  report.diameter_trace.push_back(
      (state.positions.colwise() - state.gbest).colwise().norm().maxCoeff());
  report.termination = Termination::MaxIter;
  while (report.iterations < stop.max_iter) {
    const Vector before = state.gbest;
    state = step_pso(state, objective, params, domain, rng, options);
    ++report.iterations;
    report.evaluations += n_agents;
    report.fp_trace.push_back(state.gbest_value);
    report.p_jump_trace.push_back((state.gbest - before).norm());
    report.diameter_trace.push_back(
        (state.positions.colwise() - state.gbest).colwise().norm().maxCoeff());
    if (params.stall_window > 0 && state.stall_count >= params.stall_window) {
      report.termination = Termination::Stall;
      break;
    }
  }
  report.final_p = state.gbest;
  report.final_fp = state.gbest_value;
  return report;
}

}  // namespace dcbo
