#include "dcbo/dynamics.hpp"

#include <cassert>
#include <cmath>

#include "dcbo/kernels.hpp"

namespace dcbo {

DcboParams::DcboParams(double gamma1, double gamma2, double gbar1, double gbar2,
                       std::optional<int> mix_count)
    : c_{gamma1, gamma2, gbar1, gbar2}, mix_count_(mix_count) {
  if (!(gamma1 > 0.0 && gamma1 < 1.0)) throw ConfigError("gamma1 must lie in (0, 1)");
  if (!(gbar1 > 0.0 && gbar1 < 1.0)) throw ConfigError("gbar1 must lie in (0, 1)");
  if (!(gamma2 >= 0.0) || !std::isfinite(gamma2)) throw ConfigError("gamma2 must be >= 0");
  if (!(gbar2 >= 0.0) || !std::isfinite(gbar2)) throw ConfigError("gbar2 must be >= 0");
  if (mix_count && *mix_count < 0) throw ConfigError("mix_count must be >= 0");
}

int DcboParams::anisotropic_count(int n_agents) const {
  if (!mix_count_) return n_agents / 2;
  if (*mix_count_ > n_agents) {
    throw ConfigError("mix_count " + std::to_string(*mix_count_) + " exceeds the number of agents " +
                      std::to_string(n_agents));
  }
  return *mix_count_;
}

void StoppingCriteria::validate() const {
  if (max_iter < 0) throw ConfigError("max_iter must be >= 0");
  if (!(max_dist > 0.0)) throw ConfigError("max_dist must be positive");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Consensus:
      return "consensus";
    case Termination::MaxIter:
      return "max-iter";
    case Termination::Stall:
      return "stall";
  }
  return "unknown";
}

ConsensusChoice select_consensus_point(std::span<const double> values) {
  ConsensusChoice choice;
  double best = kInfinity;
  int best_index = -1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < best) {
      best = values[i];
      best_index = static_cast<int>(i);
    }
  }
  if (best_index < 0) throw NoFeasibleAgentError();
  choice.index = best_index;
  for (std::size_t i = static_cast<std::size_t>(best_index) + 1; i < values.size(); ++i) {
    if (values[i] == best) {
      choice.is_tie = true;
      break;
    }
  }
  return choice;
}

void apply_anisotropic(MutVectorRef x, VectorRef p, VectorRef eta, double gamma1, double gamma2) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double diff = p[k] - x[k];
    x[k] = x[k] + gamma1 * diff + gamma2 * diff * eta[k];
  }
}

void apply_isotropic(MutVectorRef x, VectorRef p, VectorRef eta, double gbar1, double gbar2) {
  const double dist = (p - x).norm();
  const double scale = gbar2 * dist / std::sqrt(static_cast<double>(x.size()));
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double diff = p[k] - x[k];
    x[k] = x[k] + gbar1 * diff + scale * eta[k];
  }
}

Vector step_anisotropic(VectorRef x, VectorRef p, VectorRef eta, const DcboParams& params) {
  Vector out = x;
  apply_anisotropic(out, p, eta, params.gamma1(), params.gamma2());
  return out;
}

Vector step_isotropic(VectorRef x, VectorRef p, VectorRef eta, const DcboParams& params) {
  Vector out = x;
  apply_isotropic(out, p, eta, params.gbar1(), params.gbar2());
  return out;
}

namespace {

void check_values(const Vector& values, long iteration) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) throw NanObjectiveError(static_cast<int>(i), iteration);
  }
}

void refresh_consensus(SwarmState& state) {
  const ConsensusChoice choice = select_consensus_point(state.values);
  state.best_index = choice.index;
  state.p = state.positions.col(choice.index);
  state.fp = state.values[choice.index];
}

}  // namespace

SwarmState init_swarm(const ObjectiveSpec& objective, int n_agents, const InitDistribution& init,
                      const RngPolicy& rng, const RunOptions& options) {
  if (n_agents < 1) throw ConfigError("n_agents must be positive");
  if (init.dim() != objective.dim) {
    throw ConfigError("initial distribution dimension " + std::to_string(init.dim()) +
                      " does not match objective dimension " + std::to_string(objective.dim));
  }
  SwarmState state;
  state.positions.resize(objective.dim, n_agents);
  state.values.resize(n_agents);

  kernels::for_each_agent(options.execution, n_agents, [&](int i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= options.init_retry_budget) {
        throw InitializationError("could not draw a feasible initial position for agent " +
                                  std::to_string(i) + " after " +
                                  std::to_string(options.init_retry_budget) +
                                  " attempts; the initial distribution is not supported in the domain");
      }
      CounterStream s = rng.stream(StreamPurpose::Init, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(attempt));
      Vector x = init.draw(s);
      if (!objective.domain.contains(x)) continue;
      state.positions.col(i) = x;
      state.values[i] = objective(x);
      break;
    }
  });
  check_values(state.values, 0);
  refresh_consensus(state);
  return state;
}

void step_swarm_in_place(SwarmState& state, const ObjectiveSpec& objective,
                         const DcboParams& params, const Domain& domain, const RngPolicy& rng,
                         const RunOptions& options) {
  const int n = state.n_agents();
  const kernels::AdvanceContext ctx{params, params.anisotropic_count(n), domain, objective.eval, rng,
                                    state.iteration};
#ifndef NDEBUG
  const double fp_before = state.fp;
  const int best_before = state.best_index;
  const Vector p_before = state.p;
#endif
  kernels::advance_agents(options.execution, state.positions, state.values, state.p,
                          state.best_index, ctx);
  check_values(state.values, state.iteration + 1);
  refresh_consensus(state);
  ++state.iteration;
  assert(state.fp <= fp_before);
  assert(state.positions.col(best_before) == p_before);
}

SwarmState step_swarm(const SwarmState& state, const ObjectiveSpec& objective,
                      const DcboParams& params, const Domain& domain, const RngPolicy& rng,
                      const RunOptions& options) {
  SwarmState next = state;
  step_swarm_in_place(next, objective, params, domain, rng, options);
  return next;
}

double swarm_diameter(const SwarmState& state) {
  return (state.positions.colwise() - state.p).colwise().norm().maxCoeff();
}

double pairwise_diameter(const SwarmState& state) {
  double best = 0.0;
  const int n = state.n_agents();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::max(best, (state.positions.col(i) - state.positions.col(j)).norm());
    }
  }
  return best;
}

TrialReport run_from_state(SwarmState state, const ObjectiveSpec& objective,
                           const DcboParams& params, const Domain& domain,
                           const StoppingCriteria& stop, const RngPolicy& rng,
                           const RunOptions& options) {
  stop.validate();
  TrialReport report;
  const long n_moving = state.n_agents() - 1;
  double diameter = swarm_diameter(state);
  report.fp_trace.push_back(state.fp);
  report.diameter_trace.push_back(diameter);

  long steps = 0;
  while (steps < stop.max_iter && diameter >= stop.max_dist) {
    const Vector p_before = state.p;
    step_swarm_in_place(state, objective, params, domain, rng, options);
    diameter = swarm_diameter(state);
    report.fp_trace.push_back(state.fp);
    report.p_jump_trace.push_back((state.p - p_before).norm());
    report.diameter_trace.push_back(diameter);
    report.evaluations += n_moving;
    ++steps;
  }
  report.iterations = steps;
  report.termination = diameter < stop.max_dist ? Termination::Consensus : Termination::MaxIter;
  report.final_p = state.p;
  report.final_fp = state.fp;
  return report;
}

TrialReport run_dcbo(const ObjectiveSpec& objective, const DcboParams& params, const Domain& domain,
                     int n_agents, const InitDistribution& init, const StoppingCriteria& stop,
                     const RngPolicy& rng, const RunOptions& options) {
  stop.validate();
  params.anisotropic_count(n_agents);
  SwarmState state = init_swarm(objective, n_agents, init, rng, options);
  TrialReport report = run_from_state(std::move(state), objective, params, domain, stop, rng, options);
  report.evaluations += n_agents;
  return report;
}

}  // namespace dcbo
