#include <cmath>

#include "dcbo/baselines.hpp"
#include "dcbo/kernels.hpp"

namespace dcbo {

namespace {

// Agent id used for the shared homogeneous noise stream.
constexpr std::uint64_t kSharedAgent = 0xFFFFFFFFu;

double max_distance_to(const Matrix& positions, const Vector& center) {
  return (positions.colwise() - center).colwise().norm().maxCoeff();
}

void check_values(const Vector& values, long iteration) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) throw NanObjectiveError(static_cast<int>(i), iteration);
  }
}

}  // namespace

void SoftminCboParams::validate() const {
  if (!(h > 0.0)) throw ConfigError("h must be positive");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive and finite");
  if (!(beta_multiplier > 0.0)) throw ConfigError("beta multiplier must be positive");
}

Vector softmin_consensus(const Matrix& positions, const Vector& values, double beta) {
  if (beta < 0.0) throw ConfigError("beta must be non-negative");
  const double fmin = values.minCoeff();
  if (!std::isfinite(fmin)) throw NoFeasibleAgentError();
  Vector weighted = Vector::Zero(positions.rows());
  double total = 0.0;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) continue;
    const double w = std::exp(-beta * (values[k] - fmin));
    weighted += w * positions.col(k);
    total += w;
  }
  return weighted / total;
}

Vector softmin_noise(const SoftminCboParams& params, const RngPolicy& rng, int agent, long iteration,
                     int dim) {
  const std::uint64_t id =
      params.noise == NoiseMode::Homogeneous ? kSharedAgent : static_cast<std::uint64_t>(agent);
  const StreamPurpose purpose =
      params.noise == NoiseMode::Homogeneous ? StreamPurpose::SharedNoise : StreamPurpose::Noise;
  CounterStream s = rng.stream(purpose, id, static_cast<std::uint64_t>(iteration));
  Vector eta(dim);
  for (int k = 0; k < dim; ++k) eta[k] = s.normal();
  return eta;
}

SoftminState init_softmin(const ObjectiveSpec& objective, int n_agents, const InitDistribution& init,
                          const SoftminCboParams& params, const RngPolicy& rng,
                          const RunOptions& options) {
  params.validate();
  const SwarmState swarm = init_swarm(objective, n_agents, init, rng, options);
  SoftminState state;
  state.positions = swarm.positions;
  state.values = swarm.values;
  state.beta = params.beta;
  state.consensus = softmin_consensus(state.positions, state.values, state.beta);
  return state;
}

SoftminState step_softmin_cbo(const SoftminState& state, const ObjectiveSpec& objective,
                              const SoftminCboParams& params, const Domain& domain,
                              const RngPolicy& rng, const RunOptions& options) {
  SoftminState next = state;
  const int n = static_cast<int>(state.positions.cols());
  const int d = static_cast<int>(state.positions.rows());
  const double drift = params.h * params.lambda;
  const double noise_scale = std::sqrt(params.h) * params.sigma;

  // Homogeneous noise is drawn once per step, before the agent loop.
  Vector shared;
  if (params.noise == NoiseMode::Homogeneous) shared = softmin_noise(params, rng, 0, state.iteration, d);

  kernels::for_each_agent(options.execution, n, [&](int i) {
    const Vector eta = params.noise == NoiseMode::Homogeneous
                           ? shared
                           : softmin_noise(params, rng, i, state.iteration, d);
    auto x = next.positions.col(i);
    const Vector diff = state.consensus - x;
    if (params.diffusion == Diffusion::Anisotropic) {
      x += drift * diff + noise_scale * diff.cwiseProduct(eta);
    } else {
      x += drift * diff + (noise_scale * diff.norm()) * eta;
    }
    domain.project_in_place(x);
    next.values[i] = objective(x);
  });
  check_values(next.values, state.iteration + 1);
  ++next.iteration;
  next.beta = state.beta * params.beta_multiplier;
  next.consensus = softmin_consensus(next.positions, next.values, next.beta);
  return next;
}

TrialReport run_softmin_cbo(const ObjectiveSpec& objective, const SoftminCboParams& params,
                            const Domain& domain, int n_agents, const InitDistribution& init,
                            const StoppingCriteria& stop, const RngPolicy& rng,
                            const RunOptions& options) {
  stop.validate();
  SoftminState state = init_softmin(objective, n_agents, init, params, rng, options);
  TrialReport report;
  report.evaluations = n_agents;
  double diameter = max_distance_to(state.positions, state.consensus);
  double fbar = objective(state.consensus);
  report.fp_trace.push_back(fbar);
  report.diameter_trace.push_back(diameter);
  while (report.iterations < stop.max_iter && diameter >= stop.max_dist) {
    const Vector before = state.consensus;
    state = step_softmin_cbo(state, objective, params, domain, rng, options);
    diameter = max_distance_to(state.positions, state.consensus);
    fbar = objective(state.consensus);
    report.fp_trace.push_back(fbar);
    report.p_jump_trace.push_back((state.consensus - before).norm());
    report.diameter_trace.push_back(diameter);
    report.evaluations += n_agents + 1;
    ++report.iterations;
  }
  report.termination = diameter < stop.max_dist ? Termination::Consensus : Termination::MaxIter;
  report.final_p = state.consensus;
  report.final_fp = fbar;
  return report;
}

}  // namespace dcbo
