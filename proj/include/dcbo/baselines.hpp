#pragma once

#include "dcbo/dynamics.hpp"

namespace dcbo {

// ---------------------------------------------------------------------------
// Discretized softmin CBO (Euler-Maruyama).

enum class NoiseMode { Heterogeneous, Homogeneous };
enum class Diffusion { Anisotropic, Isotropic };

struct SoftminCboParams {
  double h = 0.01;
  double lambda = 0.5;
  double sigma = 1.0;
  double beta = 10.0;
  NoiseMode noise = NoiseMode::Heterogeneous;
  Diffusion diffusion = Diffusion::Anisotropic;
  /// beta is multiplied by this after every step (1 = fixed beta).
  double beta_multiplier = 1.0;

  void validate() const;
};

/// sum_k x_k w_k / sum_k w_k with w_k = exp(-beta (f_k - min f)); agents with
/// +inf values get weight 0. beta >= 0.
Vector softmin_consensus(const Matrix& positions, const Vector& values, double beta);

struct SoftminState {
  Matrix positions;
  Vector values;
  /// Weighted consensus x_bar.
  Vector consensus;
  double beta = 0.0;
  long iteration = 0;
};

SoftminState init_softmin(const ObjectiveSpec& objective, int n_agents, const InitDistribution& init,
                          const SoftminCboParams& params, const RngPolicy& rng,
                          const RunOptions& options = {});

/// x_i += h lambda (x_bar - x_i) + sqrt(h) sigma G(x_bar - x_i) eta_i. In
/// homogeneous mode a single eta is shared by all agents within the step.
SoftminState step_softmin_cbo(const SoftminState& state, const ObjectiveSpec& objective,
                              const SoftminCboParams& params, const Domain& domain,
                              const RngPolicy& rng, const RunOptions& options = {});

/// The noise vector agent i receives at a given iteration (exposed for tests).
Vector softmin_noise(const SoftminCboParams& params, const RngPolicy& rng, int agent, long iteration,
                     int dim);

/// Runs until max_i |x_i - x_bar| < max_dist or max_iter. fp_trace records
/// f(x_bar_n), which need not be monotone.
TrialReport run_softmin_cbo(const ObjectiveSpec& objective, const SoftminCboParams& params,
                            const Domain& domain, int n_agents, const InitDistribution& init,
                            const StoppingCriteria& stop, const RngPolicy& rng,
                            const RunOptions& options = {});

// ---------------------------------------------------------------------------
// Global-best PSO and hmPSO (PSO with Gaussian position perturbation).

struct PsoParams {
  double w = 0.729;
  double c1 = 1.5;
  double c2 = 1.5;
  /// Std of the per-coordinate position perturbation; 0 for plain PSO.
  double perturb_std = 0.0;
  /// Stop when |delta gbest| < stall_tol for stall_window consecutive
  /// iterations; stall_window = 0 disables the check.
  double stall_tol = 1e-10;
  int stall_window = 200;

  static PsoParams plain() { return {}; }
  static PsoParams hm() { return {0.729, 1.5, 1.5, 0.005, 1e-10, 0}; }

  /// Requires w, c1, c2 >= 0 (zero is allowed to freeze the swarm).
  void validate() const;
};

struct PsoState {
  Matrix positions;
  Matrix velocities;
  Matrix pbest;
  Vector values;
  Vector pbest_values;
  Vector gbest;
  double gbest_value = kInfinity;
  long iteration = 0;
  int stall_count = 0;
};

PsoState init_pso(const ObjectiveSpec& objective, int n_agents, const InitDistribution& init,
                  const RngPolicy& rng, const RunOptions& options = {});

PsoState step_pso(const PsoState& state, const ObjectiveSpec& objective, const PsoParams& params,
                  const Domain& domain, const RngPolicy& rng, const RunOptions& options = {});

/// Runs until max_iter or the stall rule; stop.max_dist is not used.
/// fp_trace records the gbest value (non-increasing).
TrialReport run_pso(const ObjectiveSpec& objective, const PsoParams& params, const Domain& domain,
                    int n_agents, const InitDistribution& init, const StoppingCriteria& stop,
                    const RngPolicy& rng, const RunOptions& options = {});

}  // namespace dcbo
