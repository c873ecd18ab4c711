#pragma once

#include <cstdint>
#include <vector>

#include "dcbo/dynamics.hpp"

namespace dcbo {

struct SensingInstance {
  /// m x d, i.i.d. standard normal.
  Matrix A;
  Vector b;
  Vector x_true;
  /// Sorted, 0-based.
  std::vector<int> support_true;

  int dim() const { return static_cast<int>(A.cols()); }
  int measurements() const { return static_cast<int>(A.rows()); }
};

/// Draws A from the SensingMatrix stream of `rng` and sets b = A x_true.
/// Requires m < d, |support| = |values| and distinct in-range indices.
SensingInstance make_sensing_instance(int d, int m, const std::vector<int>& support,
                                      const std::vector<double>& values, const RngPolicy& rng);

/// 1/2 |Ax - b|^2 on the l^0.5 ball of radius r, +inf outside. Agents start
/// uniform on [-1,1]^d, shrunk into the ball when they fall outside it.
ObjectiveSpec cs_objective(const SensingInstance& instance, double r);

/// The initial distribution used by cs_objective.
InitDistribution cs_initial_distribution(int d, double r);

struct RecoveryMetrics {
  double tpr = 0.0;
  double fpr = 0.0;
  /// |A x_refit - b|.
  double residual = 0.0;
};

struct Recovery {
  Vector x_refit;
  std::vector<int> support;
  RecoveryMetrics metrics;
  /// |support| > m, so the refit is the least-norm solution.
  bool least_norm = false;
};

/// Hard-thresholds |x_hat_i| < threshold to zero, then refits min |A_S z - b|
/// on the surviving support S.
Recovery postprocess_recovery(VectorRef x_hat, const SensingInstance& instance,
                              double threshold = 0.01);

/// Fixed s-sparse test signal in R^d for s in {2, 4, 6}, scaled to l^0.5
/// quasi-norm 3.4655, 12.9132 and 21.3583 respectively.
struct ReferenceSignal {
  std::vector<int> support;
  std::vector<double> values;
  double quasi_norm = 0.0;
};
ReferenceSignal reference_signal(int d, int s);

struct CsExperimentConfig {
  int d = 100;
  int m = 40;
  int s = 2;
  std::vector<double> radii{6, 12, 18, 24, 30};
  int trials = 100;
  int n_agents = 200;
  std::uint64_t seed = 0;
  DiffusionCoefficients params{};
  StoppingCriteria stop{};
  double threshold = 0.01;
  /// Worker threads across trials; 0 means the OpenMP default.
  int workers = 0;
};

struct CsTrialRecord {
  int trial = 0;
  double r = 0.0;
  Vector x_hat;
  Recovery recovery;
  long iterations = 0;
  /// Every fp_trace entry was finite, i.e. p stayed in the ball.
  bool p_feasible = true;
};

struct CsCell {
  int s = 0;
  double r = 0.0;
  int trials = 0;
  double tpr_mean = 0.0;
  double tpr_se = 0.0;
  double fpr_mean = 0.0;
  double fpr_se = 0.0;
  double signal_quasi_norm = 0.0;
  int least_norm_refits = 0;
};

/// One DCBO run on trial `trial` (fresh A) at radius r.
CsTrialRecord run_cs_trial(const CsExperimentConfig& config, int trial, double r);

/// All trials for every radius, aggregated per (s, r) in radius order.
/// Trial records are returned through `records` when non-null.
std::vector<CsCell> run_cs_experiment(const CsExperimentConfig& config,
                                      std::vector<CsTrialRecord>* records = nullptr);

/// Sample mean and standard error (n - 1 divisor; 0 for n < 2).
std::pair<double, double> mean_and_se(const std::vector<double>& xs);

}  // namespace dcbo
