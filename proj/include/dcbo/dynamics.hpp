#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dcbo/domain.hpp"
#include "dcbo/init.hpp"
#include "dcbo/objective.hpp"
#include "dcbo/rng.hpp"
#include "dcbo/types.hpp"

namespace dcbo {

/// Raw drift/noise coefficients, unvalidated. Used by the condition checks,
/// which also have to classify tuples outside the admissible ranges.
struct DiffusionCoefficients {
  double gamma1 = 0.5;
  double gamma2 = 1.0;
  double gbar1 = 0.4;
  double gbar2 = 0.7;
};

/// Validated coefficients of the anisotropic map F1 (gamma1, gamma2) and the
/// isotropic map F2 (gbar1, gbar2), plus how many agents use F1.
class DcboParams {
 public:
  /// Throws ConfigError unless gamma1, gbar1 in (0,1) and gamma2, gbar2 >= 0.
  DcboParams(double gamma1, double gamma2, double gbar1, double gbar2,
             std::optional<int> mix_count = std::nullopt);
  explicit DcboParams(const DiffusionCoefficients& c, std::optional<int> mix_count = std::nullopt)
      : DcboParams(c.gamma1, c.gamma2, c.gbar1, c.gbar2, mix_count) {}

  /// (0.5, 1, 0.4, 0.7) with half the agents anisotropic.
  static DcboParams benchmark_defaults() { return DcboParams(0.5, 1.0, 0.4, 0.7); }

  double gamma1() const { return c_.gamma1; }
  double gamma2() const { return c_.gamma2; }
  double gbar1() const { return c_.gbar1; }
  double gbar2() const { return c_.gbar2; }
  const DiffusionCoefficients& coefficients() const { return c_; }
  std::optional<int> mix_count() const { return mix_count_; }

  /// Number of agents driven by F1; floor(N/2) unless set explicitly.
  int anisotropic_count(int n_agents) const;

 private:
  DiffusionCoefficients c_;
  std::optional<int> mix_count_;
};

struct StoppingCriteria {
  /// 0 is accepted and yields a report with only the initial state.
  long max_iter = 1000;
  /// Consensus tolerance on max_i |x_i - p|.
  double max_dist = 1e-7;

  void validate() const;
};

/// N agents in R^d with cached values and the hardmin consensus point.
struct SwarmState {
  /// d x N, one column per agent.
  Matrix positions;
  Vector values;
  /// 0-based index of the first agent attaining the minimum value.
  int best_index = 0;
  Vector p;
  double fp = kInfinity;
  long iteration = 0;

  int n_agents() const { return static_cast<int>(positions.cols()); }
  int dim() const { return static_cast<int>(positions.rows()); }
};

enum class Termination { Consensus, MaxIter, Stall };

std::string to_string(Termination t);

struct TrialReport {
  /// f(p_n) for n = 0..iterations.
  std::vector<double> fp_trace;
  /// |p_{n+1} - p_n| for n = 0..iterations-1.
  std::vector<double> p_jump_trace;
  /// max_i |x_i - p_n| for n = 0..iterations.
  std::vector<double> diameter_trace;
  long iterations = 0;
  Termination termination = Termination::MaxIter;
  Vector final_p;
  double final_fp = kInfinity;
  long evaluations = 0;
};

struct RunOptions {
  Execution execution = Execution::Parallel;
  /// Retry budget per agent when the initial draw is infeasible.
  int init_retry_budget = 10'000;
};

struct ConsensusChoice {
  int index = 0;
  bool is_tie = false;
};

/// Smallest index attaining the minimum. Throws NoFeasibleAgentError when
/// every value is +inf.
ConsensusChoice select_consensus_point(std::span<const double> values);
inline ConsensusChoice select_consensus_point(const Vector& values) {
  return select_consensus_point(std::span<const double>(values.data(), values.size()));
}

/// x + gamma1 (p - x) + gamma2 (p - x) .* eta
Vector step_anisotropic(VectorRef x, VectorRef p, VectorRef eta, const DcboParams& params);
/// x + gbar1 (p - x) + gbar2 |p - x| eta / sqrt(d)
Vector step_isotropic(VectorRef x, VectorRef p, VectorRef eta, const DcboParams& params);

/// In-place forms used by the kernels; same arithmetic as above.
void apply_anisotropic(MutVectorRef x, VectorRef p, VectorRef eta, double gamma1, double gamma2);
void apply_isotropic(MutVectorRef x, VectorRef p, VectorRef eta, double gbar1, double gbar2);

/// Draws N agents from `init` (rejection-resampling points outside the
/// objective's domain) and evaluates them.
SwarmState init_swarm(const ObjectiveSpec& objective, int n_agents, const InitDistribution& init,
                      const RngPolicy& rng, const RunOptions& options = {});

/// One DCBO iteration: move every agent except the current best, project,
/// evaluate, reselect the consensus point.
SwarmState step_swarm(const SwarmState& state, const ObjectiveSpec& objective,
                      const DcboParams& params, const Domain& domain, const RngPolicy& rng,
                      const RunOptions& options = {});
void step_swarm_in_place(SwarmState& state, const ObjectiveSpec& objective,
                         const DcboParams& params, const Domain& domain, const RngPolicy& rng,
                         const RunOptions& options = {});

/// max_i |x_i - p|, the stopping quantity.
double swarm_diameter(const SwarmState& state);
/// max_{i,j} |x_i - x_j|; lies in [m, 2m] for m = swarm_diameter.
double pairwise_diameter(const SwarmState& state);

/// Iterates from an existing state until consensus or max_iter.
TrialReport run_from_state(SwarmState state, const ObjectiveSpec& objective,
                           const DcboParams& params, const Domain& domain,
                           const StoppingCriteria& stop, const RngPolicy& rng,
                           const RunOptions& options = {});

/// Single DCBO run.
TrialReport run_dcbo(const ObjectiveSpec& objective, const DcboParams& params, const Domain& domain,
                     int n_agents, const InitDistribution& init, const StoppingCriteria& stop,
                     const RngPolicy& rng, const RunOptions& options = {});

}  // namespace dcbo
