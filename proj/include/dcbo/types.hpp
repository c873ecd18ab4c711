#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dcbo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;
using MutVectorRef = Eigen::Ref<Eigen::VectorXd>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Serial runs the reference loops; Parallel runs the OpenMP kernels.
/// Both produce bit-identical trajectories.
enum class Execution { Serial, Parallel };

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Rejection sampling could not place an agent inside the feasible set.
class InitializationError : public Error {
 public:
  using Error::Error;
};

/// The objective returned NaN for some agent.
class NanObjectiveError : public Error {
 public:
  NanObjectiveError(int agent, long iteration)
      : Error("objective returned NaN for agent " + std::to_string(agent) +
              " at iteration " + std::to_string(iteration)),
        agent_(agent),
        iteration_(iteration) {}

  int agent() const { return agent_; }
  long iteration() const { return iteration_; }

 private:
  int agent_;
  long iteration_;
};

/// Every agent has value +inf.
class NoFeasibleAgentError : public Error {
 public:
  NoFeasibleAgentError() : Error("no feasible agent: all objective values are +inf") {}
};

}  // namespace dcbo
