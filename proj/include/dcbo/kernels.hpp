#pragma once

#include <exception>
#include <mutex>

#include "dcbo/dynamics.hpp"

namespace dcbo::kernels {

/// Runs body(i) for i in [0, n). Parallel mode uses an OpenMP loop; the first
/// exception (lowest agent index) is rethrown after the loop.
template <class Body>
void for_each_agent(Execution exec, int n, Body&& body) {
  if (exec == Execution::Serial) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr error;
  int error_index = n;
  std::mutex mu;
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (i < error_index) {
        error_index = i;
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

/// Arguments shared by every agent in one DCBO iteration.
struct AdvanceContext {
  const DcboParams& params;
  int anisotropic_count;
  const Domain& domain;
  const ObjectiveFn& objective;
  const RngPolicy& rng;
  long iteration;
};

/// Reference loop: moves every agent except `skip` toward p, projects and
/// evaluates it. Noise for agent i is drawn from the (Noise, i, iteration)
/// stream, so the result is independent of loop order.
void advance_agents_serial(Matrix& positions, Vector& values, VectorRef p, int skip,
                           const AdvanceContext& ctx);

/// OpenMP version of advance_agents_serial. Bit-identical output.
void advance_agents_omp(Matrix& positions, Vector& values, VectorRef p, int skip,
                        const AdvanceContext& ctx);

inline void advance_agents(Execution exec, Matrix& positions, Vector& values, VectorRef p, int skip,
                           const AdvanceContext& ctx) {
  if (exec == Execution::Serial) {
    advance_agents_serial(positions, values, p, skip, ctx);
  } else {
    advance_agents_omp(positions, values, p, skip, ctx);
  }
}

}  // namespace dcbo::kernels
