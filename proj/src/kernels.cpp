#include "dcbo/kernels.hpp"

namespace dcbo::kernels {

namespace {

inline void advance_one(Matrix& positions, Vector& values, VectorRef p, int i, Vector& eta,
                        const AdvanceContext& ctx) {
  CounterStream s = ctx.rng.stream(StreamPurpose::Noise, static_cast<std::uint64_t>(i),
                                   static_cast<std::uint64_t>(ctx.iteration));
  for (Eigen::Index k = 0; k < eta.size(); ++k) eta[k] = s.normal();
  auto x = positions.col(i);
  if (i < ctx.anisotropic_count) {
    apply_anisotropic(x, p, eta, ctx.params.gamma1(), ctx.params.gamma2());
  } else {
    apply_isotropic(x, p, eta, ctx.params.gbar1(), ctx.params.gbar2());
  }
  ctx.domain.project_in_place(x);
  values[i] = ctx.objective(x);
}

}  // namespace

void advance_agents_serial(Matrix& positions, Vector& values, VectorRef p, int skip,
                           const AdvanceContext& ctx) {
  const int n = static_cast<int>(positions.cols());
  Vector eta(positions.rows());
  for (int i = 0; i < n; ++i) {
    if (i == skip) continue;
    advance_one(positions, values, p, i, eta, ctx);
  }
}

void advance_agents_omp(Matrix& positions, Vector& values, VectorRef p, int skip,
                        const AdvanceContext& ctx) {
  const int n = static_cast<int>(positions.cols());
  const Eigen::Index d = positions.rows();
  std::exception_ptr error;
  int error_index = n;
#pragma omp parallel
  {
    Vector eta(d);
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      if (i == skip) continue;
      try {
        advance_one(positions, values, p, i, eta, ctx);
      } catch (...) {
#pragma omp critical(dcbo_kernel_error)
        {
          if (i < error_index) {
            error_index = i;
            error = std::current_exception();
          }
        }
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace dcbo::kernels
