#include "dcbo/compsense.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <set>

#include <Eigen/QR>
#include <omp.h>

namespace dcbo {

SensingInstance make_sensing_instance(int d, int m, const std::vector<int>& support,
                                      const std::vector<double>& values, const RngPolicy& rng) {
  if (d < 1 || m < 1) throw ConfigError("d and m must be positive");
  if (m >= d) throw ConfigError("compressed sensing needs m < d");
  if (support.size() != values.size()) throw ConfigError("support and values differ in length");
  std::set<int> seen;
  for (int i : support) {
    if (i < 0 || i >= d) throw ConfigError("support index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw ConfigError("duplicate support index " + std::to_string(i));
  }

  SensingInstance out;
  out.A.resize(m, d);
  for (int j = 0; j < d; ++j) {
    CounterStream s = rng.stream(StreamPurpose::SensingMatrix, static_cast<std::uint64_t>(j), 0);
    for (int i = 0; i < m; ++i) out.A(i, j) = s.normal();
  }
  out.x_true = Vector::Zero(d);
  for (std::size_t k = 0; k < support.size(); ++k) out.x_true[support[k]] = values[k];
  out.support_true.assign(seen.begin(), seen.end());
  out.b = out.A * out.x_true;
  return out;
}

InitDistribution cs_initial_distribution(int d, double r) {
  if (!(r > 0.0)) throw ConfigError("radius must be positive");
  return InitDistribution::custom(d, "uniform[-1,1] shrunk into l0.5 ball", [d, r](CounterStream& s) {
    Vector x(d);
    for (int k = 0; k < d; ++k) x[k] = s.uniform(-1.0, 1.0);
    const double q = lp_quasi_norm(x, 0.5);
    if (q > r) x *= (r / q) * (1.0 - 1e-9);
    return x;
  });
}

ObjectiveSpec cs_objective(const SensingInstance& instance, double r) {
  if (!(r > 0.0)) throw ConfigError("radius must be positive");
  const Matrix A = instance.A;
  const Vector b = instance.b;
  ObjectiveSpec spec{
      .name = "compsense",
      .dim = instance.dim(),
      .eval =
          [A, b, r](VectorRef x) {
            if (lp_quasi_norm(x, 0.5) > r) return kInfinity;
            return 0.5 * (A * x - b).squaredNorm();
          },
      .domain = Domain::lp_ball(0.5, r),
      .known_min = std::nullopt,
      .known_minimizer = std::nullopt,
      .init = cs_initial_distribution(instance.dim(), r),
  };
  return spec;
}

Recovery postprocess_recovery(VectorRef x_hat, const SensingInstance& instance, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("threshold must be positive");
  const int d = instance.dim();
  if (x_hat.size() != d) throw ConfigError("x_hat has the wrong dimension");

  Recovery out;
  for (int i = 0; i < d; ++i) {
    if (std::abs(x_hat[i]) >= threshold) out.support.push_back(i);
  }
  out.x_refit = Vector::Zero(d);
  const auto k = static_cast<Eigen::Index>(out.support.size());
  if (k > 0) {
    Matrix As(instance.measurements(), k);
    for (Eigen::Index j = 0; j < k; ++j) As.col(j) = instance.A.col(out.support[j]);
    Vector z;
    if (k > instance.measurements()) {
      out.least_norm = true;
      z = Eigen::CompleteOrthogonalDecomposition<Matrix>(As).solve(instance.b);
    } else {
      z = Eigen::ColPivHouseholderQR<Matrix>(As).solve(instance.b);
    }
    for (Eigen::Index j = 0; j < k; ++j) out.x_refit[out.support[j]] = z[j];
  }

  std::vector<int> hits;
  std::set_intersection(out.support.begin(), out.support.end(), instance.support_true.begin(),
                        instance.support_true.end(), std::back_inserter(hits));
  const auto n_true = static_cast<double>(instance.support_true.size());
  const auto n_false = static_cast<double>(out.support.size() - hits.size());
  out.metrics.tpr = n_true > 0 ? static_cast<double>(hits.size()) / n_true : 0.0;
  out.metrics.fpr = d > n_true ? n_false / (d - n_true) : 0.0;
  out.metrics.residual = (instance.A * out.x_refit - instance.b).norm();
  return out;
}

ReferenceSignal reference_signal(int d, int s) {
  std::vector<double> pattern;
  double target = 0.0;
  switch (s) {
    case 2:
      pattern = {1.0, -0.6};
      target = 3.4655;
      break;
    case 4:
      pattern = {1.0, -0.8, 0.6, -0.4};
      target = 12.9132;
      break;
    case 6:
      pattern = {1.0, -0.9, 0.8, -0.7, 0.6, -0.5};
      target = 21.3583;
      break;
    default:
      throw ConfigError("reference signals exist for s in {2, 4, 6}, got " + std::to_string(s));
  }
  if (d < s) throw ConfigError("dimension smaller than sparsity");
  ReferenceSignal out;
  Vector x = Vector::Zero(d);
  for (int k = 0; k < s; ++k) {
    const int idx = (2 * k + 1) * d / (2 * s);
    out.support.push_back(idx);
    x[idx] = pattern[k];
  }
  const double scale = target / lp_quasi_norm(x, 0.5);
  for (int k = 0; k < s; ++k) out.values.push_back(pattern[k] * scale);
  x *= scale;
  out.quasi_norm = lp_quasi_norm(x, 0.5);
  return out;
}

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

CsTrialRecord run_cs_trial(const CsExperimentConfig& config, int trial, double r) {
  const ReferenceSignal signal = reference_signal(config.d, config.s);
  const RngPolicy rng = RngPolicy{config.seed}.for_trial(static_cast<std::uint64_t>(trial));
  const SensingInstance instance =
      make_sensing_instance(config.d, config.m, signal.support, signal.values, rng);
  const ObjectiveSpec objective = cs_objective(instance, r);
  RunOptions options;
  options.execution = Execution::Serial;
  const TrialReport report = run_dcbo(objective, DcboParams(config.params), objective.domain,
                                      config.n_agents, objective.init, config.stop, rng, options);
  CsTrialRecord out;
  out.trial = trial;
  out.r = r;
  out.x_hat = report.final_p;
  out.iterations = report.iterations;
  out.p_feasible = std::all_of(report.fp_trace.begin(), report.fp_trace.end(),
                               [](double v) { return std::isfinite(v); });
  out.recovery = postprocess_recovery(report.final_p, instance, config.threshold);
  return out;
}

std::vector<CsCell> run_cs_experiment(const CsExperimentConfig& config,
                                      std::vector<CsTrialRecord>* records) {
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  if (config.radii.empty()) throw ConfigError("radius list is empty");
  DcboParams(config.params).anisotropic_count(config.n_agents);
  config.stop.validate();
  const double qnorm = reference_signal(config.d, config.s).quasi_norm;

  const int n_radii = static_cast<int>(config.radii.size());
  const int total = n_radii * config.trials;
  std::vector<CsTrialRecord> all(static_cast<std::size_t>(total));
  std::exception_ptr failure;
  const int workers = config.workers > 0 ? config.workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int job = 0; job < total; ++job) {
    try {
      all[job] = run_cs_trial(config, job % config.trials, config.radii[job / config.trials]);
    } catch (...) {
#pragma omp critical(cs_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<CsCell> cells;
  for (int ri = 0; ri < n_radii; ++ri) {
    std::vector<double> tpr, fpr;
    CsCell cell;
    cell.s = config.s;
    cell.r = config.radii[ri];
    cell.trials = config.trials;
    cell.signal_quasi_norm = qnorm;
    for (int t = 0; t < config.trials; ++t) {
      const auto& rec = all[static_cast<std::size_t>(ri * config.trials + t)];
      tpr.push_back(rec.recovery.metrics.tpr);
      fpr.push_back(rec.recovery.metrics.fpr);
      if (rec.recovery.least_norm) ++cell.least_norm_refits;
    }
    std::tie(cell.tpr_mean, cell.tpr_se) = mean_and_se(tpr);
    std::tie(cell.fpr_mean, cell.fpr_se) = mean_and_se(fpr);
    cells.push_back(cell);
  }
  if (records) *records = std::move(all);
  return cells;
}

}  // namespace dcbo
