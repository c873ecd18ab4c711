// Acceptance suite: one PASS/FAIL line per criterion. Criteria 1-10 run by
// default; --extended adds criterion 11. --only K runs a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dcbo/baselines.hpp"
#include "dcbo/compsense.hpp"
#include "dcbo/experiment.hpp"
#include "dcbo/param_analysis.hpp"
#include "dcbo/portfolio.hpp"
#include "dcbo/restart.hpp"
#include "oracles.hpp"

using namespace dcbo;

namespace {

// Pinned settings and tolerances.
namespace ac1 {
constexpr int kRuns = 1000;
constexpr int kSteps = 200;
constexpr int kMaxDim = 20;
constexpr int kMaxAgents = 50;
}  // namespace ac1
namespace ac2 {
constexpr int kTrials = 100;
constexpr int kRequired = 95;
}  // namespace ac2
namespace ac3 {
constexpr int kDim = 100;
constexpr int kAgents = 50;
constexpr int kRounds = 30;
constexpr int kExecutions = 20;
constexpr double kSolved = 1e-6;
constexpr double kSolvedFraction = 0.5;
}  // namespace ac3
namespace ac4 {
constexpr long kSamples = 1'000'000;
constexpr double kSigmas = 3.0;
}  // namespace ac4
namespace ac5 {
constexpr long kSamples = 1'000'000;
constexpr double kSigmas = 3.0;
}  // namespace ac5
namespace ac6 {
constexpr int kSwarms = 100;
constexpr double kMinGap = 0.1;
constexpr double kHardTol = 1e-6;
constexpr double kCentroidTol = 1e-12;
}  // namespace ac6
namespace ac7 {
constexpr int kTrials = 500;
constexpr int kAgents = 20;
constexpr int kRounds = 5;
constexpr double kHalfWidth = 5.0;
constexpr double kRadius = 0.5;
constexpr double kSigmas = 3.0;
}  // namespace ac7
namespace ac8 {
constexpr int kInputs = 10'000;
constexpr double kOracleTol = 1e-9;
constexpr double kSumTol = 1e-12;
}  // namespace ac8
namespace ac9 {
constexpr int kInstances = 20;
constexpr int kAssets = 6;
constexpr int kAgents = 100;
constexpr double kMaxDist = 1e-5;
constexpr long kMaxIter = 100'000;
constexpr double kValueTol = 1e-3;
constexpr double kSimplexTol = 1e-10;
constexpr double kRequiredFraction = 0.9;
constexpr double kOracleAgreement = 1e-7;
}  // namespace ac9
namespace ac10 {
constexpr int kDim = 30;
constexpr int kMeasurements = 15;
constexpr int kSparsity = 2;
constexpr int kAgents = 500;
constexpr int kTrials = 50;
constexpr long kMaxIter = 3000;
constexpr double kMaxDist = 1e-6;
constexpr double kRefitTol = 1e-8;
}  // namespace ac10
namespace ac11 {
constexpr int kDim = 80;
constexpr int kAgents = 100;
constexpr int kTrials = 100;
constexpr double kZero = 5e-5;
}  // namespace ac11

const DiffusionCoefficients kBenchParams{0.5, 1.0, 0.4, 0.7};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome monotonicity() {
  auto pick = RngPolicy{101}.stream(StreamPurpose::MonteCarlo, 0, 0);
  const auto names = benchmark_names();
  long violations = 0, moved_best = 0, steps = 0;
  for (int run = 0; run < ac1::kRuns; ++run) {
    int d = 2 + static_cast<int>(pick.uniform() * (ac1::kMaxDim - 1));
    const int n = 1 + static_cast<int>(pick.uniform() * ac1::kMaxAgents);
    const int which = static_cast<int>(pick.uniform() * (names.size() + 2));
    const auto make = [&]() -> ObjectiveSpec {
      if (which < static_cast<int>(names.size())) {
        if (names[which] == "powell") d = 4 * ((d + 3) / 4);
        return ObjectiveRegistry::global().make(names[which], d);
      }
      ObjectiveSpec o = make_sphere(d);
      if (which == static_cast<int>(names.size())) {
        o.domain = Domain::box(d, 0.5, 2.0);
        o.init = InitDistribution::uniform_box(d, 0.5, 2.0);
      } else {
        o.domain = Domain::simplex();
        o.init = InitDistribution::uniform_simplex(d);
      }
      return o;
    };
    const ObjectiveSpec obj = make();
    const double g1 = pick.uniform(0.05, 1.0), g2 = pick.uniform(0.0, 2.0);
    const double gb1 = pick.uniform(0.05, 1.0), gb2 = pick.uniform(0.0, 1.0);
    const DcboParams params(DiffusionCoefficients{g1, g2, gb1, gb2});
    const RngPolicy rng = RngPolicy{202}.for_trial(static_cast<std::uint64_t>(run));
    RunOptions options;
    options.execution = Execution::Serial;
    SwarmState s = init_swarm(obj, n, obj.init, rng, options);
    for (int k = 0; k < ac1::kSteps; ++k) {
      const int best = s.best_index;
      const Vector best_x = s.positions.col(best);
      const double fp = s.fp;
      step_swarm_in_place(s, obj, params, obj.domain, rng, options);
      ++steps;
      if (!(s.fp <= fp)) ++violations;
      if (s.positions.col(best) != best_x || s.values[best] != fp) ++moved_best;
    }
  }
  return {violations == 0 && moved_best == 0,
          fmt("%d runs, %ld steps, fp increases %ld, best agent moved %ld", ac1::kRuns, steps, violations,
              moved_best)};
}

Outcome desk_consensus() {
  const auto obj = make_sphere(10);
  const DcboParams params(kBenchParams, 25);
  int consensus = 0;
  long iters = 0;
  for (int t = 0; t < ac2::kTrials; ++t) {
    const auto r = run_dcbo(obj, params, obj.domain, 50, obj.init, StoppingCriteria{5000L * 10, 1e-7},
                            RngPolicy{303}.for_trial(static_cast<std::uint64_t>(t)));
    if (r.termination == Termination::Consensus) ++consensus;
    iters += r.iterations;
  }
  return {consensus >= ac2::kRequired, fmt("consensus in %d/%d trials (need %d), mean iterations %.1f", consensus,
                                           ac2::kTrials, ac2::kRequired, double(iters) / ac2::kTrials)};
}

Outcome restart_monotone() {
  const auto obj = make_ackley(ac3::kDim);
  const DcboParams params(kBenchParams);
  int monotone = 0, solved = 0;
  double worst = 0.0;
  for (int e = 0; e < ac3::kExecutions; ++e) {
    const auto r = run_with_restart(obj, params, obj.domain, ac3::kAgents, obj.init,
                                    StoppingCriteria{100L * ac3::kDim, 1e-7}, ac3::kRounds,
                                    RngPolicy{404}.for_trial(static_cast<std::uint64_t>(e)));
    bool ok = r.round_best_values.size() == ac3::kRounds;
    for (std::size_t m = 1; m < r.round_best_values.size(); ++m) ok = ok && r.round_best_values[m] <= r.round_best_values[m - 1];
    if (ok) ++monotone;
    if (r.best_value() < ac3::kSolved) ++solved;
    worst = std::max(worst, r.best_value());
  }
  const bool pass = monotone == ac3::kExecutions && solved >= ac3::kSolvedFraction * ac3::kExecutions;
  return {pass, fmt("monotone %d/%d, best < %.0e in %d/%d, worst best %.3e", monotone, ac3::kExecutions,
                    ac3::kSolved, solved, ac3::kExecutions, worst)};
}

Outcome moment_validation() {
  const double g1s[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  const double g2s[] = {0.2, 0.5, 1.0, 1.5, 2.0};
  int bad = 0, cells = 0;
  double worst_z = 0.0;
  for (double g1 : g1s) {
    for (double g2 : g2s) {
      auto s = RngPolicy{505}.stream(StreamPurpose::MonteCarlo, static_cast<std::uint64_t>(cells), 0);
      double s1 = 0, s1sq = 0, s2 = 0, s2sq = 0;
      for (long i = 0; i < ac4::kSamples; ++i) {
        const double x = std::abs(1.0 - g1 + g2 * s.normal());
        s1 += x;
        s1sq += x * x;
        s2 += x * x;
        s2sq += x * x * x * x;
      }
      const double n = static_cast<double>(ac4::kSamples);
      const double m1 = s1 / n, m2 = s2 / n;
      const double se1 = std::sqrt((s1sq / n - m1 * m1) / (n - 1));
      const double se2 = std::sqrt((s2sq / n - m2 * m2) / (n - 1));
      const double z1 = std::abs(folded_normal_abs_mean(1.0 - g1, g2) - m1) / se1;
      const double z2 = std::abs(second_abs_moment(g1, g2) - m2) / se2;
      worst_z = std::max({worst_z, z1, z2});
      if (z1 > ac4::kSigmas) ++bad;
      if (z2 > ac4::kSigmas) ++bad;
      ++cells;
    }
  }
  int contraction_bad = 0, contraction_cells = 0;
  double worst_contraction = 0.0;
  for (int i = 1; i <= 9; ++i) {
    const double gb1 = i / 10.0;
    for (int j = 0; j <= 50; ++j) {
      const double gb2 = gb1 * j / 50.0;
      for (int d : {1, 2, 10, 100}) {
        const double c = isotropic_contraction(gb1, gb2, d);
        worst_contraction = std::max(worst_contraction, c);
        if (!(c < 1.0)) ++contraction_bad;
        ++contraction_cells;
      }
    }
  }
  return {bad == 0 && contraction_bad == 0,
          fmt("%d moment comparisons, %d beyond %.0f SE (max %.2f SE); contraction max %.6f over %d cells", 2 * cells,
              bad, ac4::kSigmas, worst_z, worst_contraction, contraction_cells)};
}

Outcome classification() {
  ConditionCheckOptions opts;
  opts.samples = ac5::kSamples;
  const RngPolicy rng{606};
  const auto bench = check_conditions(kBenchParams, 10, rng, opts);
  const auto small = check_conditions(DiffusionCoefficients{0.5, 1.0, 0.5, 0.2}, 10, rng, opts);
  bool sweep_certifies = false;
  double best_upper = kInfinity;
  for (const auto& m : bench.alpha_sweep) {
    const double upper = m.estimate + ac5::kSigmas * m.std_error;
    best_upper = std::min(best_upper, upper);
    if (upper < 1.0) sweep_certifies = true;
  }
  const bool pass = !bench.b1b_holds && small.b1b_holds && small.prop34_ok && bench.b1a == Verdict::ProvenTrue &&
                    sweep_certifies;
  return {pass, fmt("(0.4,0.7) b1b=%d; (0.5,0.2) b1b=%d bound=%d; (0.5,1) b1a=%s via %s, sweep min upper %.4f",
                    bench.b1b_holds, small.b1b_holds, small.prop34_ok, to_string(bench.b1a).c_str(),
                    bench.b1a_certificate.c_str(), best_upper)};
}

Outcome softmin_limit() {
  auto s = RngPolicy{707}.stream(StreamPurpose::MonteCarlo, 0, 0);
  double worst_hard = 0.0, worst_centroid = 0.0;
  for (int k = 0; k < ac6::kSwarms; ++k) {
    const int d = 1 + static_cast<int>(s.uniform() * 20);
    const int n = 2 + static_cast<int>(s.uniform() * 60);
    Matrix x(d, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < d; ++i) x(i, j) = s.uniform(-10.0, 10.0);
    }
    std::vector<double> levels(n);
    double acc = s.uniform(-5.0, 5.0);
    for (int j = 0; j < n; ++j) {
      levels[j] = acc;
      acc += ac6::kMinGap + s.uniform(0.0, 1.0);
    }
    for (int j = n - 1; j > 0; --j) std::swap(levels[j], levels[static_cast<int>(s.uniform() * (j + 1))]);
    const Vector f = Eigen::Map<const Vector>(levels.data(), n);
    Eigen::Index arg;
    f.minCoeff(&arg);
    worst_hard = std::max(worst_hard, (softmin_consensus(x, f, 1e6) - x.col(arg)).norm());
    worst_centroid = std::max(worst_centroid, (softmin_consensus(x, f, 0.0) - x.rowwise().mean()).norm());
  }
  return {worst_hard <= ac6::kHardTol && worst_centroid <= ac6::kCentroidTol,
          fmt("%d swarms, max |softmin - hardmin| %.3e, max |beta=0 - centroid| %.3e", ac6::kSwarms, worst_hard,
              worst_centroid)};
}

Outcome probability_bound() {
  auto obj = make_ackley(2);
  obj.init = InitDistribution::uniform_box(2, -ac7::kHalfWidth, ac7::kHalfWidth);
  const auto env = ackley_modulus(20.0, 0.2, 2.0 * std::numbers::pi, 2);
  const double eps = env.k(ac7::kRadius);
  // Agent 0 of every later round is the carried point; the rest are fresh.
  const long fresh = ac7::kAgents + static_cast<long>(ac7::kRounds - 1) * (ac7::kAgents - 1);
  const auto bound = success_probability_lower_bound(env, eps, ac7::kHalfWidth, fresh);
  const DcboParams params(kBenchParams);
  int hits = 0;
  for (int t = 0; t < ac7::kTrials; ++t) {
    const auto r = run_with_restart(obj, params, obj.domain, ac7::kAgents, obj.init, StoppingCriteria{1000, 1e-7},
                                    ac7::kRounds, RngPolicy{808}.for_trial(static_cast<std::uint64_t>(t)));
    if (r.best_value() - *obj.known_min < eps) ++hits;
  }
  const double freq = double(hits) / ac7::kTrials;
  const double se = std::sqrt(bound.probability * (1.0 - bound.probability) / ac7::kTrials);
  const double floor = bound.probability - ac7::kSigmas * se;
  return {freq >= floor, fmt("eps %.4f (k^-1 = %.4f), %ld fresh draws, bound %.4f, frequency %.4f (floor %.4f)", eps,
                             bound.radius, fresh, bound.probability, freq, floor)};
}

Outcome simplex_projection() {
  auto s = RngPolicy{909}.stream(StreamPurpose::MonteCarlo, 0, 0);
  double worst = 0.0;
  long infeasible = 0, not_idempotent = 0, total = 0;
  for (int d : {2, 5, 50}) {
    for (int k = 0; k < ac8::kInputs; ++k) {
      Vector x(d);
      const double scale = std::pow(10.0, s.uniform(-2.0, 2.0));
      for (int i = 0; i < d; ++i) x[i] = scale * s.normal() + (k % 3 == 0 ? 1.0 / d : 0.0);
      const Vector y = project_simplex(x);
      worst = std::max(worst, (y - oracle::simplex_active_set(x)).cwiseAbs().maxCoeff());
      if (y.minCoeff() < 0.0 || std::abs(y.sum() - 1.0) > ac8::kSumTol) ++infeasible;
      if (project_simplex(y) != y) ++not_idempotent;
      ++total;
    }
  }
  return {worst <= ac8::kOracleTol && infeasible == 0 && not_idempotent == 0,
          fmt("%ld inputs, max |y - oracle| %.3e, infeasible %ld, not idempotent %ld", total, worst, infeasible,
              not_idempotent)};
}

Outcome portfolio() {
  const DcboParams params(kBenchParams);
  int close = 0, off_simplex = 0;
  double worst = 0.0, worst_oracle_gap = 0.0;
  long iters = 0;
  for (int k = 0; k < ac9::kInstances; ++k) {
    const auto inst = synthetic_portfolio(ac9::kAssets, RngPolicy{1010}.for_trial(static_cast<std::uint64_t>(k)));
    const auto obj = sharpe_objective(inst);
    const auto pga = oracle::sharpe_pga(inst);
    const auto exact = oracle::sharpe_enumeration(inst);
    worst_oracle_gap = std::max(worst_oracle_gap, std::abs(pga.neg_sharpe - exact.neg_sharpe));
    const auto r = run_dcbo(obj, params, obj.domain, ac9::kAgents, obj.init,
                            StoppingCriteria{ac9::kMaxIter, ac9::kMaxDist},
                            RngPolicy{1111}.for_trial(static_cast<std::uint64_t>(k)));
    const double gap = std::abs(r.final_fp - pga.neg_sharpe);
    worst = std::max(worst, gap);
    if (gap <= ac9::kValueTol) ++close;
    if (r.final_p.minCoeff() < -ac9::kSimplexTol || std::abs(r.final_p.sum() - 1.0) > ac9::kSimplexTol) ++off_simplex;
    iters += r.iterations;
  }
  const bool pass = close >= ac9::kRequiredFraction * ac9::kInstances && off_simplex == 0 &&
                    worst_oracle_gap <= ac9::kOracleAgreement;
  return {pass, fmt("within %.0e on %d/%d, worst gap %.3e, off simplex %d, oracle disagreement %.1e, mean iter %.1f",
                    ac9::kValueTol, close, ac9::kInstances, worst, off_simplex, worst_oracle_gap,
                    double(iters) / ac9::kInstances)};
}

Outcome compressed_sensing() {
  CsExperimentConfig c;
  c.d = ac10::kDim;
  c.m = ac10::kMeasurements;
  c.s = ac10::kSparsity;
  c.radii = {4.0, 8.0, 16.0};
  c.trials = ac10::kTrials;
  c.n_agents = ac10::kAgents;
  c.seed = 1212;
  c.params = kBenchParams;
  c.stop = {ac10::kMaxIter, ac10::kMaxDist};
  std::vector<CsTrialRecord> records;
  const auto cells = run_cs_experiment(c, &records);
  const auto signal = reference_signal(c.d, c.s);

  int infeasible = 0, refit_bad = 0, checked = 0;
  double worst_excess = -kInfinity;
  for (const auto& rec : records) {
    if (!rec.p_feasible || !lp_ball_membership(rec.x_hat, 0.5, rec.r)) ++infeasible;
    if (rec.recovery.least_norm) continue;
    const auto inst = make_sensing_instance(c.d, c.m, signal.support, signal.values,
                                            RngPolicy{c.seed}.for_trial(static_cast<std::uint64_t>(rec.trial)));
    const Vector ref = oracle::normal_equations_refit(inst, rec.recovery.support);
    const double excess = rec.recovery.metrics.residual - (inst.A * ref - inst.b).norm();
    worst_excess = std::max(worst_excess, excess);
    if (excess > ac10::kRefitTol) ++refit_bad;
    ++checked;
  }
  const bool trend = cells.back().tpr_mean >= cells.front().tpr_mean;
  std::ostringstream tprs;
  for (const auto& cell : cells) tprs << " r=" << cell.r << ":" << cell.tpr_mean << "/" << cell.fpr_mean;
  return {infeasible == 0 && refit_bad == 0 && trend,
          fmt("infeasible %d/%zu, refit excess max %.2e over %d, tpr/fpr%s", infeasible, records.size(), worst_excess,
              checked, tprs.str().c_str())};
}

Outcome table_spot_check() {
  ExperimentConfig c;
  c.algorithm = Algorithm::Dcbo;
  c.objective = "ackley";
  c.dim = ac11::kDim;
  c.n_agents = ac11::kAgents;
  c.params = kBenchParams;
  c.max_dist = 1e-7;
  c.trials = ac11::kTrials;
  c.seed = 1313;
  const auto result = run_experiment(c);
  return {result.stats.median < ac11::kZero, fmt("median gap %.3e, mean %.3e, min %.3e, mean iterations %.1f",
                                                 result.stats.median, result.stats.mean, result.stats.min,
                                                 result.stats.mean_iterations)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
  bool extended = false;
};

}  // namespace

int main(int argc, char** argv) {
  bool extended = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--extended") == 0) {
      extended = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--extended] [--only K]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Criterion> criteria{
      {1, "monotonicity", monotonicity},
      {2, "desk-scale consensus", desk_consensus},
      {3, "restart monotonicity", restart_monotone},
      {4, "closed-form moments", moment_validation},
      {5, "condition classification", classification},
      {6, "softmin to hardmin limit", softmin_limit},
      {7, "probability lower bound", probability_bound},
      {8, "simplex projection", simplex_projection},
      {9, "portfolio", portfolio},
      {10, "compressed sensing", compressed_sensing},
      {11, "ackley d=80 spot check", table_spot_check, true},
  };
  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    if (only == 0 && c.extended && !extended) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  AC%-2d %-26s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    ++ran;
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
