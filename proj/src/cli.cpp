#include "dcbo/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dcbo/compsense.hpp"
#include "dcbo/experiment.hpp"
#include "dcbo/param_analysis.hpp"
#include "dcbo/portfolio.hpp"
#include "dcbo/restart.hpp"

namespace dcbo {

using nlohmann::json;

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first == std::string::npos) throw ConfigError("empty entry in list '" + text + "'");
    item = item.substr(first, last - first + 1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || end != item.data() + item.size()) {
      throw ConfigError("not a number: '" + item + "' in '" + text + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open output file " + path);
  return out;
}

/// Writes `content` to `path`, or to `fallback` when path is empty.
void emit(const std::string& path, const std::string& content, std::ostream& fallback) {
  if (path.empty()) {
    fallback << content;
    return;
  }
  auto f = open_output(path);
  f << content;
  if (!f) throw Error("failed writing " + path);
}

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

DiffusionCoefficients parse_params(const std::string& text) {
  const auto v = parse_number_list(text);
  if (v.size() != 4) throw ConfigError("--params expects g1,g2,gb1,gb2");
  return {v[0], v[1], v[2], v[3]};
}

/// Flags shared by run and sweep. Unset flags leave the config untouched.
struct ExperimentFlags {
  std::optional<std::string> config;
  std::optional<std::string> algorithm;
  std::optional<std::string> objective;
  std::optional<int> dim;
  std::optional<int> agents;
  std::optional<std::string> params;
  std::optional<int> mix_count;
  std::optional<long> max_iter;
  std::optional<double> max_dist;
  std::optional<int> restarts;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> format;
  std::optional<int> workers;
  bool traces = false;
  std::optional<double> beta;
  std::optional<std::string> noise;
  std::optional<double> perturb_std;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON experiment config; flags override it");
    app->add_option("--algorithm", algorithm, "dcbo, softmin-cbo, pso or hmpso");
    app->add_option("--objective", objective, "objective name");
    app->add_option("--dim", dim, "dimension");
    app->add_option("--agents", agents, "number of agents N");
    app->add_option("--params", params, "gamma1,gamma2,gbar1,gbar2");
    app->add_option("--mix-count", mix_count, "agents using the anisotropic map");
    app->add_option("--max-iter", max_iter, "iteration budget (default 500*dim)");
    app->add_option("--max-dist", max_dist, "consensus tolerance");
    app->add_option("--restarts", restarts, "forced restarts (dcbo)");
    app->add_option("--trials", trials, "number of trials");
    app->add_option("--seed", seed, "64-bit seed");
    app->add_option("--output", output, "output path");
    app->add_option("--format", format, "csv or json");
    app->add_option("--workers", workers, "trial-level worker threads");
    app->add_flag("--traces", traces, "write per-iteration traces");
    app->add_option("--beta", beta, "softmin inverse temperature");
    app->add_option("--noise", noise, "softmin noise: heterogeneous or homogeneous");
    app->add_option("--perturb-std", perturb_std, "hmPSO perturbation std");
  }

  ExperimentConfig build() const {
    ExperimentConfig c = config ? parse_experiment_config(read_file(*config)) : ExperimentConfig{};
    if (algorithm) c.algorithm = parse_algorithm(*algorithm);
    if (objective) c.objective = *objective;
    if (dim) c.dim = *dim;
    if (agents) c.n_agents = *agents;
    if (params) c.params = parse_params(*params);
    if (mix_count) c.mix_count = *mix_count;
    if (max_iter) c.max_iter = *max_iter;
    if (max_dist) c.max_dist = *max_dist;
    if (restarts) c.restarts = *restarts;
    if (trials) c.trials = *trials;
    if (seed) c.seed = *seed;
    if (output) c.output = *output;
    if (format) c.format = parse_format(*format);
    if (workers) c.workers = *workers;
    if (traces) c.traces = true;
    if (beta) c.softmin.beta = *beta;
    if (noise) {
      if (*noise != "homogeneous" && *noise != "heterogeneous") {
        throw ConfigError("--noise must be homogeneous or heterogeneous");
      }
      c.softmin.noise = *noise == "homogeneous" ? NoiseMode::Homogeneous : NoiseMode::Heterogeneous;
    }
    if (perturb_std) c.hm_perturb_std = *perturb_std;
    c.validate();
    return c;
  }
};

void write_experiment(const ExperimentResult& result, std::ostream& out) {
  const ExperimentConfig& c = result.config;
  if (c.format == OutputFormat::Json) {
    emit(c.output, experiment_to_json(result).dump(2) + "\n", out);
    return;
  }
  std::ostringstream csv;
  write_trials_csv(csv, result.trials);
  json summary{{"config", c}, {"summary", stats_to_json(result.stats)}};
  if (c.output.empty()) {
    out << csv.str();
    return;
  }
  emit(c.output, csv.str(), out);
  emit(sibling(c.output, ".summary.json"), summary.dump(2) + "\n", out);
  if (c.traces) {
    std::ostringstream traces;
    write_traces_csv(traces, result.trials);
    emit(sibling(c.output, ".traces.csv"), traces.str(), out);
  }
}

int cmd_run(const ExperimentFlags& flags, std::ostream& out) {
  const ExperimentConfig config = flags.build();
  write_experiment(run_experiment(config), out);
  return kExitOk;
}

struct SweepFlags {
  std::optional<std::string> versus;
  std::optional<std::string> objectives;
};

int cmd_sweep(const ExperimentFlags& flags, const SweepFlags& sweep, std::ostream& out) {
  ExperimentConfig a = flags.build();
  ExperimentConfig b = a;
  b.algorithm = parse_algorithm(sweep.versus.value_or("pso"));
  b.restarts = 0;
  if (a.algorithm == b.algorithm) throw ConfigError("sweep needs two different algorithms");

  std::vector<std::string> names;
  if (sweep.objectives) {
    std::stringstream ss(*sweep.objectives);
    for (std::string n; std::getline(ss, n, ',');) names.push_back(n);
  } else {
    names = benchmark_names();
  }

  std::ostringstream csv;
  csv << std::setprecision(17);
  csv << "objective,dim,statistic,a_min,a_mean,a_median,a_mean_iter,b_min,b_mean,b_median,b_mean_iter,"
         "cmp_min,cmp_mean,cmp_median\n";
  std::map<std::string, std::map<std::string, int>> tally;
  for (const std::string& stat : {"min", "mean", "median"}) {
    for (const std::string& cmp : {"A>B", "A=B", "A<B"}) tally[stat][cmp] = 0;
  }
  json skipped = json::array();
  for (const auto& name : names) {
    a.objective = b.objective = name;
    try {
      a.validate();
      b.validate();
    } catch (const ConfigError& e) {
      skipped.push_back({{"objective", name}, {"reason", e.what()}});
      continue;
    }
    const AggregateStats sa = run_experiment(a).stats;
    const AggregateStats sb = run_experiment(b).stats;
    const ComparisonReport cmp = compare_report(sa, sb);
    ++tally["min"][to_string(cmp.min)];
    ++tally["mean"][to_string(cmp.mean)];
    ++tally["median"][to_string(cmp.median)];
    csv << name << ',' << a.dim << ',' << (sa.uses_gap ? "f_minus_min" : "f") << ',' << sa.min << ','
        << sa.mean << ',' << sa.median << ',' << sa.mean_iterations << ',' << sb.min << ',' << sb.mean << ','
        << sb.median << ',' << sb.mean_iterations << ',' << to_string(cmp.min) << ',' << to_string(cmp.mean)
        << ',' << to_string(cmp.median) << '\n';
  }
  json summary{{"a", to_string(a.algorithm)},
               {"b", to_string(b.algorithm)},
               {"dim", a.dim},
               {"trials", a.trials},
               {"decimals", 6},
               {"tally", tally},
               {"skipped", skipped}};
  if (a.output.empty()) {
    out << csv.str() << summary.dump(2) << "\n";
  } else {
    emit(a.output, csv.str(), out);
    emit(sibling(a.output, ".summary.json"), summary.dump(2) + "\n", out);
  }
  return kExitOk;
}

struct CheckFlags {
  std::string params = "0.5,1,0.4,0.7";
  int dim = 10;
  std::uint64_t seed = 0;
  long samples = 1'000'000;
  std::optional<std::string> output;
};

int cmd_check_params(const CheckFlags& flags, std::ostream& out) {
  if (flags.dim < 1) throw ConfigError("--dim must be >= 1");
  const DiffusionCoefficients c = parse_params(flags.params);
  ConditionCheckOptions options;
  options.samples = flags.samples;
  const ConditionReport r = check_conditions(c, flags.dim, RngPolicy{flags.seed}, options);
  json sweep = json::array();
  for (const auto& m : r.alpha_sweep) {
    sweep.push_back({{"alpha", m.alpha}, {"estimate", m.estimate}, {"std_error", m.std_error}});
  }
  const json report{{"params", {c.gamma1, c.gamma2, c.gbar1, c.gbar2}},
                    {"dim", flags.dim},
                    {"samples", flags.samples},
                    {"b1a", to_string(r.b1a)},
                    {"b1a_certificate", r.b1a_certificate},
                    {"first_moment", r.b2_value},
                    {"second_moment", r.b3_value},
                    {"log_moment", r.log_moment},
                    {"log_moment_std_error", r.log_moment_std_error},
                    {"alpha_sweep", sweep},
                    {"b1b", r.b1b_holds},
                    {"isotropic_contraction", r.isotropic_contraction},
                    {"isotropic_bound_ok", r.prop34_ok}};
  emit(flags.output.value_or(""), report.dump(2) + "\n", out);
  return kExitOk;
}

struct PortfolioFlags {
  std::optional<std::string> prices;
  int synthetic_assets = 6;
  std::string algorithm = "dcbo";
  int agents = 100;
  std::string params = "0.5,1,0.4,0.7";
  double max_dist = 1e-5;
  long max_iter = 10'000;
  int trials = 1;
  std::uint64_t seed = 0;
  double beta = 1e4;
  std::string noise = "homogeneous";
  std::optional<std::string> output;
};

int cmd_portfolio(const PortfolioFlags& flags, std::ostream& out) {
  const PortfolioInstance instance = flags.prices ? ingest_returns_file(*flags.prices)
                                                  : synthetic_portfolio(flags.synthetic_assets, RngPolicy{flags.seed});
  const ObjectiveSpec objective = sharpe_objective(instance);
  const Algorithm algorithm = parse_algorithm(flags.algorithm);
  if (algorithm != Algorithm::Dcbo && algorithm != Algorithm::SoftminCbo) {
    throw ConfigError("portfolio supports dcbo and softmin-cbo");
  }
  if (flags.trials < 1) throw ConfigError("--trials must be >= 1");
  const StoppingCriteria stop{flags.max_iter, flags.max_dist};
  stop.validate();
  const DcboParams params(parse_params(flags.params));
  SoftminCboParams softmin;
  softmin.beta = flags.beta;
  if (flags.noise != "homogeneous" && flags.noise != "heterogeneous") {
    throw ConfigError("--noise must be homogeneous or heterogeneous");
  }
  softmin.noise = flags.noise == "homogeneous" ? NoiseMode::Homogeneous : NoiseMode::Heterogeneous;
  softmin.validate();

  std::ostringstream csv;
  csv << std::setprecision(17) << "trial_id,seed,iterations,termination,neg_sharpe";
  for (const auto& name : instance.asset_names) csv << ",w_" << name;
  csv << '\n';
  double mean_value = 0.0, mean_iters = 0.0;
  for (int t = 0; t < flags.trials; ++t) {
    const RngPolicy rng = RngPolicy{flags.seed}.for_trial(static_cast<std::uint64_t>(t));
    const TrialReport r =
        algorithm == Algorithm::Dcbo
            ? run_dcbo(objective, params, objective.domain, flags.agents, objective.init, stop, rng)
            : run_softmin_cbo(objective, softmin, objective.domain, flags.agents, objective.init, stop, rng);
    csv << t << ',' << rng.trial_seed() << ',' << r.iterations << ',' << to_string(r.termination) << ','
        << r.final_fp;
    for (Eigen::Index k = 0; k < r.final_p.size(); ++k) csv << ',' << r.final_p[k];
    csv << '\n';
    mean_value += r.final_fp / flags.trials;
    mean_iters += static_cast<double>(r.iterations) / flags.trials;
  }
  const json summary{{"algorithm", to_string(algorithm)},
                     {"assets", instance.asset_names},
                     {"trials", flags.trials},
                     {"mean_neg_sharpe", mean_value},
                     {"mean_iterations", mean_iters}};
  if (!flags.output) {
    out << csv.str() << summary.dump(2) << "\n";
  } else {
    emit(*flags.output, csv.str(), out);
    emit(sibling(*flags.output, ".summary.json"), summary.dump(2) + "\n", out);
  }
  return kExitOk;
}

struct CompsenseFlags {
  std::optional<std::string> config;
  std::optional<int> dim;
  std::optional<int> measurements;
  std::optional<int> sparsity;
  std::optional<std::string> radii;
  std::optional<int> trials;
  std::optional<int> agents;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> params;
  std::optional<long> max_iter;
  std::optional<double> max_dist;
  std::optional<int> workers;
  std::optional<std::string> output;
};

CsExperimentConfig cs_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("compsense config: ") + e.what());
  }
  CsExperimentConfig c;
  bool max_iter_set = false;
  for (const auto& [key, v] : j.items()) {
    try {
      if (key == "d") c.d = v.get<int>();
      else if (key == "m") c.m = v.get<int>();
      else if (key == "s") c.s = v.get<int>();
      else if (key == "r") c.radii = v.is_array() ? v.get<std::vector<double>>() : std::vector<double>{v.get<double>()};
      else if (key == "trials") c.trials = v.get<int>();
      else if (key == "N") c.n_agents = v.get<int>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "params") {
        const auto p = v.get<std::vector<double>>();
        if (p.size() != 4) throw ConfigError("params expects 4 numbers");
        c.params = {p[0], p[1], p[2], p[3]};
      } else if (key == "max_iter") {
        c.stop.max_iter = v.get<long>();
        max_iter_set = true;
      } else if (key == "max_dist") c.stop.max_dist = v.get<double>();
      else if (key == "threshold") c.threshold = v.get<double>();
      else if (key == "workers") c.workers = v.get<int>();
      else throw ConfigError("unknown key");
    } catch (const json::exception&) {
      throw ConfigError("compsense config: bad value for '" + key + "'");
    } catch (const ConfigError& e) {
      throw ConfigError("compsense config: '" + key + "': " + e.what());
    }
  }
  if (!max_iter_set) c.stop.max_iter = 100L * c.d;
  return c;
}

int cmd_compsense(const CompsenseFlags& flags, std::ostream& out) {
  CsExperimentConfig c;
  if (flags.config) {
    c = cs_config_from_json(read_file(*flags.config));
  } else {
    c.stop.max_iter = 100L * c.d;
  }
  if (flags.dim) {
    c.d = *flags.dim;
    if (!flags.max_iter && !flags.config) c.stop.max_iter = 100L * c.d;
  }
  if (flags.measurements) c.m = *flags.measurements;
  if (flags.sparsity) c.s = *flags.sparsity;
  if (flags.radii) c.radii = parse_number_list(*flags.radii);
  if (flags.trials) c.trials = *flags.trials;
  if (flags.agents) c.n_agents = *flags.agents;
  if (flags.seed) c.seed = *flags.seed;
  if (flags.params) c.params = parse_params(*flags.params);
  if (flags.max_iter) c.stop.max_iter = *flags.max_iter;
  if (flags.max_dist) c.stop.max_dist = *flags.max_dist;
  if (flags.workers) c.workers = *flags.workers;

  const std::vector<CsCell> cells = run_cs_experiment(c);
  std::ostringstream csv;
  csv << "s,r,signal_quasi_norm,trials,tpr_mean,tpr_se,fpr_mean,fpr_se,least_norm_refits\n" << std::fixed;
  for (const auto& cell : cells) {
    csv << cell.s << ',' << std::setprecision(4) << cell.r << ',' << cell.signal_quasi_norm << ','
        << cell.trials << ',' << cell.tpr_mean << ',' << cell.tpr_se << ',' << cell.fpr_mean << ','
        << cell.fpr_se << ',' << cell.least_norm_refits << '\n';
  }
  emit(flags.output.value_or(""), csv.str(), out);
  return kExitOk;
}

struct RestartFlags {
  std::string objective = "ackley";
  int dim = 100;
  int agents = 50;
  int restarts = 29;
  std::string params = "0.5,1,0.4,0.7";
  std::optional<long> max_iter;
  double max_dist = 1e-7;
  std::uint64_t seed = 0;
  std::optional<std::string> output;
};

int cmd_restart_demo(const RestartFlags& flags, std::ostream& out) {
  if (flags.restarts < 0) throw ConfigError("--restarts must be >= 0");
  const ObjectiveSpec objective = ObjectiveRegistry::global().make(flags.objective, flags.dim);
  const DcboParams params(parse_params(flags.params));
  const StoppingCriteria stop{flags.max_iter.value_or(100L * flags.dim), flags.max_dist};
  const RestartReport report = run_with_restart(objective, params, objective.domain, flags.agents, objective.init,
                                                stop, flags.restarts + 1, RngPolicy{flags.seed});
  std::ostringstream csv;
  csv << std::setprecision(17) << "round,iterations,path_length,final_f\n";
  for (const auto& row : emit_round_diagnostics(report)) {
    csv << row.round << ',' << row.iterations << ',' << row.path_length << ',' << row.final_fp << '\n';
  }
  emit(flags.output.value_or(""), csv.str(), out);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete consensus-based optimization", args.empty() ? "dcbo_cli" : args[0]};
  app.require_subcommand(1);

  ExperimentFlags run_flags;
  auto* run = app.add_subcommand("run", "run trials of one algorithm on one objective");
  run_flags.attach(run);

  ExperimentFlags sweep_flags;
  SweepFlags sweep_extra;
  auto* sweep = app.add_subcommand("sweep", "compare two algorithms over the benchmark suite");
  sweep_flags.attach(sweep);
  sweep->add_option("--versus", sweep_extra.versus, "second algorithm (default pso)");
  sweep->add_option("--objectives", sweep_extra.objectives, "comma-separated objectives (default: suite)");

  CheckFlags check_flags;
  auto* check = app.add_subcommand("check-params", "classify a parameter tuple against the consensus conditions");
  check->add_option("--params", check_flags.params, "gamma1,gamma2,gbar1,gbar2");
  check->add_option("--dim", check_flags.dim, "dimension for the isotropic contraction");
  check->add_option("--seed", check_flags.seed, "Monte Carlo seed");
  check->add_option("--samples", check_flags.samples, "Monte Carlo samples");
  check->add_option("--output", check_flags.output, "output path");

  PortfolioFlags pf;
  auto* portfolio = app.add_subcommand("portfolio", "maximize the Sharpe ratio over the simplex");
  portfolio->add_option("--prices", pf.prices, "CSV of asset prices (header of asset names)");
  portfolio->add_option("--synthetic-assets", pf.synthetic_assets, "assets in the synthetic instance");
  portfolio->add_option("--algorithm", pf.algorithm, "dcbo or softmin-cbo");
  portfolio->add_option("--agents", pf.agents, "number of agents");
  portfolio->add_option("--params", pf.params, "gamma1,gamma2,gbar1,gbar2");
  portfolio->add_option("--max-dist", pf.max_dist, "consensus tolerance");
  portfolio->add_option("--max-iter", pf.max_iter, "iteration cap");
  portfolio->add_option("--trials", pf.trials, "number of trials");
  portfolio->add_option("--seed", pf.seed, "seed");
  portfolio->add_option("--beta", pf.beta, "softmin inverse temperature");
  portfolio->add_option("--noise", pf.noise, "softmin noise: homogeneous or heterogeneous");
  portfolio->add_option("--output", pf.output, "output path");

  CompsenseFlags cf;
  auto* cs = app.add_subcommand("compsense", "sparse recovery on the l^0.5 ball");
  cs->add_option("--config", cf.config, "JSON with d, m, s, r, trials, N, seed");
  cs->add_option("--dim", cf.dim, "signal dimension d");
  cs->add_option("--measurements", cf.measurements, "measurements m");
  cs->add_option("--sparsity", cf.sparsity, "sparsity s (2, 4 or 6)");
  cs->add_option("--radii", cf.radii, "comma-separated radii");
  cs->add_option("--trials", cf.trials, "trials per radius");
  cs->add_option("--agents", cf.agents, "number of agents");
  cs->add_option("--seed", cf.seed, "seed");
  cs->add_option("--params", cf.params, "gamma1,gamma2,gbar1,gbar2");
  cs->add_option("--max-iter", cf.max_iter, "iteration cap (default 100*d)");
  cs->add_option("--max-dist", cf.max_dist, "consensus tolerance");
  cs->add_option("--workers", cf.workers, "worker threads");
  cs->add_option("--output", cf.output, "output CSV");

  RestartFlags rf;
  auto* restart = app.add_subcommand("restart-demo", "per-round restart diagnostics");
  restart->add_option("--objective", rf.objective, "objective name");
  restart->add_option("--dim", rf.dim, "dimension");
  restart->add_option("--agents", rf.agents, "number of agents");
  restart->add_option("--restarts", rf.restarts, "restarts after the first round");
  restart->add_option("--params", rf.params, "gamma1,gamma2,gbar1,gbar2");
  restart->add_option("--max-iter", rf.max_iter, "per-round iteration cap (default 100*dim)");
  restart->add_option("--max-dist", rf.max_dist, "consensus tolerance");
  restart->add_option("--seed", rf.seed, "seed");
  restart->add_option("--output", rf.output, "output CSV");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("dcbo_cli");
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (run->parsed()) return cmd_run(run_flags, out);
    if (sweep->parsed()) return cmd_sweep(sweep_flags, sweep_extra, out);
    if (check->parsed()) return cmd_check_params(check_flags, out);
    if (portfolio->parsed()) return cmd_portfolio(pf, out);
    if (cs->parsed()) return cmd_compsense(cf, out);
    if (restart->parsed()) return cmd_restart_demo(rf, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntimeError;
  }
  return kExitConfigError;
}

}  // namespace dcbo
