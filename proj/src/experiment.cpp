#include "dcbo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <numeric>
#include <set>

#include <omp.h>

#include "dcbo/restart.hpp"

namespace dcbo {

using nlohmann::json;

namespace {

/// A config error tied to a JSON key, so the parser can report its line.
class FieldError : public ConfigError {
 public:
  FieldError(std::string field, const std::string& message)
      : ConfigError(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

template <class T>
void read(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw FieldError(key, "unexpected value " + it->dump());
  }
}

template <class T>
void read(const json& j, const char* key, std::optional<T>& out) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw FieldError(key, "unexpected value " + it->dump());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw FieldError(where.empty() ? "config" : where, "expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!keys.contains(key)) throw FieldError(key, "unknown key");
  }
}

std::string noise_name(NoiseMode m) { return m == NoiseMode::Homogeneous ? "homogeneous" : "heterogeneous"; }
std::string diffusion_name(Diffusion d) { return d == Diffusion::Isotropic ? "isotropic" : "anisotropic"; }

int line_of(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

double round_to(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

Comparison compare_values(double a, double b, int decimals) {
  const double ra = round_to(a, decimals);
  const double rb = round_to(b, decimals);
  if (ra < rb) return Comparison::ABetter;
  if (ra > rb) return Comparison::BBetter;
  return Comparison::Tie;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Dcbo:
      return "dcbo";
    case Algorithm::SoftminCbo:
      return "softmin-cbo";
    case Algorithm::Pso:
      return "pso";
    case Algorithm::HmPso:
      return "hmpso";
  }
  return "dcbo";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "dcbo") return Algorithm::Dcbo;
  if (name == "softmin-cbo") return Algorithm::SoftminCbo;
  if (name == "pso") return Algorithm::Pso;
  if (name == "hmpso") return Algorithm::HmPso;
  throw ConfigError("unknown algorithm '" + name + "' (expected dcbo, softmin-cbo, pso or hmpso)");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::Json ? "json" : "csv"; }

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown format '" + name + "' (expected csv or json)");
}

void ExperimentConfig::validate() const {
  if (!ObjectiveRegistry::global().contains(objective)) {
    throw FieldError("objective", "unknown objective '" + objective + "'");
  }
  if (dim < 1) throw FieldError("dim", "must be >= 1");
  if (n_agents < 1) throw FieldError("agents", "must be >= 1");
  if (trials < 1) throw FieldError("trials", "must be >= 1");
  if (restarts < 0) throw FieldError("restarts", "must be >= 0");
  if (workers < 0) throw FieldError("workers", "must be >= 0");
  if (max_iter && *max_iter < 0) throw FieldError("max_iter", "must be >= 0");
  if (!(max_dist > 0.0)) throw FieldError("max_dist", "must be positive");
  if (domain.kind != "default" && domain.kind != "box") {
    throw FieldError("domain", "kind must be 'default' or 'box'");
  }
  if (domain.kind == "box" && !(domain.lo < domain.hi)) throw FieldError("domain", "need lo < hi");
  if (restarts > 0 && algorithm != Algorithm::Dcbo) {
    throw FieldError("restarts", "restarts are only available for dcbo");
  }
  try {
    switch (algorithm) {
      case Algorithm::Dcbo:
        DcboParams(params, mix_count).anisotropic_count(n_agents);
        break;
      case Algorithm::SoftminCbo:
        softmin.validate();
        break;
      case Algorithm::Pso:
      case Algorithm::HmPso:
        pso.validate();
        if (!(hm_perturb_std >= 0.0)) throw ConfigError("perturb_std must be >= 0");
        break;
    }
  } catch (const FieldError&) {
    throw;
  } catch (const ConfigError& e) {
    const char* field = algorithm == Algorithm::Dcbo         ? "params"
                        : algorithm == Algorithm::SoftminCbo ? "softmin"
                                                             : "pso";
    throw FieldError(field, e.what());
  }
  // Powell needs d % 4 == 0; building the objective surfaces that early.
  ObjectiveRegistry::global().make(objective, dim);
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{
      {"algorithm", to_string(c.algorithm)},
      {"objective", c.objective},
      {"dim", c.dim},
      {"domain", {{"kind", c.domain.kind}, {"lo", c.domain.lo}, {"hi", c.domain.hi}}},
      {"agents", c.n_agents},
      {"params", {c.params.gamma1, c.params.gamma2, c.params.gbar1, c.params.gbar2}},
      {"softmin",
       {{"h", c.softmin.h},
        {"lambda", c.softmin.lambda},
        {"sigma", c.softmin.sigma},
        {"beta", c.softmin.beta},
        {"noise", noise_name(c.softmin.noise)},
        {"diffusion", diffusion_name(c.softmin.diffusion)},
        {"beta_multiplier", c.softmin.beta_multiplier}}},
      {"pso",
       {{"w", c.pso.w},
        {"c1", c.pso.c1},
        {"c2", c.pso.c2},
        {"perturb_std", c.hm_perturb_std},
        {"stall_tol", c.pso.stall_tol},
        {"stall_window", c.pso.stall_window}}},
      {"max_iter", c.resolved_max_iter()},
      {"max_dist", c.max_dist},
      {"restarts", c.restarts},
      {"trials", c.trials},
      {"seed", c.seed},
      {"output", c.output},
      {"format", to_string(c.format)},
      {"workers", c.workers},
      {"traces", c.traces},
  };
  j["mix_count"] = c.mix_count ? json(*c.mix_count) : json(nullptr);
}

void from_json(const json& j, ExperimentConfig& c) {
  reject_unknown(j,
                 {"algorithm", "objective", "dim", "domain", "agents", "params", "mix_count", "softmin",
                  "pso", "max_iter", "max_dist", "restarts", "trials", "seed", "output", "format",
                  "workers", "traces"},
                 "");
  std::string s;
  if (j.contains("algorithm")) {
    read(j, "algorithm", s);
    try {
      c.algorithm = parse_algorithm(s);
    } catch (const ConfigError& e) {
      throw FieldError("algorithm", e.what());
    }
  }
  read(j, "objective", c.objective);
  read(j, "dim", c.dim);
  read(j, "agents", c.n_agents);
  read(j, "mix_count", c.mix_count);
  read(j, "max_iter", c.max_iter);
  read(j, "max_dist", c.max_dist);
  read(j, "restarts", c.restarts);
  read(j, "trials", c.trials);
  read(j, "seed", c.seed);
  read(j, "output", c.output);
  read(j, "workers", c.workers);
  read(j, "traces", c.traces);
  if (j.contains("format")) {
    read(j, "format", s);
    try {
      c.format = parse_format(s);
    } catch (const ConfigError& e) {
      throw FieldError("format", e.what());
    }
  }
  if (j.contains("domain")) {
    const json& d = j.at("domain");
    reject_unknown(d, {"kind", "lo", "hi"}, "domain");
    read(d, "kind", c.domain.kind);
    read(d, "lo", c.domain.lo);
    read(d, "hi", c.domain.hi);
  }
  if (j.contains("params")) {
    const json& p = j.at("params");
    if (p.is_array()) {
      std::vector<double> v;
      read(j, "params", v);
      if (v.size() != 4) throw FieldError("params", "expected [gamma1, gamma2, gbar1, gbar2]");
      c.params = {v[0], v[1], v[2], v[3]};
    } else {
      reject_unknown(p, {"gamma1", "gamma2", "gbar1", "gbar2"}, "params");
      read(p, "gamma1", c.params.gamma1);
      read(p, "gamma2", c.params.gamma2);
      read(p, "gbar1", c.params.gbar1);
      read(p, "gbar2", c.params.gbar2);
    }
  }
  if (j.contains("softmin")) {
    const json& p = j.at("softmin");
    reject_unknown(p, {"h", "lambda", "sigma", "beta", "noise", "diffusion", "beta_multiplier"}, "softmin");
    read(p, "h", c.softmin.h);
    read(p, "lambda", c.softmin.lambda);
    read(p, "sigma", c.softmin.sigma);
    read(p, "beta", c.softmin.beta);
    read(p, "beta_multiplier", c.softmin.beta_multiplier);
    if (p.contains("noise")) {
      read(p, "noise", s);
      if (s != "homogeneous" && s != "heterogeneous") {
        throw FieldError("noise", "expected homogeneous or heterogeneous");
      }
      c.softmin.noise = s == "homogeneous" ? NoiseMode::Homogeneous : NoiseMode::Heterogeneous;
    }
    if (p.contains("diffusion")) {
      read(p, "diffusion", s);
      if (s != "anisotropic" && s != "isotropic") throw FieldError("diffusion", "expected anisotropic or isotropic");
      c.softmin.diffusion = s == "isotropic" ? Diffusion::Isotropic : Diffusion::Anisotropic;
    }
  }
  if (j.contains("pso")) {
    const json& p = j.at("pso");
    reject_unknown(p, {"w", "c1", "c2", "perturb_std", "stall_tol", "stall_window"}, "pso");
    read(p, "w", c.pso.w);
    read(p, "c1", c.pso.c1);
    read(p, "c2", c.pso.c2);
    read(p, "perturb_std", c.hm_perturb_std);
    read(p, "stall_tol", c.pso.stall_tol);
    read(p, "stall_window", c.pso.stall_window);
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                      ": " + e.what());
  }
  ExperimentConfig c;
  try {
    c = j.get<ExperimentConfig>();
    c.validate();
  } catch (const FieldError& e) {
    const auto pos = text.find("\"" + e.field() + "\"");
    const std::string where =
        pos == std::string::npos ? std::string("config") : "config line " + std::to_string(line_of(text, pos));
    throw ConfigError(where + ": " + e.what());
  }
  return c;
}

TrialRecord run_trial(const ExperimentConfig& config, int trial_id, Execution execution) {
  ObjectiveSpec objective = ObjectiveRegistry::global().make(config.objective, config.dim);
  if (config.domain.kind == "box") {
    objective.domain = Domain::box(config.dim, config.domain.lo, config.domain.hi);
    objective.init = InitDistribution::uniform_box(config.dim, config.domain.lo, config.domain.hi);
  }
  const Domain& domain = objective.domain;
  const RngPolicy rng = RngPolicy{config.seed}.for_trial(static_cast<std::uint64_t>(trial_id));
  const StoppingCriteria stop{config.resolved_max_iter(), config.max_dist};
  RunOptions options;
  options.execution = execution;

  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.seed = rng.trial_seed();
  const auto start = std::chrono::steady_clock::now();
  TrialReport report;
  switch (config.algorithm) {
    case Algorithm::Dcbo: {
      const DcboParams params(config.params, config.mix_count);
      if (config.restarts > 0) {
        const StoppingCriteria per_round{std::min(100L * config.dim, stop.max_iter), stop.max_dist};
        const RestartReport rr = run_with_restart(objective, params, domain, config.n_agents, objective.init,
                                                  per_round, config.restarts + 1, rng, options, stop.max_iter);
        report.iterations = rr.total_iterations;
        report.evaluations = rr.total_evaluations;
        report.termination = rr.rounds.back().termination;
        report.final_p = rr.best_point();
        report.final_fp = rr.best_value();
        for (const auto& round : rr.rounds) {
          const std::size_t skip = report.fp_trace.empty() ? 0 : 1;
          report.fp_trace.insert(report.fp_trace.end(), round.fp_trace.begin() + skip, round.fp_trace.end());
          report.diameter_trace.insert(report.diameter_trace.end(), round.diameter_trace.begin() + skip,
                                       round.diameter_trace.end());
          report.p_jump_trace.insert(report.p_jump_trace.end(), round.p_jump_trace.begin(),
                                     round.p_jump_trace.end());
        }
      } else {
        report = run_dcbo(objective, params, domain, config.n_agents, objective.init, stop, rng, options);
      }
      break;
    }
    case Algorithm::SoftminCbo:
      report = run_softmin_cbo(objective, config.softmin, domain, config.n_agents, objective.init, stop, rng,
                               options);
      break;
    case Algorithm::Pso: {
      PsoParams p = config.pso;
      p.perturb_std = 0.0;
      report = run_pso(objective, p, domain, config.n_agents, objective.init, stop, rng, options);
      break;
    }
    case Algorithm::HmPso: {
      PsoParams p = config.pso;
      p.perturb_std = config.hm_perturb_std;
      p.stall_window = 0;
      report = run_pso(objective, p, domain, config.n_agents, objective.init, stop, rng, options);
      break;
    }
  }
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  rec.final_f = report.final_fp;
  if (objective.known_min) rec.gap = report.final_fp - *objective.known_min;
  rec.iterations = report.iterations;
  rec.termination = report.termination;
  rec.evaluations = report.evaluations;
  if (config.traces) {
    rec.fp_trace = std::move(report.fp_trace);
    rec.p_jump_trace = std::move(report.p_jump_trace);
    rec.diameter_trace = std::move(report.diameter_trace);
  }
  return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.trials.resize(static_cast<std::size_t>(config.trials));

  const int workers = config.workers > 0 ? config.workers : omp_get_max_threads();
  // One trial: parallelize over agents instead.
  const Execution inner = config.trials > 1 && workers > 1 ? Execution::Serial : Execution::Parallel;
  std::exception_ptr failure;
  int failed_trial = config.trials;
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int t = 0; t < config.trials; ++t) {
    try {
      result.trials[static_cast<std::size_t>(t)] = run_trial(config, t, inner);
    } catch (...) {
#pragma omp critical(experiment_failure)
      if (t < failed_trial) {
        failed_trial = t;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  result.stats = aggregate(result.trials, config.objective, config.dim);
  return result;
}

AggregateStats aggregate(const std::vector<TrialRecord>& records, const std::string& objective, int dim) {
  if (records.empty()) throw ConfigError("cannot aggregate zero trials");
  AggregateStats s;
  s.objective = objective;
  s.dim = dim;
  s.uses_gap = std::all_of(records.begin(), records.end(), [](const TrialRecord& r) { return r.gap.has_value(); });
  std::vector<double> v;
  double iters = 0.0;
  for (const auto& r : records) {
    v.push_back(s.uses_gap ? *r.gap : r.final_f);
    iters += static_cast<double>(r.iterations);
  }
  s.count = static_cast<int>(v.size());
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / s.count;
  s.mean_iterations = iters / s.count;
  std::sort(v.begin(), v.end());
  s.min = v.front();
  const std::size_t mid = v.size() / 2;
  s.median = v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
  return s;
}

std::string to_string(Comparison c) {
  switch (c) {
    case Comparison::ABetter:
      return "A>B";
    case Comparison::Tie:
      return "A=B";
    case Comparison::BBetter:
      return "A<B";
  }
  return "A=B";
}

ComparisonReport compare_report(const AggregateStats& a, const AggregateStats& b, int decimals) {
  if (a.objective != b.objective || a.dim != b.dim || a.uses_gap != b.uses_gap) {
    throw ConfigError("cannot compare statistics of " + a.objective + "(d=" + std::to_string(a.dim) + ") with " +
                      b.objective + "(d=" + std::to_string(b.dim) + ")");
  }
  if (decimals < 0) throw ConfigError("decimals must be >= 0");
  return {compare_values(a.min, b.min, decimals), compare_values(a.mean, b.mean, decimals),
          compare_values(a.median, b.median, decimals)};
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  const auto old_precision = out.precision(17);
  out << "trial_id,seed,final_f,f_minus_min,iterations,termination,wall_ms\n";
  for (const auto& r : records) {
    out << r.trial_id << ',' << r.seed << ',' << r.final_f << ',';
    if (r.gap) out << *r.gap;
    out << ',' << r.iterations << ',' << to_string(r.termination) << ',' << std::fixed
        << std::setprecision(3) << r.wall_ms << std::defaultfloat << std::setprecision(17) << '\n';
  }
  out.precision(old_precision);
}

void write_traces_csv(std::ostream& out, const std::vector<TrialRecord>& records) {
  const auto old_precision = out.precision(17);
  out << "trial_id,iteration,fp,p_jump,diameter\n";
  for (const auto& r : records) {
    for (std::size_t n = 0; n < r.fp_trace.size(); ++n) {
      out << r.trial_id << ',' << n << ',' << r.fp_trace[n] << ',';
      if (n > 0 && n - 1 < r.p_jump_trace.size()) out << r.p_jump_trace[n - 1];
      out << ',';
      if (n < r.diameter_trace.size()) out << r.diameter_trace[n];
      out << '\n';
    }
  }
  out.precision(old_precision);
}

json stats_to_json(const AggregateStats& s) {
  return json{{"objective", s.objective},
              {"dim", s.dim},
              {"statistic", s.uses_gap ? "f_minus_min" : "f"},
              {"min", s.min},
              {"mean", s.mean},
              {"median", s.median},
              {"mean_iterations", s.mean_iterations},
              {"count", s.count}};
}

json experiment_to_json(const ExperimentResult& result) {
  json trials = json::array();
  for (const auto& r : result.trials) {
    json t{{"trial_id", r.trial_id},
           {"seed", r.seed},
           {"final_f", r.final_f},
           {"f_minus_min", r.gap ? json(*r.gap) : json(nullptr)},
           {"iterations", r.iterations},
           {"termination", to_string(r.termination)},
           {"evaluations", r.evaluations},
           {"wall_ms", r.wall_ms}};
    if (result.config.traces) {
      t["fp_trace"] = r.fp_trace;
      t["p_jump_trace"] = r.p_jump_trace;
      t["diameter_trace"] = r.diameter_trace;
    }
    trials.push_back(std::move(t));
  }
  return json{{"config", result.config}, {"summary", stats_to_json(result.stats)}, {"trials", std::move(trials)}};
}

}  // namespace dcbo
