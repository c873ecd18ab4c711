#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dcbo/domain.hpp"
#include "dcbo/init.hpp"
#include "dcbo/types.hpp"

namespace dcbo {

/// Objective evaluation. Must be a pure function of its argument; it may be
/// called concurrently. +inf marks infeasible points, NaN is an error.
using ObjectiveFn = std::function<double(VectorRef)>;

struct ObjectiveSpec {
  std::string name;
  int dim = 0;
  ObjectiveFn eval;
  Domain domain;
  std::optional<double> known_min;
  std::optional<Vector> known_minimizer;
  /// Default initial distribution, normally uniform on the standard search box.
  InitDistribution init;

  double operator()(VectorRef x) const { return eval(x); }
};

class UnknownObjectiveError : public ConfigError {
 public:
  explicit UnknownObjectiveError(std::string_view name)
      : ConfigError("unknown objective: " + std::string(name)) {}
};

ObjectiveSpec make_sphere(int d);
/// a = 20, b = 0.2, c = 2 pi are the standard constants.
ObjectiveSpec make_ackley(int d, double a = 20.0, double b = 0.2, double c = 6.283185307179586);
ObjectiveSpec make_griewank(int d);
ObjectiveSpec make_rastrigin(int d);
ObjectiveSpec make_trid(int d);
ObjectiveSpec make_zakharov(int d);
ObjectiveSpec make_rosenbrock(int d);
/// d must be a multiple of 4.
ObjectiveSpec make_powell(int d);
ObjectiveSpec make_styblinski_tang(int d);

/// Name -> factory lookup used by the CLI and config files.
class ObjectiveRegistry {
 public:
  using Factory = std::function<ObjectiveSpec(int dim)>;

  /// Registry preloaded with the benchmark functions.
  static ObjectiveRegistry& global();

  void add(std::string name, Factory factory);
  bool contains(std::string_view name) const;
  ObjectiveSpec make(std::string_view name, int dim) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Factory, std::less<>> factories_;
};

/// The eight 80-dimensional comparison functions, in table order.
std::vector<std::string> benchmark_names();
/// Functions that cannot be built at dimension d (Powell for d % 4 != 0) are skipped.
std::vector<ObjectiveSpec> benchmark_suite(int d);

// ---------------------------------------------------------------------------
// Modulus of continuity and success-probability bounds.

/// Radial envelopes f_m(x - x*) <= f(x) - f(x*) <= k(|x - x*|).
struct ModulusEnvelope {
  int dim = 0;
  /// Upper modulus k, increasing with k(0) = 0.
  std::function<double(double)> k;
  /// sup_t k(t); +inf when unbounded.
  double k_limit = kInfinity;
  /// Optional radial profile g with f_m(x) = g(|x|), g(0) = 0.
  std::function<double(double)> lower_radial;
  double lower_limit = kInfinity;
  /// Optional closed form of sup{t : g(t) < eps}.
  std::function<double(double)> lower_radius;

  double upper(VectorRef x) const { return k(x.norm()); }
  bool has_lower() const { return static_cast<bool>(lower_radial); }
  double lower(VectorRef x) const { return lower_radial(x.norm()); }

  /// sup{t : k(t) <= eps} by bisection; +inf when eps >= k_limit.
  double k_inverse(double eps) const;
};

/// Modulus of the Ackley function built from the composition rules.
ModulusEnvelope ackley_modulus(double a, double b, double c, int d);

struct ProbabilityBound {
  double probability = 0.0;
  double radius = 0.0;
  /// rho_in(S_eps^M) for the uniform box.
  double mass = 0.0;
  /// The ball left the box and its mass was estimated by Monte Carlo.
  bool monte_carlo = false;
};

/// 1 - (1 - rho_in(S_eps^M))^N for N i.i.d. uniform draws on [-L, L]^d,
/// S_eps^M being the ball of radius k^-1(eps) around `center` (origin if empty).
ProbabilityBound success_probability_lower_bound(const ModulusEnvelope& envelope, double epsilon,
                                                 double half_width, long n_agents,
                                                 const std::optional<Vector>& center = std::nullopt,
                                                 std::uint64_t mc_seed = 0,
                                                 long mc_samples = 1'000'000);

/// diam of {x : f_m(x) < eps}; +inf signals an unbounded set.
double minimizer_distance_bound(const ModulusEnvelope& envelope, double epsilon);

/// Closed form 2 sqrt(d) / b * log(a / (a - eps)).
double ackley_distance_bound(double a, double b, int d, double epsilon);

}  // namespace dcbo
