#include <cmath>
#include <numbers>

#include "dcbo/objective.hpp"
#include "dcbo/rng.hpp"

namespace dcbo {

namespace {

/// sup{t >= 0 : fn(t) <= level} for non-decreasing fn with fn(0) <= level.
double monotone_sup_below(const std::function<double(double)>& fn, double level) {
  double lo = 0.0;
  double hi = 1.0;
  while (fn(hi) <= level) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return kInfinity;
  }
  for (int it = 0; it < 2000 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (fn(mid) <= level) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

double ModulusEnvelope::k_inverse(double eps) const {
  if (eps < 0.0) return 0.0;
  if (eps >= k_limit) return kInfinity;
  return monotone_sup_below(k, eps);
}

ModulusEnvelope ackley_modulus(double a, double b, double c, int d) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw ConfigError("ackley modulus requires a, b, c > 0");
  if (d < 1) throw ConfigError("ackley modulus requires d >= 1");
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  ModulusEnvelope env;
  env.dim = d;
  env.k = [=](double t) {
    return a * (1.0 - std::exp(-b * t / sqrt_d)) + std::numbers::e * (1.0 - std::exp(-c * t / sqrt_d));
  };
  env.k_limit = a + std::numbers::e;
  env.lower_radial = [=](double t) { return a - a * std::exp(-b * t / sqrt_d); };
  env.lower_limit = a;
  env.lower_radius = [=](double eps) {
    if (eps >= a) return kInfinity;
    return sqrt_d / b * std::log(a / (a - eps));
  };
  return env;
}

ProbabilityBound success_probability_lower_bound(const ModulusEnvelope& envelope, double epsilon,
                                                 double half_width, long n_agents,
                                                 const std::optional<Vector>& center,
                                                 std::uint64_t mc_seed, long mc_samples) {
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(half_width > 0.0)) throw ConfigError("box half-width must be positive");
  if (n_agents < 1) throw ConfigError("n_agents must be positive");
  const int d = envelope.dim;
  const Vector c = center.value_or(Vector::Zero(d));
  if (c.size() != d) throw ConfigError("center has the wrong dimension");

  ProbabilityBound out;
  out.radius = envelope.k_inverse(epsilon);
  if (out.radius <= 0.0) return out;

  const double L = half_width;
  const bool inside = std::isfinite(out.radius) &&
                      ((c.array() - out.radius) >= -L).all() && ((c.array() + out.radius) <= L).all();
  if (inside) {
    const double dd = d;
    const double log_volume = 0.5 * dd * std::log(std::numbers::pi) + dd * std::log(out.radius) -
                              std::lgamma(0.5 * dd + 1.0);
    out.mass = std::min(1.0, std::exp(log_volume - dd * std::log(2.0 * L)));
  } else {
    // Mass of ball intersected with box; lower confidence limit at 3 standard errors.
    out.monte_carlo = true;
    const RngPolicy rng{mc_seed, 0, 0};
    CounterStream s = rng.stream(StreamPurpose::MonteCarlo, 0, 0);
    long hits = 0;
    Vector x(d);
    for (long i = 0; i < mc_samples; ++i) {
      for (int k = 0; k < d; ++k) x[k] = s.uniform(-L, L);
      if ((x - c).norm() < out.radius) ++hits;
    }
    const double n = static_cast<double>(mc_samples);
    const double phat = hits / n;
    out.mass = std::clamp(phat - 3.0 * std::sqrt(phat * (1.0 - phat) / n), 0.0, 1.0);
  }
  if (out.mass >= 1.0) {
    out.probability = 1.0;
  } else {
    out.probability = -std::expm1(static_cast<double>(n_agents) * std::log1p(-out.mass));
  }
  out.probability = std::clamp(out.probability, 0.0, 1.0);
  return out;
}

double minimizer_distance_bound(const ModulusEnvelope& envelope, double epsilon) {
  if (!envelope.has_lower()) throw ConfigError("envelope has no lower function f_m");
  if (epsilon <= 0.0) return 0.0;
  if (epsilon >= envelope.lower_limit) return kInfinity;
  if (envelope.lower_radius) return 2.0 * envelope.lower_radius(epsilon);
  return 2.0 * monotone_sup_below(envelope.lower_radial, epsilon);
}

double ackley_distance_bound(double a, double b, int d, double epsilon) {
  if (epsilon <= 0.0) return 0.0;
  if (epsilon >= a) return kInfinity;
  return 2.0 * std::sqrt(static_cast<double>(d)) / b * std::log(a / (a - epsilon));
}

}  // namespace dcbo
