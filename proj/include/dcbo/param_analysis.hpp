#pragma once

#include <span>
#include <string>
#include <vector>

#include "dcbo/dynamics.hpp"
#include "dcbo/rng.hpp"

namespace dcbo {

/// Standard normal CDF.
double normal_cdf(double x);

/// E|mu + sigma eta| for eta ~ N(0,1) (folded-normal mean); |mu| when sigma = 0.
double folded_normal_abs_mean(double mu, double sigma);

/// E|1 - gamma1 + gamma2 eta|^2 = (1 - gamma1)^2 + gamma2^2.
double second_abs_moment(double gamma1, double gamma2);

struct AlphaMoment {
  double alpha = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
};

/// 20 log-spaced points in [0.05, 2].
std::vector<double> default_alpha_grid();

/// Monte-Carlo estimates of E|1 - gamma1 + gamma2 eta|^alpha for each alpha,
/// all from one sample of eta. Requires samples >= 10^4.
std::vector<AlphaMoment> mc_alpha_moment(double gamma1, double gamma2, std::span<const double> alphas,
                                         long samples, const RngPolicy& rng);

/// sqrt(2/d) Gamma((d+1)/2) / Gamma(d/2) = E|eta| / sqrt(d) for eta ~ N(0, I_d).
double chi_mean_ratio(int d);

/// Expected one-step squared contraction factor E[Y] of the isotropic map:
/// (1 - gbar1 + gbar2)^2 - 2 (1 - gbar1) gbar2 (1 - chi_mean_ratio(d)).
double isotropic_contraction(double gbar1, double gbar2, int d);

enum class Verdict { ProvenTrue, ProvenFalse, Undetermined };

std::string to_string(Verdict v);

struct ConditionReport {
  /// inf_alpha E|1 - gamma1 + gamma2 eta|^alpha < 1.
  Verdict b1a = Verdict::Undetermined;
  /// Which check settled b1a: "first-moment", "second-moment", "alpha-sweep",
  /// "log-moment" or "none".
  std::string b1a_certificate = "none";
  double b2_value = 0.0;
  double b3_value = 0.0;
  std::vector<AlphaMoment> alpha_sweep;
  /// E log|1 - gamma1 + gamma2 eta|; inf_alpha < 1 iff this is negative.
  double log_moment = 0.0;
  double log_moment_std_error = 0.0;
  /// gbar1 in (0,1), gbar2 >= 0, gbar1 >= gbar2.
  bool b1b_holds = false;
  double isotropic_contraction = 0.0;
  /// (1 - gbar1 + gbar2)^2 <= 1/2.
  bool prop34_ok = false;
};

struct ConditionCheckOptions {
  long samples = 1'000'000;
  std::vector<double> alphas = default_alpha_grid();
};

/// Pure given (coefficients, d, rng, options).
ConditionReport check_conditions(const DiffusionCoefficients& coeffs, int d, const RngPolicy& rng,
                                 const ConditionCheckOptions& options = {});
inline ConditionReport check_conditions(const DcboParams& params, int d, const RngPolicy& rng,
                                        const ConditionCheckOptions& options = {}) {
  return check_conditions(params.coefficients(), d, rng, options);
}

}  // namespace dcbo
