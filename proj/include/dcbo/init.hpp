#pragma once

#include <functional>
#include <string>
#include <variant>

#include "dcbo/rng.hpp"
#include "dcbo/types.hpp"

namespace dcbo {

/// Distribution of initial agent positions (rho_in).
class InitDistribution {
 public:
  using Sampler = std::function<Vector(CounterStream&)>;

  static InitDistribution uniform_box(Vector lo, Vector hi);
  static InitDistribution uniform_box(int dim, double lo, double hi);
  static InitDistribution point_mass(Vector x);
  /// Uniform on the probability simplex (flat Dirichlet).
  static InitDistribution uniform_simplex(int dim);
  static InitDistribution custom(int dim, std::string label, Sampler sampler);

  int dim() const { return dim_; }
  const std::string& label() const { return label_; }
  Vector draw(CounterStream& stream) const;

 private:
  InitDistribution(int dim, std::string label, Sampler sampler)
      : dim_(dim), label_(std::move(label)), sampler_(std::move(sampler)) {}

  int dim_;
  std::string label_;
  Sampler sampler_;
};

}  // namespace dcbo
