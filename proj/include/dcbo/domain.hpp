#pragma once

#include <string>
#include <variant>

#include "dcbo/types.hpp"

namespace dcbo {

/// Absolute slack used by membership tests after a projection.
inline constexpr double kMembershipTol = 1e-12;

struct Unbounded {};

struct Box {
  Vector lo;
  Vector hi;
};

/// Standard probability simplex {w : w >= 0, sum w = 1}.
struct Simplex {};

/// {x : (sum |x_i|^p)^(1/p) <= r}. Non-convex for p < 1, so no projection;
/// infeasibility is carried by the objective returning +inf.
struct IndicatorLpBall {
  double p;
  double r;
};

/// Feasible region of a run.
class Domain {
 public:
  using Kind = std::variant<Unbounded, Box, Simplex, IndicatorLpBall>;

  Domain() : kind_(Unbounded{}) {}

  static Domain unbounded() { return Domain(Unbounded{}); }
  static Domain box(Vector lo, Vector hi);
  static Domain box(int dim, double lo, double hi);
  static Domain simplex() { return Domain(Simplex{}); }
  static Domain lp_ball(double p, double r);

  const Kind& kind() const { return kind_; }
  std::string name() const;

  bool contains(VectorRef x, double tol = kMembershipTol) const;
  bool has_projection() const;
  /// No-op for domains without a projection.
  void project_in_place(MutVectorRef x) const;
  Vector project(VectorRef x) const;

 private:
  explicit Domain(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

/// Component-wise median(lo, x, hi).
Vector project_box(VectorRef x, VectorRef lo, VectorRef hi);

/// Euclidean projection onto the probability simplex by sort-and-threshold.
/// Points already on the simplex (within kMembershipTol) are returned as is,
/// which makes the projection exactly idempotent.
Vector project_simplex(VectorRef x);
void project_simplex_in_place(MutVectorRef x);

/// (sum |x_i|^p)^(1/p).
double lp_quasi_norm(VectorRef x, double p);
bool lp_ball_membership(VectorRef x, double p, double r);

}  // namespace dcbo
