#include "dcbo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace dcbo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

bool on_simplex(VectorRef x, double tol) {
  if (x.size() == 0) return false;
  if ((x.array() < -tol).any()) return false;
  return std::abs(x.sum() - 1.0) <= tol;
}

}  // namespace

Domain Domain::box(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) throw ConfigError("box bounds have different dimensions");
  if ((lo.array() > hi.array()).any()) throw ConfigError("box requires lo <= hi component-wise");
  return Domain(Box{std::move(lo), std::move(hi)});
}

Domain Domain::box(int dim, double lo, double hi) {
  return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

Domain Domain::lp_ball(double p, double r) {
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("lp ball requires p in (0, 1]");
  if (!(r > 0.0)) throw ConfigError("lp ball requires r > 0");
  return Domain(IndicatorLpBall{p, r});
}

std::string Domain::name() const {
  return std::visit(Overloaded{[](const Unbounded&) { return std::string("unbounded"); },
                               [](const Box&) { return std::string("box"); },
                               [](const Simplex&) { return std::string("simplex"); },
                               [](const IndicatorLpBall&) { return std::string("lp-ball"); }},
                    kind_);
}

bool Domain::contains(VectorRef x, double tol) const {
  return std::visit(
      Overloaded{[](const Unbounded&) { return true; },
                 [&](const Box& b) {
                   return (x.array() >= b.lo.array() - tol).all() &&
                          (x.array() <= b.hi.array() + tol).all();
                 },
                 [&](const Simplex&) { return on_simplex(x, tol); },
                 [&](const IndicatorLpBall& ball) { return lp_quasi_norm(x, ball.p) <= ball.r + tol; }},
      kind_);
}

bool Domain::has_projection() const {
  return std::holds_alternative<Box>(kind_) || std::holds_alternative<Simplex>(kind_);
}

void Domain::project_in_place(MutVectorRef x) const {
  if (const auto* b = std::get_if<Box>(&kind_)) {
    x = x.cwiseMax(b->lo).cwiseMin(b->hi);
  } else if (std::holds_alternative<Simplex>(kind_)) {
    project_simplex_in_place(x);
  }
}

Vector Domain::project(VectorRef x) const {
  Vector out = x;
  project_in_place(out);
  return out;
}

Vector project_box(VectorRef x, VectorRef lo, VectorRef hi) {
  return x.cwiseMax(lo).cwiseMin(hi);
}

void project_simplex_in_place(MutVectorRef x) {
  const auto d = x.size();
  if (on_simplex(x, kMembershipTol)) return;

  std::vector<double> u(x.data(), x.data() + d);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - candidate > 0.0) threshold = candidate;
  }
  x = (x.array() - threshold).cwiseMax(0.0);
}

Vector project_simplex(VectorRef x) {
  Vector out = x;
  project_simplex_in_place(out);
  return out;
}

double lp_quasi_norm(VectorRef x, double p) {
  double sum = 0.0;
  if (p == 0.5) {
    for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::sqrt(std::abs(x[i]));
    return sum * sum;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]), p);
  return std::pow(sum, 1.0 / p);
}

bool lp_ball_membership(VectorRef x, double p, double r) { return lp_quasi_norm(x, p) <= r; }

}  // namespace dcbo
