#include "dcbo/init.hpp"

#include <cmath>

namespace dcbo {

InitDistribution InitDistribution::uniform_box(Vector lo, Vector hi) {
  if (lo.size() != hi.size() || lo.size() == 0) throw ConfigError("init box has inconsistent dimensions");
  if ((lo.array() > hi.array()).any()) throw ConfigError("init box requires lo <= hi");
  const int dim = static_cast<int>(lo.size());
  return InitDistribution(dim, "uniform-box", [lo = std::move(lo), hi = std::move(hi)](CounterStream& s) {
    Vector x(lo.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = s.uniform(lo[k], hi[k]);
    return x;
  });
}

InitDistribution InitDistribution::uniform_box(int dim, double lo, double hi) {
  return uniform_box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
}

InitDistribution InitDistribution::point_mass(Vector x) {
  const int dim = static_cast<int>(x.size());
  return InitDistribution(dim, "point-mass", [x = std::move(x)](CounterStream&) { return x; });
}

InitDistribution InitDistribution::uniform_simplex(int dim) {
  if (dim < 1) throw ConfigError("simplex init requires dim >= 1");
  return InitDistribution(dim, "uniform-simplex", [dim](CounterStream& s) {
    Vector w(dim);
    for (int k = 0; k < dim; ++k) w[k] = -std::log(s.uniform());
    return Vector(w / w.sum());
  });
}

InitDistribution InitDistribution::custom(int dim, std::string label, Sampler sampler) {
  return InitDistribution(dim, std::move(label), std::move(sampler));
}

Vector InitDistribution::draw(CounterStream& stream) const { return sampler_(stream); }

}  // namespace dcbo
