#include <cmath>
#include <numbers>

#include "dcbo/objective.hpp"

namespace dcbo {

namespace {

void require_dim(int d, int min_dim, const char* name) {
  if (d < min_dim) {
    throw ConfigError(std::string(name) + " requires dimension >= " + std::to_string(min_dim));
  }
}

ObjectiveSpec make_spec(std::string name, int d, ObjectiveFn fn, double lo, double hi, double fmin,
                        Vector xmin) {
  ObjectiveSpec spec{
      .name = std::move(name),
      .dim = d,
      .eval = std::move(fn),
      .domain = Domain::unbounded(),
      .known_min = fmin,
      .known_minimizer = std::move(xmin),
      .init = InitDistribution::uniform_box(d, lo, hi),
  };
  return spec;
}

}  // namespace

ObjectiveSpec make_sphere(int d) {
  require_dim(d, 1, "sphere");
  return make_spec(
      "sphere", d, [](VectorRef x) { return x.squaredNorm(); }, -5.12, 5.12, 0.0, Vector::Zero(d));
}

ObjectiveSpec make_ackley(int d, double a, double b, double c) {
  require_dim(d, 1, "ackley");
  auto fn = [a, b, c](VectorRef x) {
    const double n = static_cast<double>(x.size());
    double cos_sum = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) cos_sum += std::cos(c * x[i]);
    return -a * std::exp(-b * std::sqrt(x.squaredNorm() / n)) - std::exp(cos_sum / n) + a +
           std::numbers::e;
  };
  return make_spec("ackley", d, std::move(fn), -32.768, 32.768, 0.0, Vector::Zero(d));
}

ObjectiveSpec make_griewank(int d) {
  require_dim(d, 1, "griewank");
  auto fn = [](VectorRef x) {
    double sum = 0.0;
    double prod = 1.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      sum += x[i] * x[i] / 4000.0;
      prod *= std::cos(x[i] / std::sqrt(static_cast<double>(i + 1)));
    }
    return sum - prod + 1.0;
  };
  return make_spec("griewank", d, std::move(fn), -600.0, 600.0, 0.0, Vector::Zero(d));
}

ObjectiveSpec make_rastrigin(int d) {
  require_dim(d, 1, "rastrigin");
  auto fn = [](VectorRef x) {
    double sum = 10.0 * static_cast<double>(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      sum += x[i] * x[i] - 10.0 * std::cos(2.0 * std::numbers::pi * x[i]);
    }
    return sum;
  };
  return make_spec("rastrigin", d, std::move(fn), -5.12, 5.12, 0.0, Vector::Zero(d));
}

ObjectiveSpec make_trid(int d) {
  require_dim(d, 2, "trid");
  auto fn = [](VectorRef x) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      sum += (x[i] - 1.0) * (x[i] - 1.0);
      if (i > 0) sum -= x[i] * x[i - 1];
    }
    return sum;
  };
  const double dd = d;
  Vector xmin(d);
  for (int i = 1; i <= d; ++i) xmin[i - 1] = static_cast<double>(i) * (dd + 1.0 - i);
  const double fmin = -dd * (dd + 4.0) * (dd - 1.0) / 6.0;
  return make_spec("trid", d, std::move(fn), -dd * dd, dd * dd, fmin, std::move(xmin));
}

ObjectiveSpec make_zakharov(int d) {
  require_dim(d, 1, "zakharov");
  auto fn = [](VectorRef x) {
    double sq = 0.0;
    double weighted = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      sq += x[i] * x[i];
      weighted += 0.5 * static_cast<double>(i + 1) * x[i];
    }
    const double w2 = weighted * weighted;
    return sq + w2 + w2 * w2;
  };
  return make_spec("zakharov", d, std::move(fn), -5.0, 10.0, 0.0, Vector::Zero(d));
}

ObjectiveSpec make_rosenbrock(int d) {
  require_dim(d, 2, "rosenbrock");
  auto fn = [](VectorRef x) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
      const double t = x[i + 1] - x[i] * x[i];
      sum += 100.0 * t * t + (x[i] - 1.0) * (x[i] - 1.0);
    }
    return sum;
  };
  return make_spec("rosenbrock", d, std::move(fn), -5.0, 10.0, 0.0, Vector::Ones(d));
}

ObjectiveSpec make_powell(int d) {
  require_dim(d, 4, "powell");
  if (d % 4 != 0) throw ConfigError("powell requires a dimension divisible by 4");
  auto fn = [](VectorRef x) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i + 3 < x.size(); i += 4) {
      const double t1 = x[i] + 10.0 * x[i + 1];
      const double t2 = x[i + 2] - x[i + 3];
      const double t3 = x[i + 1] - 2.0 * x[i + 2];
      const double t4 = x[i] - x[i + 3];
      sum += t1 * t1 + 5.0 * t2 * t2 + t3 * t3 * t3 * t3 + 10.0 * t4 * t4 * t4 * t4;
    }
    return sum;
  };
  return make_spec("powell", d, std::move(fn), -4.0, 5.0, 0.0, Vector::Zero(d));
}

ObjectiveSpec make_styblinski_tang(int d) {
  require_dim(d, 1, "styblinski-tang");
  auto fn = [](VectorRef x) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double x2 = x[i] * x[i];
      sum += x2 * x2 - 16.0 * x2 + 5.0 * x[i];
    }
    return 0.5 * sum;
  };
  // Root of 4x^3 - 32x + 5 = 0 nearest -2.9035.
  constexpr double root = -2.9035340277711771;
  auto spec = make_spec("styblinski-tang", d, fn, -5.0, 5.0, 0.0, Vector::Constant(d, root));
  spec.known_min = fn(*spec.known_minimizer);
  return spec;
}

ObjectiveRegistry& ObjectiveRegistry::global() {
  static ObjectiveRegistry registry = [] {
    ObjectiveRegistry r;
    r.add("sphere", [](int d) { return make_sphere(d); });
    r.add("ackley", [](int d) { return make_ackley(d); });
    r.add("griewank", make_griewank);
    r.add("rastrigin", make_rastrigin);
    r.add("trid", make_trid);
    r.add("zakharov", make_zakharov);
    r.add("rosenbrock", make_rosenbrock);
    r.add("powell", make_powell);
    r.add("styblinski-tang", make_styblinski_tang);
    return r;
  }();
  return registry;
}

void ObjectiveRegistry::add(std::string name, Factory factory) {
  factories_.insert_or_assign(std::move(name), std::move(factory));
}

bool ObjectiveRegistry::contains(std::string_view name) const {
  return factories_.find(name) != factories_.end();
}

ObjectiveSpec ObjectiveRegistry::make(std::string_view name, int dim) const {
  const auto it = factories_.find(name);
  if (it == factories_.end()) throw UnknownObjectiveError(name);
  return it->second(dim);
}

std::vector<std::string> ObjectiveRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(factories_.size());
  for (const auto& [name, factory] : factories_) out.push_back(name);
  return out;
}

std::vector<std::string> benchmark_names() {
  return {"ackley", "griewank", "rastrigin", "trid", "zakharov", "rosenbrock", "powell",
          "styblinski-tang"};
}

std::vector<ObjectiveSpec> benchmark_suite(int d) {
  std::vector<ObjectiveSpec> suite;
  for (const auto& name : benchmark_names()) {
    if (name == "powell" && d % 4 != 0) continue;
    if ((name == "trid" || name == "rosenbrock") && d < 2) continue;
    suite.push_back(ObjectiveRegistry::global().make(name, d));
  }
  return suite;
}

}  // namespace dcbo
