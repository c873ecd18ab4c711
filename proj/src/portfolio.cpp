#include "dcbo/portfolio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace dcbo {

void PortfolioInstance::validate() const {
  const auto d = mu.size();
  if (d < 1) throw ConfigError("portfolio needs at least one asset");
  if (sigma.rows() != d || sigma.cols() != d) {
    throw ConfigError("covariance must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (!asset_names.empty() && static_cast<Eigen::Index>(asset_names.size()) != d) {
    throw ConfigError("asset name count does not match the number of assets");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ConfigError("covariance is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) throw ConfigError("covariance is not positive semidefinite");
}

double negative_sharpe(const PortfolioInstance& instance, VectorRef w) {
  const double variance = w.dot(instance.sigma * w);
  if (!(variance > 0.0)) return kInfinity;
  return -w.dot(instance.mu) / std::sqrt(variance);
}

ObjectiveSpec sharpe_objective(const PortfolioInstance& instance) {
  instance.validate();
  ObjectiveSpec spec{
      .name = "sharpe",
      .dim = instance.dim(),
      .eval = [instance](VectorRef w) { return negative_sharpe(instance, w); },
      .domain = Domain::simplex(),
      .known_min = std::nullopt,
      .known_minimizer = std::nullopt,
      .init = InitDistribution::uniform_simplex(instance.dim()),
  };
  return spec;
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(long row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col + 1);
}

}  // namespace

PortfolioInstance ingest_returns(std::istream& csv) {
  std::string line;
  long row = 1;
  if (!std::getline(csv, line)) throw PortfolioDataError("price file is empty");
  std::vector<std::string> names;
  for (auto& cell : split_row(line)) names.push_back(trim(cell));
  if (names.empty() || (names.size() == 1 && names[0].empty())) {
    throw PortfolioDataError("header row has no asset names");
  }
  const std::size_t d = names.size();

  std::vector<Vector> prices;
  while (std::getline(csv, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != d) {
      throw PortfolioDataError(where(row, 0) + ": expected " + std::to_string(d) + " cells, found " +
                               std::to_string(cells.size()));
    }
    Vector p(static_cast<Eigen::Index>(d));
    for (std::size_t j = 0; j < d; ++j) {
      const std::string cell = trim(cells[j]);
      double value = 0.0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (cell.empty() || ec != std::errc() || end != cell.data() + cell.size()) {
        throw PortfolioDataError(where(row, j) + ": not a number: '" + cell + "'");
      }
      if (!(value > 0.0) || !std::isfinite(value)) {
        throw PortfolioDataError(where(row, j) + ": price must be positive, got " + cell);
      }
      p[static_cast<Eigen::Index>(j)] = value;
    }
    prices.push_back(std::move(p));
  }
  if (prices.size() < 2) throw PortfolioDataError("need at least 2 price rows to form a return");

  const auto t = static_cast<Eigen::Index>(prices.size() - 1);
  Matrix returns(t, static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < t; ++k) {
    returns.row(k) = (prices[k + 1].array() / prices[k].array()).log().matrix().transpose();
  }
  PortfolioInstance out;
  out.asset_names = std::move(names);
  out.mu = returns.colwise().mean().transpose();
  const Matrix centered = returns.rowwise() - out.mu.transpose();
  const double divisor = static_cast<double>(std::max<Eigen::Index>(t - 1, 1));
  out.sigma = (centered.transpose() * centered) / divisor;
  out.sigma = 0.5 * (out.sigma + out.sigma.transpose());
  return out;
}

PortfolioInstance ingest_returns_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PortfolioDataError("cannot open price file " + path.string());
  return ingest_returns(in);
}

PortfolioInstance synthetic_portfolio(int n_assets, const RngPolicy& rng) {
  if (n_assets < 1) throw ConfigError("n_assets must be positive");
  const int factors = std::max(1, n_assets / 2);
  CounterStream s = rng.stream(StreamPurpose::Instance, 0, 0);
  Matrix loadings(n_assets, factors);
  for (int i = 0; i < n_assets; ++i) {
    for (int k = 0; k < factors; ++k) loadings(i, k) = 0.01 * s.normal();
  }
  Vector idio(n_assets);
  for (int i = 0; i < n_assets; ++i) idio[i] = std::pow(s.uniform(0.005, 0.03), 2);

  PortfolioInstance out;
  out.sigma = loadings * loadings.transpose();
  out.sigma.diagonal() += idio;
  out.sigma = 0.5 * (out.sigma + out.sigma.transpose());
  out.mu.resize(n_assets);
  for (int i = 0; i < n_assets; ++i) out.mu[i] = s.uniform(-0.0005, 0.0015);
  if (out.mu.maxCoeff() <= 0.0) out.mu[0] = 0.001;
  for (int i = 0; i < n_assets; ++i) out.asset_names.push_back("asset" + std::to_string(i + 1));
  return out;
}

}  // namespace dcbo
