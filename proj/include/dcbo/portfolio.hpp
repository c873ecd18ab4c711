#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "dcbo/objective.hpp"
#include "dcbo/rng.hpp"

namespace dcbo {

struct PortfolioInstance {
  Vector mu;
  Matrix sigma;
  std::vector<std::string> asset_names;

  int dim() const { return static_cast<int>(mu.size()); }
  /// Throws ConfigError unless sigma is square, symmetric within 1e-12 and
  /// has eigenvalues >= -1e-10.
  void validate() const;
};

/// Malformed price file; the message names the offending row and column.
class PortfolioDataError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// -w'mu / sqrt(w' Sigma w) for any w; +inf when w' Sigma w <= 0.
double negative_sharpe(const PortfolioInstance& instance, VectorRef w);

/// Negative Sharpe ratio over the probability simplex, agents drawn
/// uniformly on the simplex.
ObjectiveSpec sharpe_objective(const PortfolioInstance& instance);

/// CSV with a header of asset names and one row of positive prices per
/// period. mu and Sigma are the sample mean and unbiased covariance of the
/// per-period log returns.
PortfolioInstance ingest_returns(std::istream& csv);
PortfolioInstance ingest_returns_file(const std::filesystem::path& path);

/// Random instance with a low-rank-plus-diagonal covariance (PSD by
/// construction) and daily-scale means, at least one of them positive.
PortfolioInstance synthetic_portfolio(int n_assets, const RngPolicy& rng);

}  // namespace dcbo
