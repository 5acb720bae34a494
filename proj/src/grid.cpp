#include "dppbo/grid.hpp"

#include <algorithm>
#include <numeric>

#include "dppbo/errors.hpp"

namespace dppbo {

DomainGrid::DomainGrid(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw ConfigError("DomainGrid: need at least one point of dimension >= 1");
  }
  if (!points_.allFinite()) throw ConfigError("DomainGrid: non-finite coordinate");

  // Distinctness via lexicographic sort.
  std::vector<Eigen::Index> order(points_.rows());
  std::iota(order.begin(), order.end(), 0);
  auto less = [this](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index k = 0; k < points_.cols(); ++k) {
      if (points_(a, k) != points_(b, k)) return points_(a, k) < points_(b, k);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!less(order[i - 1], order[i])) {
      throw ConfigError("DomainGrid: duplicate point at index " +
                        std::to_string(order[i]));
    }
  }
}

DomainGrid DomainGrid::uniform(const std::vector<std::pair<double, double>>& bounds,
                               const std::vector<int>& resolution) {
  if (bounds.empty() || bounds.size() != resolution.size()) {
    throw ConfigError("DomainGrid::uniform: bounds and resolution must be non-empty and agree");
  }
  const auto d = static_cast<Eigen::Index>(bounds.size());
  Eigen::Index n = 1;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (resolution[k] < 1) throw ConfigError("DomainGrid::uniform: resolution must be >= 1");
    if (!(bounds[k].first < bounds[k].second)) {
      throw ConfigError("DomainGrid::uniform: empty interval on axis " + std::to_string(k));
    }
    n *= resolution[k];
  }

  Eigen::MatrixXd pts(n, d);
  std::vector<int> counter(d, 0);
  for (Eigen::Index row = 0; row < n; ++row) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto [lo, hi] = bounds[k];
      const int m = resolution[k];
      pts(row, k) = m == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * counter[k] / (m - 1);
    }
    for (Eigen::Index k = d - 1; k >= 0; --k) {
      if (++counter[k] < resolution[k]) break;
      counter[k] = 0;
    }
  }
  return DomainGrid(std::move(pts));
}

}  // namespace dppbo
