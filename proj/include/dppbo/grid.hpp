#ifndef DPPBO_GRID_HPP
#define DPPBO_GRID_HPP

#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dppbo {

/// Finite evaluation domain. Row i of points() is the point with index i;
/// that index is the identity of the point everywhere else in the library.
class DomainGrid {
 public:
  /// Takes an N x d matrix of distinct points, N >= 1, d >= 1.
  explicit DomainGrid(Eigen::MatrixXd points);

  /// Tensor grid over a box. bounds[k] = (lo, hi) and resolution[k] >= 1
  /// points on axis k; a single point sits at the midpoint. Axis 0 varies
  /// slowest.
  static DomainGrid uniform(const std::vector<std::pair<double, double>>& bounds,
                            const std::vector<int>& resolution);

  int size() const { return static_cast<int>(points_.rows()); }
  int dimension() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  Eigen::VectorXd point(int index) const { return points_.row(index).transpose(); }

 private:
  Eigen::MatrixXd points_;
};

}  // namespace dppbo

#endif  // DPPBO_GRID_HPP
