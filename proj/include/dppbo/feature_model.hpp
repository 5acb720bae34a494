#ifndef DPPBO_FEATURE_MODEL_HPP
#define DPPBO_FEATURE_MODEL_HPP

#include <memory>
#include <span>

#include <Eigen/Core>

#include "dppbo/grid.hpp"
#include "dppbo/kernel.hpp"
#include "dppbo/posterior.hpp"
#include "dppbo/random.hpp"

namespace dppbo {

/// Gauss-Hermite nodes and weights for the weight function exp(-t^2),
/// computed with the Golub-Welsch eigenvalue method. Nodes ascending.
void gauss_hermite(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

/// Bayesian linear regression on deterministic quadrature Fourier features
/// of the squared-exponential kernel. Weights have an N(0, I) prior, so the
/// induced prior kernel is phi(x)^T phi(x').
class FeatureModel {
 public:
  static constexpr double kMaxKernelError = 0.05;

  /// nodes_per_dim = 0 picks the smallest node count whose induced kernel is
  /// within kMaxKernelError relative Frobenius error of the exact Gram matrix.
  /// An explicit count that misses the bound throws ConfigError.
  FeatureModel(std::shared_ptr<const DomainGrid> grid, const KernelSpec& kernel,
               double noise_variance, int nodes_per_dim = 0);

  struct WeightPosterior {
    Eigen::VectorXd mean;
    Eigen::MatrixXd precision_factor;  // lower Cholesky factor of the precision
  };

  /// Throws NumericalError when the normal equations are ill-conditioned.
  WeightPosterior fit(std::span<const Observation> history) const;

  /// phi(.)^T w for one weight draw w from the posterior given `history`.
  Eigen::VectorXd sample_path(std::span<const Observation> history, RandomStream& rng) const;
  Eigen::VectorXd mean_path(std::span<const Observation> history) const;
  /// Phi Sigma Phi^T over the grid.
  Eigen::MatrixXd posterior_covariance(std::span<const Observation> history) const;

  const Eigen::MatrixXd& features() const { return features_; }
  int num_features() const { return static_cast<int>(features_.cols()); }
  int nodes_per_dim() const { return nodes_per_dim_; }
  double kernel_error() const { return kernel_error_; }
  double noise_variance() const { return noise_variance_; }
  const DomainGrid& grid() const { return *grid_; }

 private:
  void build(int nodes_per_dim);

  std::shared_ptr<const DomainGrid> grid_;
  KernelSpec kernel_;
  double noise_variance_;
  int nodes_per_dim_ = 0;
  double kernel_error_ = 0.0;
  Eigen::MatrixXd features_;  // N x m
};

inline Eigen::VectorXd ff_fit_and_sample(const FeatureModel& model,
                                         std::span<const Observation> history, RandomStream& rng) {
  return model.sample_path(history, rng);
}

}  // namespace dppbo

#endif  // DPPBO_FEATURE_MODEL_HPP
