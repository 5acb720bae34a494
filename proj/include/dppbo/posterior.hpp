#ifndef DPPBO_POSTERIOR_HPP
#define DPPBO_POSTERIOR_HPP

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dppbo/grid.hpp"
#include "dppbo/kernel.hpp"
#include "dppbo/random.hpp"

namespace dppbo {

struct Observation {
  int index = 0;
  double y = 0.0;
};

/// Observations segmented by round.
class History {
 public:
  void add_round(std::vector<Observation> round) { rounds_.push_back(std::move(round)); }
  const std::vector<std::vector<Observation>>& rounds() const { return rounds_; }
  std::size_t num_rounds() const { return rounds_.size(); }
  std::vector<Observation> flatten() const;
  bool empty() const;

 private:
  std::vector<std::vector<Observation>> rounds_;
};

/// Symmetric square root of a PSD matrix with eigenvalue clipping. Returns an
/// N x r factor F with F F^T = K, dropping zero-weight directions. Negative
/// eigenvalues down to -1e-8 * trace / N are clipped to zero; anything lower
/// throws NumericalError.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& k);

/// The GP prior on a grid: mean, covariance and a sampling factor. Shared
/// read-only by every posterior derived from it.
class GridPrior {
 public:
  GridPrior(std::shared_ptr<const DomainGrid> grid, Eigen::VectorXd mean, Eigen::MatrixXd cov);

  const DomainGrid& grid() const { return *grid_; }
  const std::shared_ptr<const DomainGrid>& grid_ptr() const { return grid_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  const Eigen::MatrixXd& factor() const { return factor_; }
  int size() const { return static_cast<int>(mean_.size()); }

  /// One joint draw from N(mean, cov).
  Eigen::VectorXd sample(RandomStream& rng) const;

 private:
  std::shared_ptr<const DomainGrid> grid_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

/// Exact GP posterior over a finite grid with homoscedastic Gaussian noise.
/// Values are immutable; conditioning returns a new posterior.
class GaussianPosterior {
 public:
  /// Zero-mean prior with the given kernel.
  static GaussianPosterior prior(std::shared_ptr<const DomainGrid> grid, const KernelSpec& kernel,
                                 double noise_variance);
  /// Treat (mean, cov) as the prior. Used for crafted test posteriors.
  static GaussianPosterior from_moments(std::shared_ptr<const DomainGrid> grid,
                                        Eigen::VectorXd mean, Eigen::MatrixXd cov,
                                        double noise_variance);
  static GaussianPosterior from_prior(std::shared_ptr<const GridPrior> prior, double noise_variance);

  /// Posterior after additionally observing `obs`. Throws NumericalError
  /// (tagged with `round`) when the observed system is not numerically
  /// positive definite or its condition number exceeds 1e12.
  GaussianPosterior condition(std::span<const Observation> obs, int round = -1) const;

  /// Conditions on y = mean[index]. A no-op when the variance at index is 0.
  GaussianPosterior hallucinate(int index) const;

  /// Joint draw f ~ N(mean, cov) over the whole grid, by correcting a
  /// prior draw with the cached factor of the observed system.
  Eigen::VectorXd sample_path(RandomStream& rng) const;

  int size() const { return static_cast<int>(mean_.size()); }
  const DomainGrid& grid() const { return prior_->grid(); }
  const GridPrior& prior_model() const { return *prior_; }
  const std::shared_ptr<const GridPrior>& prior_ptr() const { return prior_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  double noise_variance() const { return noise_variance_; }
  /// Pointwise posterior standard deviation, negatives clipped to 0.
  Eigen::VectorXd stddev() const;
  const std::vector<Observation>& observations() const { return observed_; }
  /// Lower Cholesky factor of K_prior[O, O] + noise * I over observed indices O.
  const Eigen::MatrixXd& cholesky_cache() const { return chol_; }

 private:
  GaussianPosterior(std::shared_ptr<const GridPrior> prior, double noise_variance);

  std::shared_ptr<const GridPrior> prior_;
  double noise_variance_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  std::vector<Observation> observed_;
  Eigen::MatrixXd chol_;
  Eigen::MatrixXd prior_cross_;  // K_prior[:, O]
};

inline GaussianPosterior gp_condition(const GaussianPosterior& p, std::span<const Observation> obs) {
  return p.condition(obs);
}
inline Eigen::VectorXd gp_sample_path(const GaussianPosterior& p, RandomStream& rng) {
  return p.sample_path(rng);
}
inline GaussianPosterior hallucinate(const GaussianPosterior& p, int index) {
  return p.hallucinate(index);
}

/// Lowest index among the maxima.
int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& v);
/// Uniformly random index among exact ties for the maximum.
int argmax_random_ties(const Eigen::Ref<const Eigen::VectorXd>& v, RandomStream& rng);

}  // namespace dppbo

#endif  // DPPBO_POSTERIOR_HPP
