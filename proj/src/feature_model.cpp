#include "dppbo/feature_model.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dppbo/errors.hpp"

namespace dppbo {

namespace {

constexpr int kMaxFeatures = 4096;
constexpr double kMaxNormalCondition = 1e15;

}  // namespace

void gauss_hermite(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (n < 1) throw ConfigError("gauss_hermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes = eig.eigenvalues();
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double v = eig.eigenvectors()(0, k);
    weights[k] = std::sqrt(std::numbers::pi) * v * v;
  }
}

FeatureModel::FeatureModel(std::shared_ptr<const DomainGrid> grid, const KernelSpec& kernel,
                           double noise_variance, int nodes_per_dim)
    : grid_(std::move(grid)), kernel_(kernel), noise_variance_(noise_variance) {
  if (!grid_) throw ConfigError("FeatureModel: null grid");
  kernel_.validate();
  if (!(noise_variance_ > 0.0)) throw ConfigError("FeatureModel: noise variance must be positive");
  if (nodes_per_dim < 0) throw ConfigError("FeatureModel: negative node count");

  if (nodes_per_dim > 0) {
    build(nodes_per_dim);
    if (kernel_error_ > kMaxKernelError) {
      throw ConfigError("FeatureModel: " + std::to_string(nodes_per_dim) +
                        " nodes per dimension give kernel error " +
                        std::to_string(kernel_error_));
    }
    return;
  }
  for (int nodes = 4;; nodes += 2) {
    const double total = 2.0 * std::pow(nodes, grid_->dimension());
    if (total > kMaxFeatures) {
      throw ConfigError("FeatureModel: no feature count under the limit reaches the kernel tolerance");
    }
    build(nodes);
    if (kernel_error_ <= kMaxKernelError) return;
  }
}

void FeatureModel::build(int nodes) {
  Eigen::VectorXd t, w;
  gauss_hermite(nodes, t, w);
  const int d = grid_->dimension();
  const double l = kernel_.lengthscale();
  int combos = 1;
  for (int k = 0; k < d; ++k) combos *= nodes;

  const Eigen::MatrixXd& pts = grid_->points();
  features_.resize(grid_->size(), 2 * combos);
  std::vector<int> digit(d, 0);
  for (int c = 0; c < combos; ++c) {
    Eigen::VectorXd omega(d);
    double weight = kernel_.output_scale;
    for (int k = 0; k < d; ++k) {
      omega[k] = std::numbers::sqrt2 * t[digit[k]] / l;
      weight *= w[digit[k]] / std::sqrt(std::numbers::pi);
    }
    const double amp = std::sqrt(weight);
    const Eigen::VectorXd phase = pts * omega;
    features_.col(2 * c) = amp * phase.array().cos().matrix();
    features_.col(2 * c + 1) = amp * phase.array().sin().matrix();
    for (int k = d - 1; k >= 0; --k) {
      if (++digit[k] < nodes) break;
      digit[k] = 0;
    }
  }
  nodes_per_dim_ = nodes;
  const Eigen::MatrixXd exact = gram_matrix(kernel_, *grid_);
  const double denom = exact.norm();
  kernel_error_ = denom > 0.0 ? (features_ * features_.transpose() - exact).norm() / denom : 0.0;
}

FeatureModel::WeightPosterior FeatureModel::fit(std::span<const Observation> history) const {
  const int m = num_features();
  Eigen::MatrixXd precision = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
  if (!history.empty()) {
    Eigen::MatrixXd phi(static_cast<Eigen::Index>(history.size()), m);
    Eigen::VectorXd y(static_cast<Eigen::Index>(history.size()));
    for (std::size_t i = 0; i < history.size(); ++i) {
      if (history[i].index < 0 || history[i].index >= grid_->size()) {
        throw ConfigError("FeatureModel::fit: observation index out of range");
      }
      phi.row(i) = features_.row(history[i].index);
      y[i] = history[i].y;
    }
    precision.noalias() += phi.transpose() * phi / noise_variance_;
    rhs = phi.transpose() * y / noise_variance_;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(precision);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("FeatureModel::fit: normal equations are not positive definite");
  }
  WeightPosterior post;
  post.precision_factor = llt.matrixL();
  const Eigen::VectorXd diag = post.precision_factor.diagonal();
  const double ratio = diag.maxCoeff() / diag.minCoeff();
  if (!std::isfinite(ratio) || ratio * ratio > kMaxNormalCondition) {
    throw NumericalError("FeatureModel::fit: normal equations are ill-conditioned");
  }
  post.mean = llt.solve(rhs);
  return post;
}

Eigen::VectorXd FeatureModel::sample_path(std::span<const Observation> history,
                                          RandomStream& rng) const {
  const WeightPosterior post = fit(history);
  Eigen::VectorXd z = rng.normal_vector(num_features());
  post.precision_factor.triangularView<Eigen::Lower>().transpose().solveInPlace(z);
  return features_ * (post.mean + z);
}

Eigen::VectorXd FeatureModel::mean_path(std::span<const Observation> history) const {
  return features_ * fit(history).mean;
}

Eigen::MatrixXd FeatureModel::posterior_covariance(std::span<const Observation> history) const {
  const WeightPosterior post = fit(history);
  // Sigma = L^-T L^-1, so Phi Sigma Phi^T = (L^-1 Phi^T)^T (L^-1 Phi^T).
  const Eigen::MatrixXd half =
      post.precision_factor.triangularView<Eigen::Lower>().solve(features_.transpose());
  return half.transpose() * half;
}

}  // namespace dppbo
