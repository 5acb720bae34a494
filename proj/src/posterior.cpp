#include "dppbo/posterior.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "dppbo/errors.hpp"

namespace dppbo {

namespace {

constexpr double kMaxConditionNumber = 1e12;

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, std::span<const int> rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(r) = m.row(rows[r]);
  return out;
}

Eigen::MatrixXd select_cols(const Eigen::MatrixXd& m, std::span<const int> cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) out.col(c) = m.col(cols[c]);
  return out;
}

}  // namespace

std::vector<Observation> History::flatten() const {
  std::vector<Observation> all;
  for (const auto& r : rounds_) all.insert(all.end(), r.begin(), r.end());
  return all;
}

bool History::empty() const {
  for (const auto& r : rounds_) {
    if (!r.empty()) return false;
  }
  return true;
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& k) {
  const Eigen::Index n = k.rows();
  if (k.cols() != n) throw ConfigError("psd_factor: matrix must be square");
  if (!k.allFinite()) throw NumericalError("psd_factor: non-finite covariance entry");
  const Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
  const double trace = sym.trace();
  if (trace == 0.0 && sym.isZero(0.0)) return Eigen::MatrixXd(n, 0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success) throw NumericalError("psd_factor: eigendecomposition failed");
  const double tol = 1e-8 * std::abs(trace) / static_cast<double>(n);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  if (lam.minCoeff() < -tol) {
    throw NumericalError("psd_factor: covariance is indefinite (min eigenvalue " +
                         std::to_string(lam.minCoeff()) + ")");
  }
  // Directions this small contribute nothing measurable to a draw.
  const double keep = 1e-12 * std::abs(trace) / static_cast<double>(n);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i) rank += lam[i] > keep ? 1 : 0;
  Eigen::MatrixXd factor(n, rank);
  Eigen::Index c = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam[i] > keep) factor.col(c++) = eig.eigenvectors().col(i) * std::sqrt(lam[i]);
  }
  return factor;
}

GridPrior::GridPrior(std::shared_ptr<const DomainGrid> grid, Eigen::VectorXd mean,
                     Eigen::MatrixXd cov)
    : grid_(std::move(grid)), mean_(std::move(mean)), cov_(std::move(cov)) {
  if (!grid_) throw ConfigError("GridPrior: null grid");
  const Eigen::Index n = grid_->size();
  if (mean_.size() != n || cov_.rows() != n || cov_.cols() != n) {
    throw ConfigError("GridPrior: mean/covariance shape does not match the grid");
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  factor_ = psd_factor(cov_);
}

Eigen::VectorXd GridPrior::sample(RandomStream& rng) const {
  if (factor_.cols() == 0) return mean_;
  return mean_ + factor_ * rng.normal_vector(factor_.cols());
}

GaussianPosterior::GaussianPosterior(std::shared_ptr<const GridPrior> prior, double noise_variance)
    : prior_(std::move(prior)), noise_variance_(noise_variance) {
  if (!(noise_variance_ > 0.0) || !std::isfinite(noise_variance_)) {
    throw ConfigError("noise variance must be positive");
  }
  mean_ = prior_->mean();
  cov_ = prior_->covariance();
  chol_.resize(0, 0);
  prior_cross_.resize(prior_->size(), 0);
}

GaussianPosterior GaussianPosterior::prior(std::shared_ptr<const DomainGrid> grid,
                                           const KernelSpec& kernel, double noise_variance) {
  Eigen::MatrixXd k = gram_matrix(kernel, *grid);
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(grid->size());
  return from_prior(std::make_shared<GridPrior>(std::move(grid), std::move(mu), std::move(k)),
                    noise_variance);
}

GaussianPosterior GaussianPosterior::from_moments(std::shared_ptr<const DomainGrid> grid,
                                                  Eigen::VectorXd mean, Eigen::MatrixXd cov,
                                                  double noise_variance) {
  return from_prior(std::make_shared<GridPrior>(std::move(grid), std::move(mean), std::move(cov)),
                    noise_variance);
}

GaussianPosterior GaussianPosterior::from_prior(std::shared_ptr<const GridPrior> prior,
                                                double noise_variance) {
  if (!prior) throw ConfigError("GaussianPosterior: null prior");
  return GaussianPosterior(std::move(prior), noise_variance);
}

GaussianPosterior GaussianPosterior::condition(std::span<const Observation> obs, int round) const {
  if (obs.empty()) return *this;
  const int n_grid = size();
  std::vector<int> idx;
  idx.reserve(obs.size());
  Eigen::VectorXd y(static_cast<Eigen::Index>(obs.size()));
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (obs[i].index < 0 || obs[i].index >= n_grid) {
      throw ConfigError("condition: observation index " + std::to_string(obs[i].index) +
                        " outside grid of size " + std::to_string(n_grid));
    }
    if (!std::isfinite(obs[i].y)) throw NumericalError("condition: non-finite reward", round);
    idx.push_back(obs[i].index);
    y[static_cast<Eigen::Index>(i)] = obs[i].y;
  }
  const auto m = static_cast<Eigen::Index>(idx.size());
  const Eigen::Index n_obs = chol_.rows();
  const Eigen::MatrixXd noise = noise_variance_ * Eigen::MatrixXd::Identity(m, m);

  GaussianPosterior out = *this;

  // Extend the cached factor of K_prior[O, O] + noise * I by the new block.
  const Eigen::MatrixXd prior_new = select_cols(prior_->covariance(), idx);  // N x m
  Eigen::MatrixXd lower_left(m, n_obs);
  Eigen::MatrixXd schur = select_rows(prior_new, idx) + noise;
  if (n_obs > 0) {
    Eigen::MatrixXd cross(n_obs, m);
    for (Eigen::Index r = 0; r < n_obs; ++r) cross.row(r) = prior_new.row(observed_[r].index);
    const Eigen::MatrixXd c12 = chol_.triangularView<Eigen::Lower>().solve(cross);
    lower_left = c12.transpose();
    schur -= c12.transpose() * c12;
  }
  Eigen::LLT<Eigen::MatrixXd> block(0.5 * (schur + schur.transpose()));
  if (block.info() != Eigen::Success) {
    throw NumericalError("condition: observed system is numerically indefinite", round);
  }
  out.chol_ = Eigen::MatrixXd::Zero(n_obs + m, n_obs + m);
  out.chol_.topLeftCorner(n_obs, n_obs) = chol_;
  out.chol_.bottomLeftCorner(m, n_obs) = lower_left;
  out.chol_.bottomRightCorner(m, m) = block.matrixL();
  const Eigen::VectorXd diag = out.chol_.diagonal();
  const double ratio = diag.maxCoeff() / diag.minCoeff();
  if (!std::isfinite(ratio) || ratio * ratio > kMaxConditionNumber) {
    throw NumericalError("condition: observed system condition number exceeds 1e12", round);
  }
  out.prior_cross_.conservativeResize(n_grid, n_obs + m);
  out.prior_cross_.rightCols(m) = prior_new;
  out.observed_.insert(out.observed_.end(), obs.begin(), obs.end());

  // Schur update of the current moments.
  const Eigen::MatrixXd k_s = select_cols(cov_, idx);  // N x m
  Eigen::MatrixXd c = select_rows(k_s, idx) + noise;
  Eigen::LLT<Eigen::MatrixXd> c_llt(0.5 * (c + c.transpose()));
  if (c_llt.info() != Eigen::Success) {
    throw NumericalError("condition: posterior system is numerically indefinite", round);
  }
  Eigen::VectorXd resid(m);
  for (Eigen::Index i = 0; i < m; ++i) resid[i] = y[i] - mean_[idx[i]];
  out.mean_ = mean_ + k_s * c_llt.solve(resid);
  const Eigen::MatrixXd gain = c_llt.solve(k_s.transpose());  // m x N
  out.cov_ = cov_ - k_s * gain;
  out.cov_ = 0.5 * (out.cov_ + out.cov_.transpose());
  if (!out.mean_.allFinite() || !out.cov_.allFinite()) {
    throw NumericalError("condition: non-finite posterior", round);
  }
  return out;
}

GaussianPosterior GaussianPosterior::hallucinate(int index) const {
  if (index < 0 || index >= size()) throw ConfigError("hallucinate: index out of range");
  if (!(cov_(index, index) > 0.0)) return *this;
  const Observation fake{index, mean_[index]};
  return condition(std::span<const Observation>(&fake, 1));
}

Eigen::VectorXd GaussianPosterior::sample_path(RandomStream& rng) const {
  Eigen::VectorXd f = prior_->sample(rng);
  const Eigen::Index n_obs = chol_.rows();
  if (n_obs == 0) return f;
  const double sigma = std::sqrt(noise_variance_);
  Eigen::VectorXd resid(n_obs);
  for (Eigen::Index r = 0; r < n_obs; ++r) {
    resid[r] = observed_[r].y - f[observed_[r].index] - sigma * rng.normal();
  }
  chol_.triangularView<Eigen::Lower>().solveInPlace(resid);
  chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(resid);
  f += prior_cross_ * resid;
  return f;
}

Eigen::VectorXd GaussianPosterior::stddev() const {
  return cov_.diagonal().cwiseMax(0.0).cwiseSqrt();
}

int argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& v) {
  int best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = static_cast<int>(i);
  }
  return best;
}

int argmax_random_ties(const Eigen::Ref<const Eigen::VectorXd>& v, RandomStream& rng) {
  const double top = v.maxCoeff();
  int ties = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) ties += v[i] == top ? 1 : 0;
  if (ties <= 1) return argmax_lowest(v);
  int pick = rng.index(ties);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == top && pick-- == 0) return static_cast<int>(i);
  }
  return argmax_lowest(v);
}

}  // namespace dppbo
