#include "dppbo/lensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "dppbo/errors.hpp"

namespace dppbo {

namespace {

// Pivot magnitude, relative to the largest diagonal entry, below which a
// restricted matrix is treated as exactly singular.
constexpr double kSingularPivot = 1e-13;

}  // namespace

Eigen::MatrixXd LEnsemble::dense() const {
  Eigen::MatrixXd m = data;
  m.diagonal().array() += ridge;
  if (scale.size() > 0) m = scale.asDiagonal() * m * scale.asDiagonal();
  return m;
}

Eigen::MatrixXd LEnsemble::restricted(const Batch& x) const {
  Eigen::MatrixXd sub = restrict_to(data, x);
  sub.diagonal().array() += ridge;
  if (scale.size() > 0) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      sub.row(i) *= scale[x[i]];
      sub.col(i) *= scale[x[i]];
    }
  }
  return sub;
}

LEnsemble make_lensemble(Eigen::MatrixXd matrix) {
  if (matrix.rows() != matrix.cols()) throw ConfigError("make_lensemble: matrix must be square");
  LEnsemble out;
  out.data = std::move(matrix);
  return out;
}

LEnsemble identity_lensemble(int n) {
  LEnsemble out;
  out.data = Eigen::MatrixXd::Zero(n, n);
  out.ridge = 1.0;
  out.lambda = 0.0;
  return out;
}

LEnsemble build_mi_lensemble(const Eigen::MatrixXd& cov, double noise_variance, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("build_mi_lensemble: lambda must be >= 0");
  if (!(noise_variance > 0.0)) throw ConfigError("build_mi_lensemble: noise variance must be > 0");
  LEnsemble out;
  out.data = (lambda / noise_variance) * cov;
  out.ridge = 1.0;
  out.lambda = lambda;
  return out;
}

LEnsemble build_mi_lensemble(const GaussianPosterior& posterior, double lambda) {
  return build_mi_lensemble(posterior.covariance(), posterior.noise_variance(), lambda);
}

LEnsemble build_reweighted_lensemble(const LEnsemble& l, const Eigen::VectorXd& weights) {
  if (weights.size() != l.size()) throw ConfigError("build_reweighted_lensemble: size mismatch");
  if ((weights.array() < 0.0).any()) throw ConfigError("build_reweighted_lensemble: negative weight");
  LEnsemble out = l;
  const Eigen::VectorXd root = weights.cwiseSqrt();
  out.scale = l.scale.size() > 0 ? Eigen::VectorXd(l.scale.cwiseProduct(root)) : root;
  return out;
}

Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& m, const Batch& x) {
  const auto k = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) sub(i, j) = m(x[i], x[j]);
  }
  return sub;
}

double logdet_or_neg_inf(const Eigen::MatrixXd& m) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (m.rows() == 0) return 0.0;
  const double scale = m.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !m.allFinite()) return kNegInf;

  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() == Eigen::Success) {
    const Eigen::VectorXd d = llt.matrixLLT().diagonal();
    if ((d.array().square() < kSingularPivot * scale).any()) return kNegInf;
    return 2.0 * d.array().log().sum();
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  double logdet = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double u = packed(i, i);
    if (std::abs(u) < kSingularPivot * scale) return kNegInf;
    sign *= u < 0.0 ? -1.0 : 1.0;
    logdet += std::log(std::abs(u));
  }
  return sign > 0.0 ? logdet : kNegInf;
}

double restricted_logdet(const LEnsemble& l, const Batch& x) {
  validate_batch(x, l.size());
  // det is permutation invariant; a canonical order makes it bitwise so.
  Batch sorted = x;
  std::sort(sorted.begin(), sorted.end());
  Eigen::MatrixXd core = restrict_to(l.data, sorted);
  core.diagonal().array() += l.ridge;
  double logdet = logdet_or_neg_inf(core);
  if (l.scale.size() > 0) {
    for (int i : x) logdet += 2.0 * std::log(l.scale[i]);
  }
  return std::isnan(logdet) ? -std::numeric_limits<double>::infinity() : logdet;
}

PmaxEstimate estimate_pmax(const GaussianPosterior& posterior, long draws, RandomStream& rng) {
  if (draws < 1) throw ConfigError("estimate_pmax: draws must be >= 1");
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(posterior.size());
  for (long i = 0; i < draws; ++i) {
    counts[argmax_random_ties(posterior.sample_path(rng), rng)] += 1.0;
  }
  return PmaxEstimate{counts / static_cast<double>(draws), draws};
}

void validate_batch(const Batch& x, int domain_size) {
  if (x.empty()) throw ConfigError("batch must contain at least one index");
  for (int i : x) {
    if (i < 0 || i >= domain_size) {
      throw ConfigError("batch index " + std::to_string(i) + " outside domain of size " +
                        std::to_string(domain_size));
    }
  }
}

}  // namespace dppbo
