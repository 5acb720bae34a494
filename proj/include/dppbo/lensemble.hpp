#ifndef DPPBO_LENSEMBLE_HPP
#define DPPBO_LENSEMBLE_HPP

#include <vector>

#include <Eigen/Core>

#include "dppbo/posterior.hpp"
#include "dppbo/random.hpp"

namespace dppbo {

/// Ordered grid indices proposed in one round. Duplicates are legal.
using Batch = std::vector<int>;

/// Similarity model over the grid. Restricted to a batch X of size k it is
///
///   L_X = diag(s_X) (ridge * I_k + data[X, X]) diag(s_X)
///
/// The identity is added per batch slot, so a regularized ensemble gives
/// duplicate indices a nonsingular submatrix. `scale` is empty for s = 1.
/// `lambda` records the multiplier applied to the data part.
struct LEnsemble {
  Eigen::MatrixXd data;
  double ridge = 0.0;
  Eigen::VectorXd scale;
  double lambda = 1.0;

  int size() const { return static_cast<int>(data.rows()); }
  bool regularized() const { return ridge > 0.0; }
  /// The N x N matrix diag(s) (ridge * I + data) diag(s).
  Eigen::MatrixXd dense() const;
  /// L_X, with rows and columns repeated for duplicate indices.
  Eigen::MatrixXd restricted(const Batch& x) const;
};

/// An unregularized ensemble from an explicit PSD matrix.
LEnsemble make_lensemble(Eigen::MatrixXd matrix);

/// Empirical distribution of the posterior-sample argmax.
struct PmaxEstimate {
  Eigen::VectorXd probabilities;
  long draws = 0;
};

LEnsemble identity_lensemble(int n);

/// I + lambda * K / noise_variance. lambda = 0 gives the identity.
LEnsemble build_mi_lensemble(const Eigen::MatrixXd& cov, double noise_variance, double lambda);
LEnsemble build_mi_lensemble(const GaussianPosterior& posterior, double lambda);

/// L~_ij = sqrt(p_i p_j) L_ij, so that det(L~_X) = prod_b p(x_b) det(L_X)
/// for every batch, duplicates included.
LEnsemble build_reweighted_lensemble(const LEnsemble& l, const Eigen::VectorXd& weights);

/// m[X, X] with rows and columns repeated for duplicate indices.
Eigen::MatrixXd restrict_to(const Eigen::MatrixXd& m, const Batch& x);

/// log det of a symmetric matrix; -infinity when it is numerically singular
/// or its determinant is not positive. Cholesky first, LU as fallback.
double logdet_or_neg_inf(const Eigen::MatrixXd& m);

/// log det L_X; -infinity is a legal value meaning zero weight.
double restricted_logdet(const LEnsemble& l, const Batch& x);

/// Argmax frequencies over `draws` joint posterior samples, exact ties
/// broken uniformly at random.
PmaxEstimate estimate_pmax(const GaussianPosterior& posterior, long draws, RandomStream& rng);

void validate_batch(const Batch& x, int domain_size);

}  // namespace dppbo

#endif  // DPPBO_LENSEMBLE_HPP
