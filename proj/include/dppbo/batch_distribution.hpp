#ifndef DPPBO_BATCH_DISTRIBUTION_HPP
#define DPPBO_BATCH_DISTRIBUTION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dppbo/lensemble.hpp"

namespace dppbo {

/// A probability table over all ordered batches in {0..N-1}^B. Batches are
/// encoded in base N with slot 0 as the most significant digit.
class BatchDistribution {
 public:
  static constexpr std::uint64_t kMaxOutcomes = 1'000'000;

  BatchDistribution(int domain_size, int batch_size);

  static BatchDistribution empirical(int domain_size, int batch_size, std::span<const Batch> draws);

  int domain_size() const { return domain_size_; }
  int batch_size() const { return batch_size_; }
  std::size_t num_outcomes() const { return probs_.size(); }

  std::size_t encode(const Batch& x) const;
  Batch decode(std::size_t code) const;

  double probability(const Batch& x) const { return probs_[encode(x)]; }
  const std::vector<double>& probabilities() const { return probs_; }
  std::vector<double>& probabilities() { return probs_; }

  double total() const;
  double total_variation(const BatchDistribution& other) const;
  /// Marginal distribution of a single slot.
  Eigen::VectorXd slot_marginal(int slot) const;

 private:
  int domain_size_;
  int batch_size_;
  std::vector<double> probs_;
};

/// Brute-force P(X) proportional to prod_b weights[x_b] * det(L_X) over all
/// ordered batches. Oracle only: refuses N^B above kMaxOutcomes.
BatchDistribution exact_batch_distribution(const LEnsemble& l, int batch_size,
                                           const Eigen::VectorXd& weights);

}  // namespace dppbo

#endif  // DPPBO_BATCH_DISTRIBUTION_HPP
