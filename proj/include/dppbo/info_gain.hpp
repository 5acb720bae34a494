#ifndef DPPBO_INFO_GAIN_HPP
#define DPPBO_INFO_GAIN_HPP

#include <vector>

#include "dppbo/lensemble.hpp"
#include "dppbo/posterior.hpp"

namespace dppbo {

/// 1/2 log det(I + K_X / noise) under `posterior`'s covariance.
double info_gain(const GaussianPosterior& posterior, const Batch& x);

/// The same quantity as a chain of one-point updates:
/// 1/2 sum_b log(1 + sigma_{b-1}^2(x_b) / noise).
double info_gain_sequential(const GaussianPosterior& posterior, const Batch& x);

struct GreedyInfoGain {
  Batch points;
  std::vector<double> increments;
  double total = 0.0;
};

/// Greedy maximizer of info_gain over multisets of size `count` (largest
/// current variance first, lowest index on ties). Its total is a lower bound
/// on the maximum information gain from `count` observations.
GreedyInfoGain greedy_info_gain(const GaussianPosterior& posterior, int count);

}  // namespace dppbo

#endif  // DPPBO_INFO_GAIN_HPP
