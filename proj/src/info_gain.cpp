#include "dppbo/info_gain.hpp"

#include <cmath>

#include "dppbo/errors.hpp"

namespace dppbo {

double info_gain(const GaussianPosterior& posterior, const Batch& x) {
  if (x.empty()) return 0.0;
  validate_batch(x, posterior.size());
  Eigen::MatrixXd m = restrict_to(posterior.covariance(), x) / posterior.noise_variance();
  m.diagonal().array() += 1.0;
  return 0.5 * logdet_or_neg_inf(m);
}

double info_gain_sequential(const GaussianPosterior& posterior, const Batch& x) {
  if (x.empty()) return 0.0;
  validate_batch(x, posterior.size());
  double total = 0.0;
  GaussianPosterior current = posterior;
  for (std::size_t b = 0; b < x.size(); ++b) {
    const double var = std::max(current.covariance()(x[b], x[b]), 0.0);
    total += 0.5 * std::log1p(var / current.noise_variance());
    if (b + 1 < x.size()) current = current.hallucinate(x[b]);
  }
  return total;
}

GreedyInfoGain greedy_info_gain(const GaussianPosterior& posterior, int count) {
  if (count < 0) throw ConfigError("greedy_info_gain: negative count");
  GreedyInfoGain out;
  GaussianPosterior current = posterior;
  for (int k = 0; k < count; ++k) {
    const int best = argmax_lowest(current.covariance().diagonal());
    const double var = std::max(current.covariance()(best, best), 0.0);
    const double gain = 0.5 * std::log1p(var / current.noise_variance());
    out.points.push_back(best);
    out.increments.push_back(gain);
    out.total += gain;
    current = current.hallucinate(best);
  }
  return out;
}

}  // namespace dppbo
