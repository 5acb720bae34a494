#include "dppbo/batch_distribution.hpp"

#include <cmath>

#include "dppbo/errors.hpp"

namespace dppbo {

BatchDistribution::BatchDistribution(int domain_size, int batch_size)
    : domain_size_(domain_size), batch_size_(batch_size) {
  if (domain_size < 1 || batch_size < 1) throw ConfigError("BatchDistribution: empty domain or batch");
  std::uint64_t outcomes = 1;
  for (int b = 0; b < batch_size; ++b) {
    outcomes *= static_cast<std::uint64_t>(domain_size);
    if (outcomes > kMaxOutcomes) {
      throw ConfigError("BatchDistribution: N^B exceeds the enumeration limit of 1e6");
    }
  }
  probs_.assign(outcomes, 0.0);
}

BatchDistribution BatchDistribution::empirical(int domain_size, int batch_size,
                                               std::span<const Batch> draws) {
  BatchDistribution out(domain_size, batch_size);
  if (draws.empty()) return out;
  const double w = 1.0 / static_cast<double>(draws.size());
  for (const Batch& x : draws) out.probs_[out.encode(x)] += w;
  return out;
}

std::size_t BatchDistribution::encode(const Batch& x) const {
  if (static_cast<int>(x.size()) != batch_size_) throw ConfigError("encode: wrong batch size");
  std::size_t code = 0;
  for (int i : x) {
    if (i < 0 || i >= domain_size_) throw ConfigError("encode: index out of range");
    code = code * static_cast<std::size_t>(domain_size_) + static_cast<std::size_t>(i);
  }
  return code;
}

Batch BatchDistribution::decode(std::size_t code) const {
  Batch x(batch_size_);
  for (int b = batch_size_ - 1; b >= 0; --b) {
    x[b] = static_cast<int>(code % static_cast<std::size_t>(domain_size_));
    code /= static_cast<std::size_t>(domain_size_);
  }
  return x;
}

double BatchDistribution::total() const {
  double s = 0.0;
  for (double p : probs_) s += p;
  return s;
}

double BatchDistribution::total_variation(const BatchDistribution& other) const {
  if (other.domain_size_ != domain_size_ || other.batch_size_ != batch_size_) {
    throw ConfigError("total_variation: incompatible distributions");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < probs_.size(); ++i) s += std::abs(probs_[i] - other.probs_[i]);
  return 0.5 * s;
}

Eigen::VectorXd BatchDistribution::slot_marginal(int slot) const {
  if (slot < 0 || slot >= batch_size_) throw ConfigError("slot_marginal: slot out of range");
  Eigen::VectorXd m = Eigen::VectorXd::Zero(domain_size_);
  for (std::size_t c = 0; c < probs_.size(); ++c) m[decode(c)[slot]] += probs_[c];
  return m;
}

BatchDistribution exact_batch_distribution(const LEnsemble& l, int batch_size,
                                           const Eigen::VectorXd& weights) {
  if (weights.size() != l.size()) throw ConfigError("exact_batch_distribution: weight size mismatch");
  BatchDistribution dist(l.size(), batch_size);
  auto& p = dist.probabilities();
  double total = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const Batch x = dist.decode(c);
    double w = 1.0;
    for (int i : x) w *= weights[i];
    if (w == 0.0) continue;
    const double ld = restricted_logdet(l, x);
    p[c] = std::isinf(ld) ? 0.0 : w * std::exp(ld);
    total += p[c];
  }
  if (!(total > 0.0)) throw NumericalError("exact_batch_distribution: every batch has zero weight");
  for (double& v : p) v /= total;
  return dist;
}

}  // namespace dppbo
