#include "dppbo/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dppbo/batch_distribution.hpp"
#include "dppbo/errors.hpp"

namespace dppbo {

namespace {

constexpr int kMaxInitAttempts = 100;
constexpr std::size_t kMaxTransitionStates = 4096;

bool zero_weight(double logdet) { return std::isinf(logdet) && logdet < 0.0; }

}  // namespace

std::string to_string(McmcKind kind) {
  switch (kind) {
    case McmcKind::kSingleSwap: return "single-swap";
    case McmcKind::kFullBatch: return "full-batch";
    case McmcKind::kGibbsLi: return "gibbs-li";
  }
  return "unknown";
}

McmcKind parse_mcmc_kind(const std::string& name) {
  if (name == "single-swap") return McmcKind::kSingleSwap;
  if (name == "full-batch") return McmcKind::kFullBatch;
  if (name == "gibbs-li") return McmcKind::kGibbsLi;
  throw ConfigError("unknown MCMC kind '" + name + "'");
}

int default_mcmc_steps(int batch_size, int domain_size) {
  const double scaled = 20.0 * batch_size * std::log(static_cast<double>(std::max(domain_size, 1)));
  return std::max(50 * batch_size, static_cast<int>(std::ceil(scaled)));
}

double metropolis_acceptance(double logdet_current, double logdet_proposed) {
  if (zero_weight(logdet_proposed)) return 0.0;
  if (zero_weight(logdet_current)) return 1.0;
  return std::min(1.0, std::exp(logdet_proposed - logdet_current));
}

double gibbs_acceptance(double logdet_current, double logdet_proposed) {
  if (zero_weight(logdet_proposed)) return 0.0;
  if (zero_weight(logdet_current)) return 1.0;
  // det' / (det' + det) = 1 / (1 + exp(ld - ld'))
  return 1.0 / (1.0 + std::exp(logdet_current - logdet_proposed));
}

Batch initial_batch(const LEnsemble& l, int batch_size, const ProposalFn& propose,
                    RandomStream& rng) {
  if (batch_size < 1) throw ConfigError("MCMC: batch size must be >= 1");
  Batch x(batch_size);
  for (int attempt = 0; attempt < kMaxInitAttempts; ++attempt) {
    for (int& i : x) i = propose(rng);
    if (!zero_weight(restricted_logdet(l, x))) return x;
  }
  throw NumericalError("MCMC: no initial batch with positive determinant after 100 attempts");
}

Batch mcmc_sample(McmcKind kind, const LEnsemble& l, int batch_size, int steps,
                  const ProposalFn& propose, RandomStream& rng, McmcStats* stats) {
  if (steps < 0) throw ConfigError("MCMC: steps must be >= 0");
  Batch x = initial_batch(l, batch_size, propose, rng);
  double logdet = restricted_logdet(l, x);
  McmcStats local;
  Batch candidate = x;

  for (int s = 0; s < steps; ++s) {
    if (kind == McmcKind::kGibbsLi && !rng.coin()) continue;
    candidate = x;
    if (kind == McmcKind::kFullBatch) {
      for (int& i : candidate) i = propose(rng);
    } else {
      const int slot = rng.index(batch_size);
      candidate[slot] = propose(rng);
    }
    ++local.proposed;
    const double cand_logdet = candidate == x ? logdet : restricted_logdet(l, candidate);
    const double alpha = kind == McmcKind::kGibbsLi ? gibbs_acceptance(logdet, cand_logdet)
                                                    : metropolis_acceptance(logdet, cand_logdet);
    if (alpha >= 1.0 || rng.uniform() < alpha) {
      x.swap(candidate);
      logdet = cand_logdet;
      ++local.accepted;
    }
  }
  if (stats) *stats = local;
  return x;
}

Batch mcmc_single_swap(const LEnsemble& l, int batch_size, int steps, const ProposalFn& propose,
                       RandomStream& rng) {
  return mcmc_sample(McmcKind::kSingleSwap, l, batch_size, steps, propose, rng);
}

Batch mcmc_full_batch(const LEnsemble& l, int batch_size, int steps, const ProposalFn& propose,
                      RandomStream& rng) {
  return mcmc_sample(McmcKind::kFullBatch, l, batch_size, steps, propose, rng);
}

Batch mcmc_gibbs_li(const LEnsemble& l, int batch_size, int steps, const ProposalFn& propose,
                    RandomStream& rng) {
  return mcmc_sample(McmcKind::kGibbsLi, l, batch_size, steps, propose, rng);
}

ProposalFn thompson_proposal(const GaussianPosterior& posterior) {
  return [&posterior](RandomStream& rng) {
    return argmax_random_ties(posterior.sample_path(rng), rng);
  };
}

ProposalFn uniform_proposal(std::vector<int> support) {
  if (support.empty()) throw ConfigError("uniform_proposal: empty support");
  return [support = std::move(support)](RandomStream& rng) {
    return support[static_cast<std::size_t>(rng.index(static_cast<int>(support.size())))];
  };
}

ProposalFn categorical_proposal(const Eigen::VectorXd& q) {
  if (q.size() == 0 || (q.array() < 0.0).any() || !(q.sum() > 0.0)) {
    throw ConfigError("categorical_proposal: weights must be non-negative with positive sum");
  }
  std::vector<double> cdf(static_cast<std::size_t>(q.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) cdf[static_cast<std::size_t>(i)] = (acc += q[i]);
  for (double& c : cdf) c /= acc;
  return [cdf = std::move(cdf)](RandomStream& rng) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                     static_cast<std::ptrdiff_t>(cdf.size()) - 1));
  };
}

Batch mcmc_single_swap(const GaussianPosterior& posterior, const LEnsemble& l, int batch_size,
                       int steps, RandomStream& rng) {
  return mcmc_single_swap(l, batch_size, steps, thompson_proposal(posterior), rng);
}

Batch mcmc_full_batch(const GaussianPosterior& posterior, const LEnsemble& l, int batch_size,
                      int steps, RandomStream& rng) {
  return mcmc_full_batch(l, batch_size, steps, thompson_proposal(posterior), rng);
}

Batch mcmc_gibbs_li(const GaussianPosterior& posterior, const LEnsemble& l, int batch_size,
                    int steps, RandomStream& rng) {
  return mcmc_gibbs_li(l, batch_size, steps, thompson_proposal(posterior), rng);
}

Eigen::MatrixXd transition_matrix(McmcKind kind, const LEnsemble& l, int batch_size,
                                  const Eigen::VectorXd& q) {
  if (q.size() != l.size()) throw ConfigError("transition_matrix: proposal size mismatch");
  const BatchDistribution space(l.size(), batch_size);
  const std::size_t n = space.num_outcomes();
  if (n > kMaxTransitionStates) throw ConfigError("transition_matrix: state space too large");

  std::vector<double> logdets(n);
  std::vector<double> batch_prob(n);
  for (std::size_t c = 0; c < n; ++c) {
    const Batch x = space.decode(c);
    logdets[c] = restricted_logdet(l, x);
    double p = 1.0;
    for (int i : x) p *= q[i];
    batch_prob[c] = p;
  }

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double slot_prob = 1.0 / batch_size;
  for (std::size_t from = 0; from < n; ++from) {
    const Batch x = space.decode(from);
    for (std::size_t to = 0; to < n; ++to) {
      if (to == from) continue;
      const Batch y = space.decode(to);
      if (kind == McmcKind::kFullBatch) {
        t(from, to) = batch_prob[to] * metropolis_acceptance(logdets[from], logdets[to]);
        continue;
      }
      int differing = 0;
      int slot = -1;
      for (int b = 0; b < batch_size; ++b) {
        if (x[b] != y[b]) {
          ++differing;
          slot = b;
        }
      }
      if (differing != 1) continue;
      const double move = slot_prob * q[y[slot]];
      t(from, to) = kind == McmcKind::kGibbsLi
                        ? 0.5 * move * gibbs_acceptance(logdets[from], logdets[to])
                        : move * metropolis_acceptance(logdets[from], logdets[to]);
    }
    t(from, from) = 1.0 - t.row(from).sum();
  }
  return t;
}

double detailed_balance_check(const LEnsemble& l, int batch_size, const Eigen::VectorXd& q,
                              McmcKind kind) {
  const Eigen::MatrixXd t = transition_matrix(kind, l, batch_size, q);
  const BatchDistribution space(l.size(), batch_size);
  const auto n = t.rows();
  std::vector<double> potential(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    const Batch x = space.decode(static_cast<std::size_t>(c));
    double p = 1.0;
    for (int i : x) p *= q[i];
    const double ld = restricted_logdet(l, x);
    potential[static_cast<std::size_t>(c)] = zero_weight(ld) ? 0.0 : p * std::exp(ld);
  }
  double worst = 0.0;
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double forward = potential[static_cast<std::size_t>(a)] * t(a, b);
      const double backward = potential[static_cast<std::size_t>(b)] * t(b, a);
      const double scale = std::max(std::abs(forward), std::abs(backward));
      if (scale == 0.0) continue;
      worst = std::max(worst, std::abs(forward - backward) / scale);
    }
  }
  return worst;
}

}  // namespace dppbo
