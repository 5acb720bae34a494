#ifndef DPPBO_MCMC_HPP
#define DPPBO_MCMC_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dppbo/lensemble.hpp"
#include "dppbo/posterior.hpp"
#include "dppbo/random.hpp"

namespace dppbo {

/// Draws one grid index from the proposal distribution (p_max for DPP-TS).
using ProposalFn = std::function<int(RandomStream&)>;

enum class McmcKind {
  kSingleSwap,  ///< replace one uniformly chosen slot, Metropolis acceptance
  kFullBatch,   ///< redraw the whole batch, Metropolis acceptance
  kGibbsLi,     ///< lazy single-slot move, Barker acceptance
};

std::string to_string(McmcKind kind);
McmcKind parse_mcmc_kind(const std::string& name);

struct McmcStats {
  long proposed = 0;
  long accepted = 0;
};

/// max(50 B, ceil(20 B ln N)).
int default_mcmc_steps(int batch_size, int domain_size);

/// min(1, det'/det) from log-determinants; 0 when the proposal has zero weight.
double metropolis_acceptance(double logdet_current, double logdet_proposed);
/// det' / (det' + det); 0 when both vanish.
double gibbs_acceptance(double logdet_current, double logdet_proposed);

/// B independent proposal draws, redrawn while det(L_X) = 0 (at most 100
/// attempts, then NumericalError).
Batch initial_batch(const LEnsemble& l, int batch_size, const ProposalFn& propose,
                    RandomStream& rng);

/// Runs `steps` transitions of the chosen kernel from initial_batch() and
/// returns the final state. The chain targets
///   P(X) ~ prod_b q(x_b) det(L_X)
/// where q is the proposal distribution.
Batch mcmc_sample(McmcKind kind, const LEnsemble& l, int batch_size, int steps,
                  const ProposalFn& propose, RandomStream& rng, McmcStats* stats = nullptr);

Batch mcmc_single_swap(const LEnsemble& l, int batch_size, int steps, const ProposalFn& propose,
                       RandomStream& rng);
Batch mcmc_full_batch(const LEnsemble& l, int batch_size, int steps, const ProposalFn& propose,
                      RandomStream& rng);
Batch mcmc_gibbs_li(const LEnsemble& l, int batch_size, int steps, const ProposalFn& propose,
                    RandomStream& rng);

/// Argmax of a fresh joint posterior path per call. Holds a reference:
/// the posterior must outlive the returned function.
ProposalFn thompson_proposal(const GaussianPosterior& posterior);
/// Uniform over `support`.
ProposalFn uniform_proposal(std::vector<int> support);

/// Independent draws from the normalized weights `q`.
ProposalFn categorical_proposal(const Eigen::VectorXd& q);

// Thompson-proposal forms of the samplers (targets P_max(X) det(L_X)).
Batch mcmc_single_swap(const GaussianPosterior& posterior, const LEnsemble& l, int batch_size,
                       int steps, RandomStream& rng);
Batch mcmc_full_batch(const GaussianPosterior& posterior, const LEnsemble& l, int batch_size,
                      int steps, RandomStream& rng);
Batch mcmc_gibbs_li(const GaussianPosterior& posterior, const LEnsemble& l, int batch_size,
                    int steps, RandomStream& rng);

/// Closed-form transition matrix T[from][to] of a sampler kernel over all
/// ordered batches, for proposal probabilities `q`. Enumeration only.
Eigen::MatrixXd transition_matrix(McmcKind kind, const LEnsemble& l, int batch_size,
                                  const Eigen::VectorXd& q);

/// max over batch pairs reachable in one move of
///   |Q(X) T(X'|X) - Q(X') T(X|X')| / max(Q(X) T(X'|X), Q(X') T(X|X'))
/// with Q(X) = prod_b q(x_b) det(L_X). Pairs where both sides vanish are skipped.
double detailed_balance_check(const LEnsemble& l, int batch_size, const Eigen::VectorXd& q,
                              McmcKind kind = McmcKind::kSingleSwap);

}  // namespace dppbo

#endif  // DPPBO_MCMC_HPP
