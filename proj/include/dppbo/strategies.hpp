#ifndef DPPBO_STRATEGIES_HPP
#define DPPBO_STRATEGIES_HPP

#include <optional>
#include <string>
#include <vector>

#include "dppbo/feature_model.hpp"
#include "dppbo/lensemble.hpp"
#include "dppbo/mcmc.hpp"
#include "dppbo/posterior.hpp"
#include "dppbo/random.hpp"

namespace dppbo {

enum class StrategyKind {
  kTs,
  kHalTs,
  kGpBucb,
  kUcbPe,
  kUcbDppSample,
  kDppTs,
  kDppTsAlt,
  kPhe,
  kDppPhe,
  kUniform,
  kPureDpp,
};

/// Canonical identifiers: ts, hal-ts, gp-bucb, ucb-pe, ucb-dpp-sample,
/// dpp-ts, dpp-ts-alt, phe, dpp-phe, uniform, pure-dpp.
std::string to_string(StrategyKind kind);
StrategyKind parse_strategy(const std::string& name);
const std::vector<StrategyKind>& all_strategies();

/// Exploration weight for the UCB-family baselines.
///   finite-domain:     2 ln(B (t^2 + 1) N / sqrt(2 pi))
///   continuous-domain: 4 (d + 1) ln(B t) + 2 d ln(d a b sqrt(pi))
enum class BetaCase { kFiniteDomain, kContinuousDomain };

std::string to_string(BetaCase c);
BetaCase parse_beta_case(const std::string& name);

struct BetaSchedule {
  BetaCase kind = BetaCase::kFiniteDomain;
  // Continuous-domain constants; all must be positive in that case.
  int dimension = 0;
  double a = 0.0;
  double b = 0.0;
};

double beta_finite_domain(int t, int batch_size, double domain_size);
double beta_continuous_domain(int t, int batch_size, int dimension, double a, double b);
double beta_schedule(const BetaSchedule& schedule, int t, int batch_size, int domain_size);

/// DPP strength per round. kStep uses `lambda` for t <= t_init and 0 after.
enum class LambdaMode { kConstant, kStep };

std::string to_string(LambdaMode m);
LambdaMode parse_lambda_mode(const std::string& name);

struct LambdaSchedule {
  LambdaMode mode = LambdaMode::kConstant;
  double lambda = 1.0;
  int t_init = 0;

  double at(int t) const;
  void validate() const;
};

struct StrategyConfig {
  StrategyKind kind = StrategyKind::kDppTs;
  int batch_size = 5;
  BetaSchedule beta;
  LambdaSchedule lambda;
  std::optional<double> phe_a;
  /// 0 selects default_mcmc_steps().
  int mcmc_steps = 0;
  McmcKind sampler = McmcKind::kSingleSwap;

  void validate() const;
  int steps_for(int batch_size, int domain_size) const;
};

/// Everything a strategy may read when proposing the batch for round t >= 1.
struct ProposalContext {
  const GaussianPosterior& posterior;
  const History& history;
  const FeatureModel* feature_model = nullptr;
  int round = 1;
};

Batch propose(const StrategyConfig& config, const ProposalContext& ctx, RandomStream& rng);

// Individual strategies.

Batch propose_ts(const GaussianPosterior& posterior, int batch_size, RandomStream& rng);
Batch propose_hal_ts(const GaussianPosterior& posterior, int batch_size, RandomStream& rng);
Batch propose_gp_bucb(const GaussianPosterior& posterior, int batch_size, double beta);
Batch propose_ucb_pe(const GaussianPosterior& posterior, int batch_size, double beta);
Batch propose_ucb_dpp_sample(const GaussianPosterior& posterior, int batch_size, double beta,
                             int steps, RandomStream& rng);
Batch propose_dpp_ts(const GaussianPosterior& posterior, int batch_size, double lambda, int steps,
                     RandomStream& rng, McmcKind sampler = McmcKind::kSingleSwap);
Batch propose_dpp_ts_alt(const GaussianPosterior& posterior, int batch_size, double lambda,
                         int steps, RandomStream& rng);
Batch propose_phe(const FeatureModel& model, const History& history, int batch_size, double a,
                  RandomStream& rng);
Batch propose_dpp_phe(const FeatureModel& model, const History& history, int batch_size, double a,
                      double lambda, int steps, RandomStream& rng);
Batch propose_uniform(int domain_size, int batch_size, RandomStream& rng);
Batch propose_pure_dpp(const GaussianPosterior& posterior, int batch_size, double lambda,
                       int steps, RandomStream& rng);

/// mu + sqrt(beta) * sigma.
Eigen::VectorXd ucb_scores(const GaussianPosterior& posterior, double beta);
/// {x : mu(x) + sqrt(beta) sigma(x) >= max_x' mu(x') - sqrt(beta) sigma(x')}, ascending.
std::vector<int> high_probability_region(const GaussianPosterior& posterior, double beta);

/// Single-slot perturbed-history draws. The normal equations do not depend
/// on the rewards, so the factorization is shared by every draw.
class PheSampler {
 public:
  PheSampler(const FeatureModel& model, const History& history, double a);

  /// Perturbs every historical reward by a * N(0, 1), refits, and returns
  /// the argmax of the fitted mean. With no history: argmax of a prior path.
  int draw(RandomStream& rng) const;

 private:
  const FeatureModel& model_;
  double a_;
  std::vector<Observation> obs_;
  FeatureModel::WeightPosterior fit_;
  Eigen::MatrixXd design_;  // n x m
};

}  // namespace dppbo

#endif  // DPPBO_STRATEGIES_HPP
