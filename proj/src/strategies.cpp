#include "dppbo/strategies.hpp"

#include <cmath>
#include <numbers>

#include "dppbo/errors.hpp"

namespace dppbo {

namespace {

struct StrategyName {
  StrategyKind kind;
  const char* name;
};

constexpr StrategyName kStrategyNames[] = {
    {StrategyKind::kTs, "ts"},
    {StrategyKind::kHalTs, "hal-ts"},
    {StrategyKind::kGpBucb, "gp-bucb"},
    {StrategyKind::kUcbPe, "ucb-pe"},
    {StrategyKind::kUcbDppSample, "ucb-dpp-sample"},
    {StrategyKind::kDppTs, "dpp-ts"},
    {StrategyKind::kDppTsAlt, "dpp-ts-alt"},
    {StrategyKind::kPhe, "phe"},
    {StrategyKind::kDppPhe, "dpp-phe"},
    {StrategyKind::kUniform, "uniform"},
    {StrategyKind::kPureDpp, "pure-dpp"},
};

void check_batch_size(int batch_size) {
  if (batch_size < 1) throw ConfigError("batch size must be >= 1");
}

int argmax_over(const Eigen::VectorXd& v, const std::vector<int>& support) {
  int best = support.front();
  for (int i : support) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

std::string to_string(StrategyKind kind) {
  for (const auto& s : kStrategyNames) {
    if (s.kind == kind) return s.name;
  }
  return "unknown";
}

StrategyKind parse_strategy(const std::string& name) {
  for (const auto& s : kStrategyNames) {
    if (name == s.name) return s.kind;
  }
  throw ConfigError("unknown strategy '" + name + "'");
}

const std::vector<StrategyKind>& all_strategies() {
  static const std::vector<StrategyKind> kinds = [] {
    std::vector<StrategyKind> v;
    for (const auto& s : kStrategyNames) v.push_back(s.kind);
    return v;
  }();
  return kinds;
}

std::string to_string(BetaCase c) {
  return c == BetaCase::kFiniteDomain ? "finite-domain" : "continuous-domain";
}

BetaCase parse_beta_case(const std::string& name) {
  if (name == "finite-domain") return BetaCase::kFiniteDomain;
  if (name == "continuous-domain") return BetaCase::kContinuousDomain;
  throw ConfigError("unknown beta schedule '" + name + "'");
}

double beta_finite_domain(int t, int batch_size, double domain_size) {
  if (t < 1) throw ConfigError("beta schedule: round must be >= 1");
  const double td = t;
  return 2.0 * std::log(batch_size * (td * td + 1.0) * domain_size /
                        std::sqrt(2.0 * std::numbers::pi));
}

double beta_continuous_domain(int t, int batch_size, int dimension, double a, double b) {
  if (t < 1) throw ConfigError("beta schedule: round must be >= 1");
  if (dimension < 1 || !(a > 0.0) || !(b > 0.0)) {
    throw ConfigError("continuous-domain beta schedule needs dimension, a and b > 0");
  }
  const double d = dimension;
  return 4.0 * (d + 1.0) * std::log(static_cast<double>(batch_size) * t) +
         2.0 * d * std::log(d * a * b * std::sqrt(std::numbers::pi));
}

double beta_schedule(const BetaSchedule& schedule, int t, int batch_size, int domain_size) {
  if (schedule.kind == BetaCase::kFiniteDomain) {
    return beta_finite_domain(t, batch_size, domain_size);
  }
  return beta_continuous_domain(t, batch_size, schedule.dimension, schedule.a, schedule.b);
}

std::string to_string(LambdaMode m) { return m == LambdaMode::kConstant ? "constant" : "step"; }

LambdaMode parse_lambda_mode(const std::string& name) {
  if (name == "constant") return LambdaMode::kConstant;
  if (name == "step") return LambdaMode::kStep;
  throw ConfigError("unknown lambda schedule mode '" + name + "'");
}

double LambdaSchedule::at(int t) const {
  if (mode == LambdaMode::kConstant) return lambda;
  return t <= t_init ? lambda : 0.0;
}

void LambdaSchedule::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (t_init < 0) throw ConfigError("T_init must be >= 0");
}

void StrategyConfig::validate() const {
  check_batch_size(batch_size);
  lambda.validate();
  if (mcmc_steps < 0) throw ConfigError("mcmc_steps must be >= 0");
  const bool needs_a = kind == StrategyKind::kPhe || kind == StrategyKind::kDppPhe;
  if (needs_a && !phe_a) throw ConfigError("strategy '" + to_string(kind) + "' requires phe_a");
  if (!needs_a && phe_a) throw ConfigError("phe_a is only valid for phe and dpp-phe");
  if (phe_a && !(*phe_a >= 0.0)) throw ConfigError("phe_a must be >= 0");
  if (beta.kind == BetaCase::kContinuousDomain &&
      (beta.dimension < 1 || !(beta.a > 0.0) || !(beta.b > 0.0))) {
    throw ConfigError("continuous-domain beta schedule needs dimension, a and b > 0");
  }
}

int StrategyConfig::steps_for(int b, int domain_size) const {
  return mcmc_steps > 0 ? mcmc_steps : default_mcmc_steps(b, domain_size);
}

Eigen::VectorXd ucb_scores(const GaussianPosterior& posterior, double beta) {
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  return posterior.mean() + std::sqrt(beta) * posterior.stddev();
}

std::vector<int> high_probability_region(const GaussianPosterior& posterior, double beta) {
  const Eigen::VectorXd sd = std::sqrt(beta) * posterior.stddev();
  const Eigen::VectorXd upper = posterior.mean() + sd;
  const double best_lower = (posterior.mean() - sd).maxCoeff();
  std::vector<int> region;
  for (int i = 0; i < posterior.size(); ++i) {
    if (upper[i] >= best_lower) region.push_back(i);
  }
  return region;
}

Batch propose_ts(const GaussianPosterior& posterior, int batch_size, RandomStream& rng) {
  check_batch_size(batch_size);
  Batch x(batch_size);
  for (int& i : x) i = argmax_random_ties(posterior.sample_path(rng), rng);
  return x;
}

Batch propose_hal_ts(const GaussianPosterior& posterior, int batch_size, RandomStream& rng) {
  check_batch_size(batch_size);
  Batch x;
  x.reserve(batch_size);
  GaussianPosterior current = posterior;
  for (int b = 0; b < batch_size; ++b) {
    x.push_back(argmax_random_ties(current.sample_path(rng), rng));
    if (b + 1 < batch_size) current = current.hallucinate(x.back());
  }
  return x;
}

Batch propose_gp_bucb(const GaussianPosterior& posterior, int batch_size, double beta) {
  check_batch_size(batch_size);
  Batch x;
  x.reserve(batch_size);
  GaussianPosterior current = posterior;
  for (int b = 0; b < batch_size; ++b) {
    x.push_back(argmax_lowest(ucb_scores(current, beta)));
    if (b + 1 < batch_size) current = current.hallucinate(x.back());
  }
  return x;
}

Batch propose_ucb_pe(const GaussianPosterior& posterior, int batch_size, double beta) {
  check_batch_size(batch_size);
  Batch x{argmax_lowest(ucb_scores(posterior, beta))};
  const std::vector<int> region = high_probability_region(posterior, beta);
  if (region.empty()) throw NumericalError("ucb-pe: empty high-probability region");
  GaussianPosterior current = posterior;
  for (int b = 1; b < batch_size; ++b) {
    current = current.hallucinate(x.back());
    x.push_back(argmax_over(current.covariance().diagonal(), region));
  }
  return x;
}

Batch propose_ucb_dpp_sample(const GaussianPosterior& posterior, int batch_size, double beta,
                             int steps, RandomStream& rng) {
  check_batch_size(batch_size);
  Batch x{argmax_lowest(ucb_scores(posterior, beta))};
  if (batch_size == 1) return x;
  std::vector<int> region = high_probability_region(posterior, beta);
  if (region.empty()) throw NumericalError("ucb-dpp-sample: empty high-probability region");
  // The MI kernel is regularized, so a region smaller than the tail still
  // yields a proper distribution (with repeated points).
  const GaussianPosterior after_first = posterior.hallucinate(x.front());
  const LEnsemble l = build_mi_lensemble(after_first, 1.0);
  const Batch tail = mcmc_single_swap(l, batch_size - 1, steps, uniform_proposal(std::move(region)), rng);
  x.insert(x.end(), tail.begin(), tail.end());
  return x;
}

Batch propose_dpp_ts(const GaussianPosterior& posterior, int batch_size, double lambda, int steps,
                     RandomStream& rng, McmcKind sampler) {
  check_batch_size(batch_size);
  if (lambda == 0.0) return propose_ts(posterior, batch_size, rng);
  const LEnsemble l = build_mi_lensemble(posterior, lambda);
  return mcmc_sample(sampler, l, batch_size, steps, thompson_proposal(posterior), rng);
}

Batch propose_dpp_ts_alt(const GaussianPosterior& posterior, int batch_size, double lambda,
                         int steps, RandomStream& rng) {
  check_batch_size(batch_size);
  if (lambda == 0.0) return propose_ts(posterior, batch_size, rng);
  Batch x = propose_ts(posterior, 1, rng);
  if (batch_size == 1) return x;
  const GaussianPosterior after_first = posterior.hallucinate(x.front());
  const LEnsemble l = build_mi_lensemble(after_first, lambda);
  const Batch tail = mcmc_single_swap(l, batch_size - 1, steps, thompson_proposal(posterior), rng);
  x.insert(x.end(), tail.begin(), tail.end());
  return x;
}

PheSampler::PheSampler(const FeatureModel& model, const History& history, double a)
    : model_(model), a_(a), obs_(history.flatten()), fit_(model.fit(obs_)) {
  if (!(a >= 0.0)) throw ConfigError("phe: a must be >= 0");
  design_.resize(static_cast<Eigen::Index>(obs_.size()), model.num_features());
  for (std::size_t i = 0; i < obs_.size(); ++i) design_.row(i) = model.features().row(obs_[i].index);
}

int PheSampler::draw(RandomStream& rng) const {
  const auto& lower = fit_.precision_factor;
  if (obs_.empty()) {
    // Prior weights are N(0, I); the precision factor is the identity.
    return argmax_lowest(model_.features() * rng.normal_vector(model_.num_features()));
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(obs_.size()));
  for (std::size_t i = 0; i < obs_.size(); ++i) {
    y[i] = obs_[i].y + (a_ > 0.0 ? a_ * rng.normal() : 0.0);
  }
  Eigen::VectorXd w = design_.transpose() * y / model_.noise_variance();
  lower.triangularView<Eigen::Lower>().solveInPlace(w);
  lower.triangularView<Eigen::Lower>().transpose().solveInPlace(w);
  return argmax_lowest(model_.features() * w);
}

Batch propose_phe(const FeatureModel& model, const History& history, int batch_size, double a,
                  RandomStream& rng) {
  check_batch_size(batch_size);
  const PheSampler sampler(model, history, a);
  Batch x(batch_size);
  for (int& i : x) i = sampler.draw(rng);
  return x;
}

Batch propose_dpp_phe(const FeatureModel& model, const History& history, int batch_size, double a,
                      double lambda, int steps, RandomStream& rng) {
  check_batch_size(batch_size);
  if (lambda == 0.0) return propose_phe(model, history, batch_size, a, rng);
  const std::vector<Observation> obs = history.flatten();
  const LEnsemble l =
      build_mi_lensemble(model.posterior_covariance(obs), model.noise_variance(), lambda);
  const PheSampler sampler(model, history, a);
  return mcmc_single_swap(l, batch_size, steps,
                          [&sampler](RandomStream& r) { return sampler.draw(r); }, rng);
}

Batch propose_uniform(int domain_size, int batch_size, RandomStream& rng) {
  check_batch_size(batch_size);
  if (domain_size < 1) throw ConfigError("uniform: empty domain");
  Batch x(batch_size);
  for (int& i : x) i = rng.index(domain_size);
  return x;
}

Batch propose_pure_dpp(const GaussianPosterior& posterior, int batch_size, double lambda,
                       int steps, RandomStream& rng) {
  check_batch_size(batch_size);
  if (lambda == 0.0) return propose_uniform(posterior.size(), batch_size, rng);
  const LEnsemble l = build_mi_lensemble(posterior, lambda);
  std::vector<int> all(static_cast<std::size_t>(posterior.size()));
  for (int i = 0; i < posterior.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  return mcmc_single_swap(l, batch_size, steps, uniform_proposal(std::move(all)), rng);
}

Batch propose(const StrategyConfig& config, const ProposalContext& ctx, RandomStream& rng) {
  const GaussianPosterior& post = ctx.posterior;
  const int b = config.batch_size;
  const int n = post.size();
  const int t = ctx.round;
  auto beta = [&] { return beta_schedule(config.beta, t, b, n); };
  auto model = [&]() -> const FeatureModel& {
    if (!ctx.feature_model) {
      throw ConfigError("strategy '" + to_string(config.kind) + "' needs a feature surrogate");
    }
    return *ctx.feature_model;
  };

  switch (config.kind) {
    case StrategyKind::kTs: return propose_ts(post, b, rng);
    case StrategyKind::kHalTs: return propose_hal_ts(post, b, rng);
    case StrategyKind::kGpBucb: return propose_gp_bucb(post, b, beta());
    case StrategyKind::kUcbPe: return propose_ucb_pe(post, b, beta());
    case StrategyKind::kUcbDppSample: {
      const double bt = beta();
      const int region = static_cast<int>(high_probability_region(post, bt).size());
      return propose_ucb_dpp_sample(post, b, bt, config.steps_for(std::max(b - 1, 1), region), rng);
    }
    case StrategyKind::kDppTs:
      return propose_dpp_ts(post, b, config.lambda.at(t), config.steps_for(b, n), rng, config.sampler);
    case StrategyKind::kDppTsAlt:
      return propose_dpp_ts_alt(post, b, config.lambda.at(t), config.steps_for(std::max(b - 1, 1), n),
                                rng);
    case StrategyKind::kPhe: return propose_phe(model(), ctx.history, b, config.phe_a.value(), rng);
    case StrategyKind::kDppPhe:
      return propose_dpp_phe(model(), ctx.history, b, config.phe_a.value(), config.lambda.at(t),
                             config.steps_for(b, n), rng);
    case StrategyKind::kUniform: return propose_uniform(n, b, rng);
    case StrategyKind::kPureDpp:
      return propose_pure_dpp(post, b, config.lambda.at(t), config.steps_for(b, n), rng);
  }
  throw ConfigError("unhandled strategy");
}

}  // namespace dppbo
