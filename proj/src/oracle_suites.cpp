#include "dppbo/oracle_suites.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>

#include "dppbo/batch_distribution.hpp"
#include "dppbo/errors.hpp"
#include "dppbo/info_gain.hpp"
#include "dppbo/mcmc.hpp"

namespace dppbo {

namespace {

constexpr std::uint64_t kSeed = 20240601;

/// A GP posterior on n points of [0, 1] after a few noisy observations.
GaussianPosterior random_posterior(int n, RandomStream& rng) {
  auto grid = std::make_shared<const DomainGrid>(DomainGrid::uniform({{0.0, 1.0}}, {n}));
  KernelSpec k;
  k.scale = 0.2 + 0.6 * rng.uniform();
  const double noise = 0.05 + 0.5 * rng.uniform();
  GaussianPosterior p = GaussianPosterior::prior(grid, k, noise);
  const int m = rng.index(3);
  std::vector<Observation> obs;
  for (int i = 0; i < m; ++i) obs.push_back({rng.index(n), rng.normal()});
  return p.condition(obs);
}

bool report(std::ostream& out, const std::string& check, bool ok, double value, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %s value=%.3e tol=%.1e", ok ? "PASS" : "FAIL", check.c_str(),
                value, tol);
  out << buf << '\n';
  return ok;
}

bool suite_enumeration(std::ostream& out) {
  constexpr int kN = 4, kB = 2, kChains = 10000, kSteps = 200;
  constexpr double kTol = 0.05;
  RandomStream rng(kSeed);
  const GaussianPosterior post = random_posterior(kN, rng);
  const Eigen::VectorXd q = estimate_pmax(post, 200000, rng).probabilities;
  const LEnsemble l = build_mi_lensemble(post, 1.0);
  const BatchDistribution exact = exact_batch_distribution(l, kB, q);
  const ProposalFn propose = categorical_proposal(q);

  bool ok = true;
  for (McmcKind kind : {McmcKind::kSingleSwap, McmcKind::kFullBatch, McmcKind::kGibbsLi}) {
    std::vector<Batch> draws;
    draws.reserve(kChains);
    for (int c = 0; c < kChains; ++c) draws.push_back(mcmc_sample(kind, l, kB, kSteps, propose, rng));
    const double tv = BatchDistribution::empirical(kN, kB, draws).total_variation(exact);
    ok &= report(out, "enumeration/" + to_string(kind), tv <= kTol, tv, kTol);
  }

  // lambda = 0 is plain batched sampling from q.
  BatchDistribution product(kN, kB);
  for (std::size_t c = 0; c < product.num_outcomes(); ++c) {
    const Batch x = product.decode(c);
    product.probabilities()[c] = q[x[0]] * q[x[1]];
  }
  const double tv0 =
      exact_batch_distribution(build_mi_lensemble(post, 0.0), kB, q).total_variation(product);
  ok &= report(out, "enumeration/lambda-zero", tv0 <= 1e-12, tv0, 1e-12);
  return ok;
}

bool suite_detailed_balance(std::ostream& out) {
  constexpr double kTol = 1e-10;
  RandomStream rng(kSeed + 1);
  const GaussianPosterior post = random_posterior(3, rng);
  const Eigen::VectorXd q = estimate_pmax(post, 100000, rng).probabilities;
  const LEnsemble l = build_mi_lensemble(post, 1.0);
  bool ok = true;
  for (McmcKind kind : {McmcKind::kSingleSwap, McmcKind::kFullBatch, McmcKind::kGibbsLi}) {
    const double err = detailed_balance_check(l, 2, q, kind);
    ok &= report(out, "detailed-balance/" + to_string(kind), err <= kTol, err, kTol);
  }
  return ok;
}

bool suite_reweighting(std::ostream& out) {
  constexpr double kTol = 1e-9;
  RandomStream rng(kSeed + 2);
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const GaussianPosterior post = random_posterior(4, rng);
    Eigen::VectorXd q = Eigen::VectorXd::NullaryExpr(4, [&] { return 0.05 + rng.uniform(); });
    q /= q.sum();
    const LEnsemble l = build_mi_lensemble(post, 1.0);
    const LEnsemble lt = build_reweighted_lensemble(l, q);
    BatchDistribution all(4, 2);
    for (std::size_t c = 0; c < all.num_outcomes(); ++c) {
      const Batch x = all.decode(c);
      const double lhs = std::exp(restricted_logdet(lt, x));
      const double rhs = q[x[0]] * q[x[1]] * std::exp(restricted_logdet(l, x));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
    }
  }
  return report(out, "reweighting/quality-diversity", worst <= kTol, worst, kTol);
}

bool suite_info_gain(std::ostream& out) {
  constexpr double kTol = 1e-8;
  RandomStream rng(kSeed + 3);
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const int n = 3 + rng.index(8);
    const GaussianPosterior post = random_posterior(n, rng);
    Batch x(static_cast<std::size_t>(1 + rng.index(5)));
    for (int& i : x) i = rng.index(n);
    const double direct = 0.5 * restricted_logdet(build_mi_lensemble(post, 1.0), x);
    worst = std::max(worst, std::abs(direct - info_gain_sequential(post, x)));
  }
  return report(out, "info-gain/sequential-identity", worst <= kTol, worst, kTol);
}

}  // namespace

const std::vector<std::string>& oracle_suite_names() {
  static const std::vector<std::string> names{"enumeration", "detailed-balance", "reweighting",
                                              "info-gain"};
  return names;
}

bool run_oracle_suite(const std::string& name, std::ostream& out) {
  if (name == "all") {
    bool ok = true;
    for (const std::string& s : oracle_suite_names()) ok &= run_oracle_suite(s, out);
    return ok;
  }
  if (name == "enumeration") return suite_enumeration(out);
  if (name == "detailed-balance") return suite_detailed_balance(out);
  if (name == "reweighting") return suite_reweighting(out);
  if (name == "info-gain") return suite_info_gain(out);
  throw ConfigError("unknown oracle suite: " + name);
}

}  // namespace dppbo
