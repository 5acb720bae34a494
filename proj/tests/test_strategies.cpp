#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "dppbo/batch_distribution.hpp"
#include "dppbo/errors.hpp"
#include "dppbo/strategies.hpp"
#include "test_support.hpp"

using namespace dppbo;

namespace {

GaussianPosterior degenerate(int n, int best) {
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
  mu[best] = 1.0;
  return testing::crafted(mu, Eigen::MatrixXd::Zero(n, n));
}

GaussianPosterior correlated4() {
  Eigen::VectorXd mu(4);
  mu << 0.1, 0.0, 0.25, -0.1;
  Eigen::MatrixXd k(4, 4);
  k << 1.0, 0.7, 0.2, 0.0,
       0.7, 1.0, 0.4, 0.1,
       0.2, 0.4, 1.0, 0.5,
       0.0, 0.1, 0.5, 0.8;
  return testing::crafted(mu, k, 0.5);
}

bool all_equal(const Batch& x, int v) {
  for (int i : x)
    if (i != v) return false;
  return true;
}

}  // namespace

TEST_CASE("beta schedules") {
  CHECK(beta_finite_domain(1, 5, 1024) == doctest::Approx(2 * std::log(10240 / std::sqrt(2 * M_PI))).epsilon(1e-14));
  CHECK(std::abs(beta_finite_domain(1, 5, 1024) - 16.63) < 0.005);
  CHECK(std::abs(beta_finite_domain(1, 1, std::sqrt(2 * M_PI) / 2)) < 1e-14);
  for (int t = 1; t < 30; ++t) CHECK(beta_finite_domain(t + 1, 5, 256) > beta_finite_domain(t, 5, 256));
  const double c = beta_continuous_domain(3, 5, 2, 1.0, 2.0);
  CHECK(c == doctest::Approx(4 * 3 * std::log(15.0) + 4 * std::log(2 * 1.0 * 2.0 * std::sqrt(M_PI))));
  BetaSchedule s;
  s.kind = BetaCase::kContinuousDomain;
  CHECK_THROWS_AS(beta_schedule(s, 1, 5, 10), ConfigError);
}

TEST_CASE("lambda schedule") {
  LambdaSchedule s{LambdaMode::kStep, 0.7, 5};
  CHECK(s.at(1) == 0.7);
  CHECK(s.at(5) == 0.7);
  CHECK(s.at(6) == 0.0);
  CHECK(LambdaSchedule{}.at(100) == 1.0);
  CHECK_THROWS_AS((LambdaSchedule{LambdaMode::kConstant, -1.0, 0}.validate()), ConfigError);
}

TEST_CASE("strategy config validation") {
  StrategyConfig c;
  c.kind = StrategyKind::kPhe;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.phe_a = 0.5;
  CHECK_NOTHROW(c.validate());
  c.kind = StrategyKind::kTs;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.phe_a.reset();
  c.batch_size = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  for (StrategyKind k : all_strategies()) CHECK(parse_strategy(to_string(k)) == k);
  CHECK_THROWS_AS(parse_strategy("bogus"), ConfigError);
}

TEST_CASE("degenerate posteriors repeat the mean argmax") {
  const auto p = degenerate(5, 3);
  RandomStream rng(1);
  CHECK(all_equal(propose_ts(p, 4, rng), 3));
  CHECK(all_equal(propose_hal_ts(p, 4, rng), 3));
  CHECK(all_equal(propose_gp_bucb(p, 4, 2.0), 3));
  CHECK(all_equal(propose_ucb_pe(p, 4, 2.0), 3));
  CHECK(all_equal(propose_dpp_ts(p, 4, 1.0, 50, rng), 3));
  CHECK(all_equal(propose_dpp_ts_alt(p, 4, 1.0, 50, rng), 3));
}

TEST_CASE("batched TS slots are independent p_max draws") {
  const auto p = testing::crafted(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
  RandomStream rng(2);
  double counts[2][2] = {{0, 0}, {0, 0}};
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const Batch x = propose_ts(p, 2, rng);
    counts[x[0]][x[1]] += 1;
  }
  double chi2 = 0.0;
  for (auto& row : counts)
    for (double c : row) chi2 += (c - n / 4.0) * (c - n / 4.0) / (n / 4.0);
  CHECK(chi2 < 11.34);  // chi-square, 3 dof, 1%

  RandomStream a(3), b(3);
  CHECK(propose_ts(correlated4(), 1, a) == propose_hal_ts(correlated4(), 1, b));
}

TEST_CASE("hallucinated TS spreads batches") {
  // Three exchangeable independent arms: TS duplicates with probability 1/3.
  const auto p = testing::crafted(Eigen::VectorXd::Zero(3), Eigen::MatrixXd::Identity(3, 3), 1.0);
  RandomStream rng(4);
  const int n = 100000;
  int dup_ts = 0, dup_hal = 0;
  for (int i = 0; i < n; ++i) {
    const Batch a = propose_ts(p, 2, rng);
    const Batch b = propose_hal_ts(p, 2, rng);
    dup_ts += a[0] == a[1];
    dup_hal += b[0] == b[1];
  }
  const double se = std::sqrt(2 * 0.25 / n);
  CHECK(dup_ts / double(n) == doctest::Approx(1.0 / 3).epsilon(0.03));
  CHECK(dup_hal / double(n) + 5 * se < dup_ts / double(n));
}

TEST_CASE("GP-BUCB matches a hand trace") {
  Eigen::VectorXd mu(3);
  mu << 0.0, 0.5, 0.4;
  Eigen::MatrixXd k(3, 3);
  k << 1.0, 0.3, 0.1, 0.3, 0.2, 0.6 * std::sqrt(0.2), 0.1, 0.6 * std::sqrt(0.2), 1.0;
  const auto p = testing::crafted(mu, k, 0.1);
  const double beta = 2.0;

  Batch want;
  std::vector<int> idx;
  std::vector<double> ys;
  for (int b = 0; b < 4; ++b) {
    const auto cur = testing::dense_condition(mu, k, idx, ys, 0.1);
    Eigen::VectorXd score = cur.mean + std::sqrt(beta) * cur.cov.diagonal().cwiseMax(0.0).cwiseSqrt();
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (score[i] > score[best]) best = i;
    want.push_back(best);
    idx.push_back(best);
    ys.push_back(mu[best]);
  }
  CHECK(propose_gp_bucb(p, 4, beta) == want);
  CHECK(propose_gp_bucb(p, 4, beta) == propose_gp_bucb(p, 4, beta));
  // beta = 0: the mean never moves, so every slot is the mean argmax.
  CHECK(all_equal(propose_gp_bucb(p, 3, 0.0), 1));
}

TEST_CASE("UCB-PE matches a hand trace") {
  const auto p = correlated4();
  const double beta = 1.0;
  const Eigen::VectorXd mu = p.mean();
  const Eigen::MatrixXd k = p.covariance();
  const Eigen::VectorXd sd = k.diagonal().cwiseSqrt();
  const Eigen::VectorXd ucb = mu + sd, lcb = mu - sd;
  std::vector<int> region;
  for (int i = 0; i < 4; ++i)
    if (ucb[i] >= lcb.maxCoeff()) region.push_back(i);
  CHECK(high_probability_region(p, beta) == region);

  int first = 0;
  for (int i = 1; i < 4; ++i)
    if (ucb[i] > ucb[first]) first = i;
  Batch want{first};
  std::vector<int> idx{first};
  std::vector<double> ys{mu[first]};
  for (int b = 1; b < 4; ++b) {
    const auto cur = testing::dense_condition(mu, k, idx, ys, 0.5);
    int best = region.front();
    for (int i : region)
      if (cur.cov(i, i) > cur.cov(best, best)) best = i;
    want.push_back(best);
    idx.push_back(best);
    ys.push_back(mu[best]);
  }
  CHECK(propose_ucb_pe(p, 4, beta) == want);

  // beta = 0: region is the mean-argmax set.
  const Batch zero = propose_ucb_pe(p, 3, 0.0);
  CHECK(all_equal(zero, 2));
}

TEST_CASE("UCB-DPP-SAMPLE") {
  const auto p = correlated4();
  RandomStream rng(5);
  CHECK(propose_ucb_dpp_sample(p, 1, 2.0, 100, rng) == Batch{argmax_lowest(ucb_scores(p, 2.0))});
  CHECK(high_probability_region(p, 1e8).size() == 4);

  const int first = argmax_lowest(ucb_scores(p, 1e8));
  const auto h = testing::dense_condition(p.mean(), p.covariance(), {first}, {p.mean()[first]}, 0.5);
  const auto want = testing::mi_pair_distribution(h.cov / 0.5, Eigen::VectorXd::Constant(4, 0.25));
  std::vector<std::vector<int>> draws;
  for (int c = 0; c < 10000; ++c) {
    const Batch x = propose_ucb_dpp_sample(p, 3, 1e8, 100, rng);
    CHECK_EQ(x[0], first);
    draws.push_back(x);
  }
  CHECK(testing::tv(testing::pair_frequencies(draws, 4, 1), want) <= 0.05);

  // Region smaller than the tail: duplicates instead of failure.
  const auto sharp = degenerate(4, 1);
  CHECK(all_equal(propose_ucb_dpp_sample(sharp, 4, 1.0, 50, rng), 1));
}

TEST_CASE("DPP-TS endpoints") {
  const auto p = correlated4();
  RandomStream rng(6);
  const Eigen::VectorXd q = estimate_pmax(p, 1000000, rng).probabilities;

  std::vector<std::vector<int>> ts, zero, one;
  for (int c = 0; c < 10000; ++c) {
    ts.push_back(propose_ts(p, 2, rng));
    zero.push_back(propose_dpp_ts(p, 2, 0.0, 100, rng));
    one.push_back(propose_dpp_ts(p, 2, 1.0, 100, rng));
  }
  std::vector<double> prod(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) prod[static_cast<std::size_t>(a * 4 + b)] = q[a] * q[b];
  CHECK(testing::tv(testing::pair_frequencies(zero, 4), prod) <= 0.02);
  CHECK(testing::tv(testing::pair_frequencies(ts, 4), prod) <= 0.02);
  const auto want = testing::mi_pair_distribution(p.covariance() / 0.5, q);
  CHECK(testing::tv(testing::pair_frequencies(one, 4), want) <= 0.05);

  // exact targets at the endpoints
  CHECK(exact_batch_distribution(build_mi_lensemble(p, 0.0), 2, q).total_variation(
            exact_batch_distribution(identity_lensemble(4), 2, q)) < 1e-15);
  const auto exact1 = exact_batch_distribution(build_mi_lensemble(p, 1.0), 2, q).probabilities();
  CHECK(testing::tv(exact1, want) < 1e-12);
}

TEST_CASE("DPP-TS-alt") {
  const auto p = correlated4();
  RandomStream a(7), b(7);
  CHECK(propose_dpp_ts_alt(p, 1, 1.0, 50, a) == propose_ts(p, 1, b));
  RandomStream c(8), d(8);
  CHECK(propose_dpp_ts_alt(p, 3, 0.0, 50, c) == propose_ts(p, 3, d));

  RandomStream rng(9);
  const Eigen::VectorXd q = estimate_pmax(p, 1000000, rng).probabilities;
  Eigen::VectorXd first = Eigen::VectorXd::Zero(4);
  const int n = 20000;
  for (int i = 0; i < n; ++i) first[propose_dpp_ts_alt(p, 2, 1.0, 50, rng)[0]] += 1.0 / n;
  CHECK(0.5 * (first - q).cwiseAbs().sum() <= 0.02);
}

TEST_CASE("PHE") {
  KernelSpec k;
  k.scale = 0.3;
  const auto g = testing::line_grid(4);
  const FeatureModel m(g, k, 0.01);
  History h;
  h.add_round({{0, 0.1}, {2, 0.9}, {3, 0.2}});
  RandomStream rng(10);

  const int greedy = argmax_lowest(m.mean_path(h.flatten()));
  CHECK(all_equal(propose_phe(m, h, 5, 0.0, rng), greedy));

  const Batch empty = propose_phe(m, History{}, 3, 1.0, rng);
  CHECK(empty.size() == 3);

  SUBCASE("huge perturbations approach uniform") {
    KernelSpec ks;
    ks.scale = 0.1;
    const auto g16 = testing::line_grid(16);
    const FeatureModel m16(g16, ks, 0.01);
    History full;
    std::vector<Observation> round;
    for (int i = 0; i < 16; ++i) round.push_back({i, std::sin(6.0 * i / 15.0)});
    full.add_round(round);
    Eigen::VectorXd freq = Eigen::VectorXd::Zero(16);
    const PheSampler s(m16, full, 1e4);
    const int n = 50000;
    for (int i = 0; i < n; ++i) freq[s.draw(rng)] += 1.0 / n;
    double entropy = 0.0;
    for (int i = 0; i < 16; ++i)
      if (freq[i] > 0) entropy -= freq[i] * std::log(freq[i]);
    CHECK(entropy >= 0.9 * std::log(16.0));
  }
}

TEST_CASE("DPP-PHE") {
  KernelSpec k;
  k.scale = 0.3;
  const auto g = testing::line_grid(4);
  const FeatureModel m(g, k, 0.01);
  History h;
  h.add_round({{0, 0.1}, {2, 0.3}, {3, 0.2}});

  RandomStream a(11), b(11);
  CHECK(propose_dpp_phe(m, h, 3, 0.5, 0.0, 50, a) == propose_phe(m, h, 3, 0.5, b));

  RandomStream rng(12);
  const PheSampler s(m, h, 0.5);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(4);
  const int tab = 1000000;
  for (int i = 0; i < tab; ++i) q[s.draw(rng)] += 1.0 / tab;
  const auto want = testing::mi_pair_distribution(m.posterior_covariance(h.flatten()) / 0.01, q);
  std::vector<std::vector<int>> draws;
  for (int c = 0; c < 10000; ++c) draws.push_back(propose_dpp_phe(m, h, 2, 0.5, 1.0, 200, rng));
  CHECK(testing::tv(testing::pair_frequencies(draws, 4), want) <= 0.05);
}

TEST_CASE("uniform exploration") {
  RandomStream rng(13);
  CHECK(all_equal(propose_uniform(1, 4, rng), 0));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(4);
  const int n = 100000;
  for (int i = 0; i < n; ++i) f[propose_uniform(4, 1, rng)[0]] += 1.0 / n;
  for (int i = 0; i < 4; ++i) CHECK(std::abs(f[i] - 0.25) <= 3 * std::sqrt(0.25 * 0.75 / n));
  RandomStream a(1), b(1);
  CHECK(propose_uniform(10, 5, a) == propose_uniform(10, 5, b));
}

TEST_CASE("pure DPP exploration") {
  RandomStream rng(14);
  const auto flat = testing::crafted(Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Zero(4, 4));
  std::vector<std::vector<int>> zero;
  for (int c = 0; c < 10000; ++c) zero.push_back(propose_pure_dpp(flat, 2, 1.0, 50, rng));
  CHECK(testing::tv(testing::pair_frequencies(zero, 4), std::vector<double>(16, 1.0 / 16)) <= 0.05);

  const auto p = correlated4();
  std::vector<std::vector<int>> draws;
  for (int c = 0; c < 10000; ++c) draws.push_back(propose_pure_dpp(p, 2, 1.0, 100, rng));
  const auto want = testing::mi_pair_distribution(p.covariance() / 0.5, Eigen::VectorXd::Constant(4, 0.25));
  CHECK(testing::tv(testing::pair_frequencies(draws, 4), want) <= 0.05);

  Eigen::VectorXd single = Eigen::VectorXd::Zero(4);
  const int n = 40000;
  for (int i = 0; i < n; ++i) single[propose_pure_dpp(p, 1, 1.0, 30, rng)[0]] += 1.0 / n;
  Eigen::VectorXd w = (1.0 + p.covariance().diagonal().array() / 0.5).matrix();
  w /= w.sum();
  CHECK(0.5 * (single - w).cwiseAbs().sum() <= 0.02);
}

TEST_CASE("DPP-TS puts no more mass on duplicate pairs than batched TS") {
  // Holds whenever the posterior variance is constant over the grid: every
  // pair weight is then at least the duplicate weight 1 + 2a.
  RandomStream rng(15);
  for (int inst = 0; inst < 10; ++inst) {
    const int n = 3 + rng.index(4);
    Eigen::MatrixXd s = testing::random_spd(n, rng);
    const Eigen::VectorXd inv = s.diagonal().cwiseSqrt().cwiseInverse();
    s = (0.5 + rng.uniform()) * inv.asDiagonal() * s * inv.asDiagonal();
    const auto p = testing::crafted(0.3 * rng.normal_vector(n), s, 0.2 + rng.uniform());
    const Eigen::VectorXd q = estimate_pmax(p, 50000, rng).probabilities;
    const auto dpp = testing::mi_pair_distribution(p.covariance() / p.noise_variance(), q);
    double dup_dpp = 0.0, dup_ts = 0.0;
    for (int i = 0; i < n; ++i) {
      dup_dpp += dpp[static_cast<std::size_t>(i * n + i)];
      dup_ts += q[i] * q[i];
    }
    CHECK(dup_dpp <= dup_ts + 1e-12);
  }
}

TEST_CASE("unequal variances can favour duplicates") {
  // One uncertain arm next to a nearly known one: duplicate weight 1 + 2a
  // beats pair weight (1 + a)(1 + eps).
  Eigen::VectorXd q(2);
  q << 0.9, 0.1;
  Eigen::MatrixXd c(2, 2);
  c << 10.0, 0.01, 0.01, 0.001;
  const auto dpp = testing::mi_pair_distribution(c, q);
  CHECK(dpp[0] + dpp[3] > q.squaredNorm() + 0.05);
}

TEST_CASE("dispatch returns valid batches for every strategy") {
  KernelSpec k;
  k.scale = 0.2;
  const auto g = testing::line_grid(12);
  const auto prior = GaussianPosterior::prior(g, k, 1e-4);
  const FeatureModel fm(g, k, 1e-4);
  History h;
  h.add_round({{2, 0.4}, {7, -0.1}});
  const auto post = prior.condition(h.flatten());
  for (StrategyKind kind : all_strategies()) {
    StrategyConfig c;
    c.kind = kind;
    c.batch_size = 4;
    if (kind == StrategyKind::kPhe || kind == StrategyKind::kDppPhe) c.phe_a = 0.5;
    c.validate();
    const ProposalContext ctx{post, h, &fm, 2};
    RandomStream a(16), b(16);
    const Batch x = propose(c, ctx, a);
    CAPTURE(to_string(kind));
    CHECK(x.size() == 4);
    CHECK_NOTHROW(validate_batch(x, 12));
    CHECK(propose(c, ctx, b) == x);
  }
  StrategyConfig phe;
  phe.kind = StrategyKind::kPhe;
  phe.phe_a = 1.0;
  RandomStream rng(17);
  CHECK_THROWS_AS(propose(phe, ProposalContext{post, h, nullptr, 1}, rng), ConfigError);
}
