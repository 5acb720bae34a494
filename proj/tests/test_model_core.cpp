#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "dppbo/errors.hpp"
#include "dppbo/feature_model.hpp"
#include "dppbo/kernel.hpp"
#include "dppbo/posterior.hpp"
#include "test_support.hpp"

using namespace dppbo;
using testing::line_grid;

TEST_CASE("grid rejects duplicates and empty input") {
  Eigen::MatrixXd p(3, 1);
  p << 0.0, 0.5, 0.0;
  CHECK_THROWS_AS(DomainGrid{p}, ConfigError);
  CHECK_THROWS_AS(DomainGrid{Eigen::MatrixXd(0, 1)}, ConfigError);
}

TEST_CASE("uniform grid ordering") {
  const DomainGrid g = DomainGrid::uniform({{0.0, 1.0}, {-1.0, 1.0}}, {2, 3});
  REQUIRE(g.size() == 6);
  CHECK(g.point(0)[0] == 0.0);
  CHECK(g.point(0)[1] == -1.0);
  CHECK(g.point(1)[1] == 0.0);
  CHECK(g.point(3)[0] == 1.0);
  const DomainGrid one = DomainGrid::uniform({{2.0, 4.0}}, {1});
  CHECK(one.point(0)[0] == 3.0);
}

TEST_CASE("kernel values") {
  KernelSpec k;
  Eigen::VectorXd x(1), y(1);
  x << 0.0;
  y << 1.0;
  CHECK(kernel_eval(k, x, x) == 1.0);
  CHECK(kernel_eval(k, x, y) == doctest::Approx(0.60653065971263342).epsilon(1e-15));
  CHECK(kernel_eval(k, x, y) == kernel_eval(k, y, x));

  k.scale = 1e6;
  CHECK(std::abs(kernel_eval(k, x, y) - 1.0) < 1e-10);

  KernelSpec sq;
  sq.convention = ScaleConvention::kSquaredLengthscale;
  sq.scale = 0.25;  // lengthscale 0.5
  CHECK(kernel_eval(sq, x, y) == doctest::Approx(std::exp(-2.0)));

  Eigen::VectorXd z(2);
  z << 0.0, 0.0;
  CHECK_THROWS_AS(kernel_eval(k, x, z), ConfigError);
  CHECK(parse_scale_convention("squared-lengthscale") == ScaleConvention::kSquaredLengthscale);
  CHECK_THROWS_AS(parse_scale_convention("gamma"), ConfigError);
}

TEST_CASE("gram matrix is PSD") {
  KernelSpec k;
  k.scale = 0.1;
  const auto g = line_grid(40);
  const Eigen::MatrixXd gram = gram_matrix(k, *g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
  CHECK(gram.diagonal().isOnes());
}

TEST_CASE("conditioning on nothing returns the prior") {
  KernelSpec k;
  const auto p = GaussianPosterior::prior(line_grid(5), k, 0.1);
  const auto q = p.condition({});
  CHECK(q.mean() == p.mean());
  CHECK(q.covariance() == p.covariance());
}

TEST_CASE("one-point update matches dense oracle") {
  KernelSpec k;
  k.scale = 0.4;
  const auto g = line_grid(3);
  const auto p = GaussianPosterior::prior(g, k, 0.3);
  const std::vector<Observation> obs{{1, 0.7}};
  const auto q = p.condition(obs);
  const auto ref = testing::dense_condition(Eigen::VectorXd::Zero(3), gram_matrix(k, *g), {1}, {0.7}, 0.3);
  CHECK(testing::max_abs(q.mean() - ref.mean) < 1e-12);
  CHECK(testing::max_abs(q.covariance() - ref.cov) < 1e-12);
}

TEST_CASE("sequential conditioning matches a batch dense solve and is order independent") {
  RandomStream rng(3);
  KernelSpec k;
  k.scale = 0.3;
  const auto g = line_grid(12);
  const auto prior = GaussianPosterior::prior(g, k, 0.05);
  std::vector<Observation> obs;
  for (int i = 0; i < 9; ++i) obs.push_back({rng.index(12), rng.normal()});

  GaussianPosterior a = prior;
  for (std::size_t i = 0; i < obs.size(); i += 3) a = a.condition(std::span(obs).subspan(i, 3));
  std::vector<Observation> rev(obs.rbegin(), obs.rend());
  const GaussianPosterior b = prior.condition(rev);

  std::vector<int> idx;
  std::vector<double> y;
  for (const auto& o : obs) {
    idx.push_back(o.index);
    y.push_back(o.y);
  }
  const auto ref = testing::dense_condition(Eigen::VectorXd::Zero(12), gram_matrix(k, *g), idx, y, 0.05);
  CHECK(testing::max_abs(a.mean() - ref.mean) < 1e-8);
  CHECK(testing::max_abs(a.covariance() - ref.cov) < 1e-8);
  CHECK(testing::max_abs(a.mean() - b.mean()) < 1e-8);
  CHECK(testing::max_abs(a.covariance() - b.covariance()) < 1e-8);
  CHECK((a.covariance().diagonal().array() <= prior.covariance().diagonal().array() + 1e-12).all());

  // The cache factors K_prior[O,O] + noise I.
  const Eigen::MatrixXd& l = a.cholesky_cache();
  Eigen::MatrixXd koo(9, 9);
  for (int i = 0; i < 9; ++i)
    for (int j = 0; j < 9; ++j) koo(i, j) = prior.covariance()(obs[i].index, obs[j].index) + (i == j ? 0.05 : 0.0);
  CHECK(testing::max_abs(l * l.transpose() - koo) < 1e-10);
}

TEST_CASE("repeated observation collapses the variance") {
  KernelSpec k;
  const auto p = GaussianPosterior::prior(line_grid(3), k, 1e-4);
  std::vector<Observation> obs(1000, Observation{1, 0.0});
  const auto q = p.condition(obs);
  CHECK(std::abs(q.mean()[1]) < 1e-3);
  CHECK(q.covariance()(1, 1) < 1e-3);
}

TEST_CASE("ill-conditioned system raises a numerical error with its round") {
  KernelSpec k;
  k.scale = 100.0;
  const auto p = GaussianPosterior::prior(line_grid(50), k, 1e-14);
  std::vector<Observation> obs;
  for (int i = 0; i < 50; i += 7) obs.push_back({i, 0.0});
  try {
    (void)p.condition(obs, 4);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(e.round() == 4);
  }
}

TEST_CASE("path sampling") {
  SUBCASE("zero covariance returns the mean") {
    Eigen::VectorXd mu(3);
    mu << 0.1, -2.0, 3.0;
    const auto p = testing::crafted(mu, Eigen::MatrixXd::Zero(3, 3));
    RandomStream rng(1);
    CHECK(p.sample_path(rng) == mu);
  }
  SUBCASE("identity covariance moments") {
    const auto p = testing::crafted(Eigen::VectorXd::Zero(2), Eigen::MatrixXd::Identity(2, 2));
    RandomStream rng(2);
    Eigen::Matrix2d acc = Eigen::Matrix2d::Zero();
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd f = p.sample_path(rng);
      acc += f * f.transpose();
    }
    acc /= n;
    CHECK(testing::max_abs(acc - Eigen::Matrix2d::Identity()) < 0.02);
  }
  SUBCASE("posterior moments within 3 SE") {
    KernelSpec k;
    k.scale = 0.3;
    const auto prior = GaussianPosterior::prior(line_grid(6), k, 0.1);
    const std::vector<Observation> obs{{1, 0.5}, {4, -0.3}};
    const auto p = prior.condition(obs);
    RandomStream rng(9);
    const int n = 100000;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(6);
    Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(6, 6);
    for (int i = 0; i < n; ++i) {
      const Eigen::VectorXd f = p.sample_path(rng) - p.mean();
      sum += f;
      sq += f * f.transpose();
    }
    const Eigen::MatrixXd& c = p.covariance();
    for (int i = 0; i < 6; ++i) {
      CHECK(std::abs(sum[i] / n) <= 3.0 * std::sqrt(c(i, i) / n) + 1e-12);
      for (int j = 0; j < 6; ++j) {
        const double se = std::sqrt((c(i, i) * c(j, j) + c(i, j) * c(i, j)) / n);
        CHECK(std::abs(sq(i, j) / n - c(i, j)) <= 3.0 * se + 1e-12);
      }
    }
  }
  SUBCASE("fixed seed is deterministic") {
    KernelSpec k;
    const auto p = GaussianPosterior::prior(line_grid(8), k, 0.1);
    RandomStream a(5), b(5);
    CHECK(p.sample_path(a) == p.sample_path(b));
  }
}

TEST_CASE("PSD repair limits") {
  Eigen::MatrixXd slightly(2, 2);
  slightly << 1.0, 1.0 + 1e-12, 1.0 + 1e-12, 1.0;
  CHECK_NOTHROW(psd_factor(slightly));
  Eigen::MatrixXd grossly(2, 2);
  grossly << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(psd_factor(grossly), NumericalError);
}

TEST_CASE("hallucination") {
  KernelSpec k;
  k.scale = 0.5;
  const auto g = line_grid(3);
  const auto prior = GaussianPosterior::prior(g, k, 0.2);
  const std::vector<Observation> obs{{0, 1.0}};
  const auto p = prior.condition(obs);
  const auto h = p.hallucinate(2);
  CHECK(testing::max_abs(h.mean() - p.mean()) < 1e-8);
  CHECK(h.covariance()(2, 2) < p.covariance()(2, 2));
  const auto ref = testing::dense_condition(Eigen::VectorXd::Zero(3), gram_matrix(k, *g), {0, 2},
                                            {1.0, p.mean()[2]}, 0.2);
  CHECK(testing::max_abs(h.covariance() - ref.cov) < 1e-10);
  CHECK(testing::max_abs(h.mean() - ref.mean) < 1e-10);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(3, 3);
  cov(1, 1) = 0.0;
  const auto z = testing::crafted(Eigen::VectorXd::Ones(3), cov);
  const auto same = z.hallucinate(1);
  CHECK(same.covariance() == z.covariance());
  CHECK(same.mean() == z.mean());
}

TEST_CASE("hallucination chains preserve the mean") {
  RandomStream rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + rng.index(6);
    auto p = testing::crafted(rng.normal_vector(n), testing::random_spd(n, rng), 0.1 + rng.uniform());
    const Eigen::VectorXd mu0 = p.mean();
    for (int s = 0; s < 6; ++s) {
      const auto next = p.hallucinate(rng.index(n));
      CHECK((next.covariance().diagonal().array() <= p.covariance().diagonal().array() + 1e-12).all());
      p = next;
    }
    CHECK(testing::max_abs(p.mean() - mu0) < 1e-8);
  }
}

TEST_CASE("argmax tie breaking") {
  Eigen::VectorXd v(4);
  v << 1.0, 3.0, 3.0, 0.0;
  CHECK(argmax_lowest(v) == 1);
  RandomStream rng(0);
  int hits[4] = {0, 0, 0, 0};
  for (int i = 0; i < 2000; ++i) ++hits[argmax_random_ties(v, rng)];
  CHECK(hits[0] == 0);
  CHECK(hits[3] == 0);
  CHECK(hits[1] > 900);
  CHECK(hits[2] > 900);
}

TEST_CASE("Gauss-Hermite rule integrates polynomials exactly") {
  Eigen::VectorXd x, w;
  gauss_hermite(6, x, w);
  // int t^k exp(-t^2) dt = Gamma((k+1)/2) for even k
  for (int k = 0; k <= 10; k += 2) {
    const double exact = std::tgamma((k + 1) / 2.0);
    CHECK((w.array() * x.array().pow(k)).sum() == doctest::Approx(exact).epsilon(1e-12));
  }
  CHECK(std::abs((w.array() * x.array().pow(3)).sum()) < 1e-12);
}

TEST_CASE("feature model") {
  KernelSpec k;
  k.scale = 0.2;
  const auto g = line_grid(64);
  const FeatureModel m(g, k, 1e-4);
  CHECK(m.kernel_error() <= FeatureModel::kMaxKernelError);
  const Eigen::MatrixXd exact = gram_matrix(k, *g);
  const Eigen::MatrixXd& phi = m.features();
  CHECK((phi * phi.transpose() - exact).norm() / exact.norm() <= 0.05);

  SUBCASE("empty history gives zero-mean prior paths") {
    CHECK(m.mean_path({}).isZero());
    RandomStream a(1), b(1);
    CHECK(ff_fit_and_sample(m, {}, a) == ff_fit_and_sample(m, {}, b));
  }
  SUBCASE("noiseless interpolation of a representable truth") {
    const FeatureModel tight(g, k, 1e-10, 12);
    RandomStream rng(4);
    const Eigen::VectorXd w = rng.normal_vector(tight.num_features());
    const Eigen::VectorXd truth = tight.features() * w;
    std::vector<Observation> hist;
    for (int i = 0; i < 64; ++i) hist.push_back({i, truth[i]});
    const Eigen::VectorXd path = tight.sample_path(hist, rng);
    CHECK((path - truth).cwiseAbs().maxCoeff() < 1e-4);
  }
  SUBCASE("posterior matches the induced-kernel GP") {
    const std::vector<Observation> hist{{3, 0.2}, {40, -1.0}, {41, -0.9}};
    const auto gp = GaussianPosterior::from_moments(g, Eigen::VectorXd::Zero(64), phi * phi.transpose(), 1e-4);
    const auto post = gp.condition(hist);
    CHECK(testing::max_abs(m.mean_path(hist) - post.mean()) < 1e-6);
    CHECK(testing::max_abs(m.posterior_covariance(hist) - post.covariance()) < 1e-6);
  }
  SUBCASE("too few explicit nodes is a config error") {
    CHECK_THROWS_AS(FeatureModel(g, k, 1e-4, 1), ConfigError);
  }
}

TEST_CASE("seed derivation is keyed, not sequential") {
  CHECK(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4));
  CHECK(derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 4, 3));
  CHECK(derive_seed(1, 0, 0, 0) != derive_seed(2, 0, 0, 0));
  RandomStream a(derive_seed(9, 1, 1, 0));
  RandomStream b(derive_seed(9, 1, 1, 0));
  CHECK(a.normal() == b.normal());
}
