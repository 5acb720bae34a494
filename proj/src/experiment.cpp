#include "dppbo/experiment.hpp"

#include <atomic>
#include <memory>
#include <optional>
#include <thread>

#include "dppbo/errors.hpp"
#include "dppbo/feature_model.hpp"
#include "dppbo/regret.hpp"

namespace dppbo {

namespace {

/// Read-only state shared by every replication.
struct SharedSetup {
  std::shared_ptr<const DomainGrid> grid;
  std::optional<Objective> fixed_objective;   // named benchmarks
  std::shared_ptr<const GridPrior> truth_prior;  // gp-sample
  std::shared_ptr<const GridPrior> model_prior;
  std::shared_ptr<const FeatureModel> feature_model;
};

bool same_kernel(const KernelSpec& a, const KernelSpec& b) {
  return a.lengthscale() == b.lengthscale() && a.output_scale == b.output_scale;
}

SharedSetup make_setup(const ExperimentConfig& c) {
  SharedSetup s;
  s.grid = std::make_shared<const DomainGrid>(c.objective.make_grid());
  const int n = s.grid->size();

  const bool wants_features = c.model.surrogate == SurrogateKind::kFeature ||
                              c.strategy.kind == StrategyKind::kPhe ||
                              c.strategy.kind == StrategyKind::kDppPhe;
  const double noise_var = c.model.noise_sigma * c.model.noise_sigma;
  if (wants_features) {
    s.feature_model = std::make_shared<const FeatureModel>(s.grid, c.model.kernel, noise_var,
                                                           c.model.features_per_dim);
  }

  if (c.model.surrogate == SurrogateKind::kFeature) {
    const Eigen::MatrixXd& phi = s.feature_model->features();
    s.model_prior = std::make_shared<const GridPrior>(s.grid, Eigen::VectorXd::Zero(n),
                                                      phi * phi.transpose());
  } else {
    s.model_prior = std::make_shared<const GridPrior>(s.grid, Eigen::VectorXd::Zero(n),
                                                      gram_matrix(c.model.kernel, *s.grid));
  }

  if (c.objective.kind == ObjectiveKind::kGpSample) {
    if (c.model.surrogate == SurrogateKind::kExact && same_kernel(c.objective.kernel, c.model.kernel)) {
      s.truth_prior = s.model_prior;
    } else {
      s.truth_prior = std::make_shared<const GridPrior>(s.grid, Eigen::VectorXd::Zero(n),
                                                        gram_matrix(c.objective.kernel, *s.grid));
    }
  } else {
    s.fixed_objective = Objective::tabulate(c.objective, s.grid);
  }
  return s;
}

RunRecord run_replication(const ExperimentConfig& c, const SharedSetup& s, int replication) {
  RunRecord rec;
  rec.run_id = replication;
  rec.seed = derive_seed(c.master_seed, static_cast<std::uint64_t>(replication), 0, 0);

  int round = 0;
  try {
    Objective objective = [&] {
      if (s.fixed_objective) return *s.fixed_objective;
      RandomStream truth_rng(
          derive_seed(c.master_seed, static_cast<std::uint64_t>(replication), 0, kTruthSlot));
      return Objective(s.grid, sample_gp_objective(*s.truth_prior, truth_rng));
    }();

    GaussianPosterior posterior =
        GaussianPosterior::from_prior(s.model_prior, c.model.noise_sigma * c.model.noise_sigma);
    History history;
    RegretTrace trace;
    const int d = s.grid->dimension();

    for (round = 1; round <= c.T; ++round) {
      const auto t = static_cast<std::uint64_t>(round);
      const auto rep = static_cast<std::uint64_t>(replication);
      RandomStream proposal_rng(derive_seed(c.master_seed, rep, t, kProposalSlot));
      RandomStream noise_rng(derive_seed(c.master_seed, rep, t, kNoiseSlot));

      const ProposalContext ctx{posterior, history, s.feature_model.get(), round};
      const Batch batch = propose(c.strategy, ctx, proposal_rng);
      if (static_cast<int>(batch.size()) != c.B) {
        throw NumericalError("strategy returned a batch of the wrong size", round);
      }
      validate_batch(batch, s.grid->size());

      std::vector<Observation> obs;
      obs.reserve(batch.size());
      for (int i : batch) obs.push_back({i, observe(objective.truth(), i, c.objective.noise_sigma, noise_rng)});

      update_regret(trace, objective.truth(), batch);
      for (std::size_t b = 0; b < batch.size(); ++b) {
        EvaluationRow row;
        row.t = round;
        row.b = static_cast<int>(b) + 1;
        row.index = batch[b];
        row.x.resize(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) row.x[static_cast<std::size_t>(k)] = s.grid->points()(batch[b], k);
        row.y = obs[b].y;
        const std::size_t flat = trace.simple.size() - batch.size() + b;
        row.inst_regret = trace.instantaneous.back()[b];
        row.batch_min_regret = trace.batch_min.back();
        row.simple_regret = trace.simple[flat];
        row.cum_regret = trace.cumulative[flat];
        row.bbcr = trace.bbcr.back();
        rec.rows.push_back(std::move(row));
      }

      posterior = posterior.condition(obs, round);
      history.add_round(std::move(obs));
    }
  } catch (const NumericalError& e) {
    rec.failed = true;
    rec.failed_round = e.round() >= 0 ? e.round() : round;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int workers) {
  ExperimentConfig c = config;
  c.validate();
  const SharedSetup setup = make_setup(c);

  std::vector<RunRecord> records(static_cast<std::size_t>(c.replications));
  const int threads = std::max(1, std::min(workers, c.replications));
  if (threads == 1) {
    for (int r = 0; r < c.replications; ++r) records[static_cast<std::size_t>(r)] = run_replication(c, setup, r);
    return records;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int r = next++; r < c.replications; r = next++) {
        records[static_cast<std::size_t>(r)] = run_replication(c, setup, r);
      }
    });
  }
  for (auto& th : pool) th.join();
  return records;
}

}  // namespace dppbo
