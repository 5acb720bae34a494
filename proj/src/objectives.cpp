#include "dppbo/objectives.hpp"

#include <cmath>
#include <numbers>

#include "dppbo/errors.hpp"

namespace dppbo {

std::string to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kGpSample: return "gp-sample";
    case ObjectiveKind::kRosenbrock: return "rosenbrock";
    case ObjectiveKind::kStyblinskiTang: return "styblinski-tang";
    case ObjectiveKind::kMichalewicz: return "michalewicz";
  }
  return "unknown";
}

ObjectiveKind parse_objective(const std::string& name) {
  if (name == "gp-sample") return ObjectiveKind::kGpSample;
  if (name == "rosenbrock") return ObjectiveKind::kRosenbrock;
  if (name == "styblinski-tang") return ObjectiveKind::kStyblinskiTang;
  if (name == "michalewicz") return ObjectiveKind::kMichalewicz;
  throw ConfigError("unknown objective '" + name + "'");
}

std::vector<std::pair<double, double>> ObjectiveSpec::effective_bounds() const {
  if (!bounds.empty()) return bounds;
  std::pair<double, double> box{0.0, 1.0};
  switch (kind) {
    case ObjectiveKind::kGpSample: box = {0.0, 1.0}; break;
    case ObjectiveKind::kRosenbrock: box = {-2.0, 2.0}; break;
    case ObjectiveKind::kStyblinskiTang: box = {-5.0, 5.0}; break;
    case ObjectiveKind::kMichalewicz: box = {0.0, std::numbers::pi}; break;
  }
  return std::vector<std::pair<double, double>>(static_cast<std::size_t>(dimension), box);
}

std::vector<int> ObjectiveSpec::effective_resolution() const {
  if (!resolution.empty()) return resolution;
  return std::vector<int>(static_cast<std::size_t>(dimension), dimension == 1 ? 1024 : 64);
}

void ObjectiveSpec::validate() const {
  if (dimension < 1 || dimension > 4) throw ConfigError("objective dimension must be in [1, 4]");
  if (kind == ObjectiveKind::kRosenbrock && dimension != 2) {
    throw ConfigError("rosenbrock is defined for dimension 2");
  }
  if (!bounds.empty() && static_cast<int>(bounds.size()) != dimension) {
    throw ConfigError("objective bounds must have one interval per dimension");
  }
  if (!resolution.empty() && static_cast<int>(resolution.size()) != dimension) {
    throw ConfigError("objective resolution must have one entry per dimension");
  }
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw ConfigError("noise sigma must be >= 0");
  }
  if (kind == ObjectiveKind::kGpSample) kernel.validate();
}

DomainGrid ObjectiveSpec::make_grid() const {
  validate();
  return DomainGrid::uniform(effective_bounds(), effective_resolution());
}

double benchmark_value(ObjectiveKind kind, const Eigen::Ref<const Eigen::VectorXd>& x) {
  switch (kind) {
    case ObjectiveKind::kRosenbrock: {
      if (x.size() != 2) throw ConfigError("rosenbrock takes a 2-d point");
      const double a = x[1] - x[0] * x[0];
      const double b = x[0] - 1.0;
      return 100.0 * a * a + b * b;
    }
    case ObjectiveKind::kStyblinskiTang: {
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double v = x[i];
        s += v * v * v * v - 16.0 * v * v + 5.0 * v;
      }
      return 0.5 * s;
    }
    case ObjectiveKind::kMichalewicz: {
      const auto d = static_cast<double>(x.size());
      double s = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double v = x[i];
        const double inner = std::sin(static_cast<double>(i + 1) * v * v / std::numbers::pi);
        s += std::sin(v) * std::pow(inner, 2.0 * d);
      }
      return -s;
    }
    case ObjectiveKind::kGpSample:
      break;
  }
  throw ConfigError("benchmark_value: gp-sample has no closed form");
}

double eval_objective(const ObjectiveSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != spec.dimension) throw ConfigError("eval_objective: dimension mismatch");
  return -benchmark_value(spec.kind, x);
}

Eigen::VectorXd sample_gp_objective(const KernelSpec& kernel, const DomainGrid& grid,
                                    RandomStream& rng) {
  const GridPrior prior(std::make_shared<const DomainGrid>(grid),
                        Eigen::VectorXd::Zero(grid.size()), gram_matrix(kernel, grid));
  return prior.sample(rng);
}

Eigen::VectorXd sample_gp_objective(const GridPrior& prior, RandomStream& rng) {
  return prior.sample(rng);
}

double observe(const Eigen::VectorXd& truth, int index, double sigma, RandomStream& rng) {
  if (index < 0 || index >= truth.size()) throw ConfigError("observe: index out of range");
  if (sigma == 0.0) return truth[index];
  return truth[index] + sigma * rng.normal();
}

Objective::Objective(std::shared_ptr<const DomainGrid> grid, Eigen::VectorXd truth)
    : grid_(std::move(grid)), truth_(std::move(truth)) {
  if (!grid_ || truth_.size() != grid_->size()) throw ConfigError("Objective: truth/grid mismatch");
  if (!truth_.allFinite()) throw NumericalError("Objective: non-finite truth value");
  argmax_ = argmax_lowest(truth_);
}

Objective Objective::tabulate(const ObjectiveSpec& spec, std::shared_ptr<const DomainGrid> grid) {
  Eigen::VectorXd f(grid->size());
  for (int i = 0; i < grid->size(); ++i) f[i] = eval_objective(spec, grid->point(i));
  return Objective(std::move(grid), std::move(f));
}

}  // namespace dppbo
