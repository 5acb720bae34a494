#ifndef DPPBO_OBJECTIVES_HPP
#define DPPBO_OBJECTIVES_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dppbo/grid.hpp"
#include "dppbo/kernel.hpp"
#include "dppbo/posterior.hpp"
#include "dppbo/random.hpp"

namespace dppbo {

enum class ObjectiveKind { kGpSample, kRosenbrock, kStyblinskiTang, kMichalewicz };

/// gp-sample, rosenbrock, styblinski-tang, michalewicz.
std::string to_string(ObjectiveKind kind);
ObjectiveKind parse_objective(const std::string& name);

/// Ground truth for a benchmark run. The optimization loop maximizes, so the
/// named minimization benchmarks are stored negated.
struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::kGpSample;
  int dimension = 1;
  /// Empty selects the default box for the kind.
  std::vector<std::pair<double, double>> bounds;
  /// Points per axis; empty selects 1024 in 1-d and 64 per axis otherwise.
  std::vector<int> resolution;
  double noise_sigma = 0.01;
  /// Prior of the gp-sample kind.
  KernelSpec kernel;

  std::vector<std::pair<double, double>> effective_bounds() const;
  std::vector<int> effective_resolution() const;
  void validate() const;
  DomainGrid make_grid() const;
};

/// The benchmark formula as published (a minimization problem).
///   rosenbrock:      100 (x2 - x1^2)^2 + (x1 - 1)^2             (d = 2)
///   styblinski-tang: 1/2 sum_i (x_i^4 - 16 x_i^2 + 5 x_i)
///   michalewicz:     -sum_i sin(x_i) sin^(2d)(i x_i^2 / pi)      (i from 1)
double benchmark_value(ObjectiveKind kind, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Value maximized by the optimizer: -benchmark_value for named kinds.
double eval_objective(const ObjectiveSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x);

/// One joint prior draw of a zero-mean GP over the grid.
Eigen::VectorXd sample_gp_objective(const KernelSpec& kernel, const DomainGrid& grid,
                                    RandomStream& rng);
Eigen::VectorXd sample_gp_objective(const GridPrior& prior, RandomStream& rng);

/// truth[index] + N(0, sigma^2).
double observe(const Eigen::VectorXd& truth, int index, double sigma, RandomStream& rng);

/// A realized ground truth on a grid, with its maximizer cached.
class Objective {
 public:
  Objective(std::shared_ptr<const DomainGrid> grid, Eigen::VectorXd truth);

  /// Tabulates a named benchmark over the spec's grid.
  static Objective tabulate(const ObjectiveSpec& spec, std::shared_ptr<const DomainGrid> grid);

  const DomainGrid& grid() const { return *grid_; }
  const Eigen::VectorXd& truth() const { return truth_; }
  int argmax() const { return argmax_; }
  double optimum() const { return truth_[argmax_]; }

 private:
  std::shared_ptr<const DomainGrid> grid_;
  Eigen::VectorXd truth_;
  int argmax_;
};

}  // namespace dppbo

#endif  // DPPBO_OBJECTIVES_HPP
