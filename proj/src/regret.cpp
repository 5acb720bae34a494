#include "dppbo/regret.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "dppbo/errors.hpp"

namespace dppbo {

double RegretTrace::simple_after(int t) const {
  if (t < 1 || t > rounds()) throw ConfigError("simple_after: round out of range");
  std::size_t evals = 0;
  for (int s = 0; s < t; ++s) evals += instantaneous[static_cast<std::size_t>(s)].size();
  return simple[evals - 1];
}

double RegretTrace::cumulative_after(int t) const {
  if (t < 1 || t > rounds()) throw ConfigError("cumulative_after: round out of range");
  std::size_t evals = 0;
  for (int s = 0; s < t; ++s) evals += instantaneous[static_cast<std::size_t>(s)].size();
  return cumulative[evals - 1];
}

void update_regret(RegretTrace& trace, const Eigen::VectorXd& truth, const Batch& batch) {
  validate_batch(batch, static_cast<int>(truth.size()));
  const double best = truth.maxCoeff();
  std::vector<double> inst;
  inst.reserve(batch.size());
  double batch_min = std::numeric_limits<double>::infinity();
  for (int i : batch) {
    const double r = best - truth[i];
    inst.push_back(r);
    batch_min = std::min(batch_min, r);

    const double prev_simple =
        trace.simple.empty() ? std::numeric_limits<double>::infinity() : trace.simple.back();
    const double prev_cum = trace.cumulative.empty() ? 0.0 : trace.cumulative.back();
    const double simple = std::min(prev_simple, r);
    const double cum = prev_cum + r;
    if (simple > prev_simple || cum < prev_cum) {
      throw std::logic_error("update_regret: regret monotonicity violated");
    }
    trace.simple.push_back(simple);
    trace.cumulative.push_back(cum);
  }
  trace.instantaneous.push_back(std::move(inst));
  trace.batch_min.push_back(batch_min);
  trace.bbcr.push_back((trace.bbcr.empty() ? 0.0 : trace.bbcr.back()) + batch_min);
}

}  // namespace dppbo
