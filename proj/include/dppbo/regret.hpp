#ifndef DPPBO_REGRET_HPP
#define DPPBO_REGRET_HPP

#include <vector>

#include <Eigen/Core>

#include "dppbo/lensemble.hpp"

namespace dppbo {

/// Regret series of one run. Per-evaluation series are flattened in
/// (round, slot) order; per-round series have one entry per round.
struct RegretTrace {
  std::vector<std::vector<double>> instantaneous;  // r_{t,b}
  std::vector<double> batch_min;                   // min_b r_{t,b}
  std::vector<double> simple;                      // best-so-far, per evaluation
  std::vector<double> cumulative;                  // running sum, per evaluation
  std::vector<double> bbcr;                        // sum_{s<=t} min_b r_{s,b}

  int rounds() const { return static_cast<int>(batch_min.size()); }
  /// Simple regret after round t (1-based).
  double simple_after(int t) const;
  double cumulative_after(int t) const;
};

/// Appends the regrets of `batch` against `truth`. Throws std::logic_error if
/// simple regret ever increases or cumulative regret ever decreases.
void update_regret(RegretTrace& trace, const Eigen::VectorXd& truth, const Batch& batch);

}  // namespace dppbo

#endif  // DPPBO_REGRET_HPP
