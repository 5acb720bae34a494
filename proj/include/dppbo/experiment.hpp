#ifndef DPPBO_EXPERIMENT_HPP
#define DPPBO_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "dppbo/config.hpp"

namespace dppbo {

/// One evaluation (t, b) of a run. t and b are 1-based.
struct EvaluationRow {
  int t = 0;
  int b = 0;
  int index = 0;
  std::vector<double> x;
  double y = 0.0;
  double inst_regret = 0.0;
  double batch_min_regret = 0.0;
  double simple_regret = 0.0;
  double cum_regret = 0.0;
  double bbcr = 0.0;

  bool operator==(const EvaluationRow&) const = default;
};

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  int failed_round = -1;
  std::string error;
  std::vector<EvaluationRow> rows;
};

/// Seed keys. Replication r draws its truth from slot kTruthSlot of round
/// 0, its round-t proposal from (t, kProposalSlot) and its round-t noise
/// from (t, kNoiseSlot).
inline constexpr std::uint64_t kTruthSlot = 1;
inline constexpr std::uint64_t kProposalSlot = 0;
inline constexpr std::uint64_t kNoiseSlot = 1;

/// Runs every replication of `config` (validated copy) on up to `workers`
/// threads. Output depends only on the config: thread count and scheduling
/// never change a record. A replication that hits a numerical failure is
/// marked failed with its round and the others continue.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, int workers = 1);

}  // namespace dppbo

#endif  // DPPBO_EXPERIMENT_HPP
