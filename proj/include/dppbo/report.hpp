#ifndef DPPBO_REPORT_HPP
#define DPPBO_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "dppbo/experiment.hpp"

namespace dppbo {

struct AggregateRow {
  int t = 0;
  double mean_simple = 0.0;
  double se_simple = 0.0;
  double mean_cum = 0.0;
  double se_cum = 0.0;
  int n_runs = 0;

  bool operator==(const AggregateRow&) const = default;
};

struct AggregateStats {
  std::string label;
  std::vector<AggregateRow> rows;
  int n_failed = 0;
};

/// Per-round mean and standard error (n - 1 denominator, 0 when n = 1) of
/// simple and cumulative regret at the end of each round. Failed runs are
/// excluded and counted.
AggregateStats aggregate(const std::vector<RunRecord>& records);

/// Standard error of the mean with the n - 1 convention.
double standard_error(const std::vector<double>& values);

void write_run_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_aggregate_csv(std::ostream& out, const AggregateStats& stats);

/// Parses write_run_csv output. Seeds and failure flags are not part of the
/// CSV and come back zeroed.
std::vector<RunRecord> read_run_csv(std::istream& in);
AggregateStats read_aggregate_csv(std::istream& in, std::string label = {});

void emit_run_csv(const std::string& path, const std::vector<RunRecord>& records);
void emit_aggregate_csv(const std::string& path, const AggregateStats& stats);
AggregateStats load_aggregate_csv(const std::string& path, std::string label = {});

/// Seeds, failure flags and failed rounds of every run, as JSON.
void emit_status_json(const std::string& path, const std::vector<RunRecord>& records);

}  // namespace dppbo

#endif  // DPPBO_REPORT_HPP
