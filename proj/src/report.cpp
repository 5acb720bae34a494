#include "dppbo/report.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dppbo {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

}  // namespace

double standard_error(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

AggregateStats aggregate(const std::vector<RunRecord>& records) {
  AggregateStats stats;
  // t -> per-run end-of-round values
  std::map<int, std::vector<double>> simple, cum;
  for (const RunRecord& r : records) {
    if (r.failed) {
      ++stats.n_failed;
      continue;
    }
    std::map<int, const EvaluationRow*> last;
    for (const EvaluationRow& row : r.rows) last[row.t] = &row;
    for (const auto& [t, row] : last) {
      simple[t].push_back(row->simple_regret);
      cum[t].push_back(row->cum_regret);
    }
  }
  for (const auto& [t, s] : simple) {
    const std::vector<double>& c = cum[t];
    AggregateRow row;
    row.t = t;
    row.n_runs = static_cast<int>(s.size());
    for (double x : s) row.mean_simple += x;
    for (double x : c) row.mean_cum += x;
    row.mean_simple /= static_cast<double>(s.size());
    row.mean_cum /= static_cast<double>(c.size());
    row.se_simple = standard_error(s);
    row.se_cum = standard_error(c);
    stats.rows.push_back(row);
  }
  return stats;
}

void write_run_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  std::size_t d = 0;
  for (const RunRecord& r : records) {
    if (!r.rows.empty()) {
      d = r.rows.front().x.size();
      break;
    }
  }
  out << "run_id,t,b,index";
  for (std::size_t k = 0; k < d; ++k) out << ",x" << k;
  out << ",y,inst_regret,batch_min_regret,simple_regret,cum_regret,bbcr\n";
  for (const RunRecord& r : records) {
    for (const EvaluationRow& row : r.rows) {
      out << r.run_id << ',' << row.t << ',' << row.b << ',' << row.index;
      for (double x : row.x) out << ',' << fmt(x);
      out << ',' << fmt(row.y) << ',' << fmt(row.inst_regret) << ',' << fmt(row.batch_min_regret)
          << ',' << fmt(row.simple_regret) << ',' << fmt(row.cum_regret) << ',' << fmt(row.bbcr)
          << '\n';
    }
  }
}

std::vector<RunRecord> read_run_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("run csv: missing header");
  const std::vector<std::string> header = split(line);
  if (header.size() < 10) throw std::runtime_error("run csv: bad header");
  const std::size_t d = header.size() - 10;

  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> c = split(line);
    if (c.size() != header.size()) throw std::runtime_error("run csv: bad row: " + line);
    const int run_id = std::stoi(c[0]);
    if (out.empty() || out.back().run_id != run_id) {
      out.emplace_back();
      out.back().run_id = run_id;
    }
    EvaluationRow row;
    row.t = std::stoi(c[1]);
    row.b = std::stoi(c[2]);
    row.index = std::stoi(c[3]);
    for (std::size_t k = 0; k < d; ++k) row.x.push_back(std::stod(c[4 + k]));
    row.y = std::stod(c[4 + d]);
    row.inst_regret = std::stod(c[5 + d]);
    row.batch_min_regret = std::stod(c[6 + d]);
    row.simple_regret = std::stod(c[7 + d]);
    row.cum_regret = std::stod(c[8 + d]);
    row.bbcr = std::stod(c[9 + d]);
    out.back().rows.push_back(std::move(row));
  }
  return out;
}

void write_aggregate_csv(std::ostream& out, const AggregateStats& stats) {
  out << "t,mean_simple,se_simple,mean_cum,se_cum,n_runs\n";
  for (const AggregateRow& r : stats.rows) {
    out << r.t << ',' << fmt(r.mean_simple) << ',' << fmt(r.se_simple) << ',' << fmt(r.mean_cum)
        << ',' << fmt(r.se_cum) << ',' << r.n_runs << '\n';
  }
}

AggregateStats read_aggregate_csv(std::istream& in, std::string label) {
  AggregateStats stats;
  stats.label = std::move(label);
  std::string line;
  if (!std::getline(in, line) || line != "t,mean_simple,se_simple,mean_cum,se_cum,n_runs") {
    throw std::runtime_error("aggregate csv: bad header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> c = split(line);
    if (c.size() != 6) throw std::runtime_error("aggregate csv: bad row: " + line);
    stats.rows.push_back({std::stoi(c[0]), std::stod(c[1]), std::stod(c[2]), std::stod(c[3]),
                          std::stod(c[4]), std::stoi(c[5])});
  }
  return stats;
}

void emit_run_csv(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream f = open_out(path);
  write_run_csv(f, records);
}

void emit_aggregate_csv(const std::string& path, const AggregateStats& stats) {
  std::ofstream f = open_out(path);
  write_aggregate_csv(f, stats);
}

AggregateStats load_aggregate_csv(const std::string& path, std::string label) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_aggregate_csv(f, std::move(label));
}

void emit_status_json(const std::string& path, const std::vector<RunRecord>& records) {
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  int failed = 0;
  for (const RunRecord& r : records) {
    nlohmann::ordered_json j;
    j["run_id"] = r.run_id;
    j["seed"] = r.seed;
    j["failed"] = r.failed;
    if (r.failed) {
      ++failed;
      j["failed_round"] = r.failed_round;
      j["error"] = r.error;
    }
    runs.push_back(std::move(j));
  }
  nlohmann::ordered_json doc;
  doc["n_runs"] = records.size();
  doc["n_failed"] = failed;
  doc["runs"] = std::move(runs);
  std::ofstream f = open_out(path);
  f << doc.dump(2) << '\n';
}

}  // namespace dppbo
