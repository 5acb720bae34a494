// dppbo: run batched BO experiments, plot regret curves, run oracle checks.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dppbo/config.hpp"
#include "dppbo/errors.hpp"
#include "dppbo/experiment.hpp"
#include "dppbo/oracle_suites.hpp"
#include "dppbo/report.hpp"
#include "dppbo/svg_plot.hpp"

namespace fs = std::filesystem;

namespace {

int cmd_run(const std::vector<std::string>& configs, std::optional<std::uint64_t> seed,
            std::optional<std::string> out_dir, int parallel) {
  int status = 0;
  for (const std::string& path : configs) {
    dppbo::ExperimentConfig cfg = dppbo::load_config(path);
    if (seed) cfg.master_seed = *seed;
    if (out_dir) cfg.output_directory = *out_dir;
    cfg.validate();
    const std::string label = cfg.effective_label();
    fs::create_directories(cfg.output_directory);
    const fs::path dir(cfg.output_directory);

    const auto records = dppbo::run_experiment(cfg, parallel);
    const dppbo::AggregateStats stats = dppbo::aggregate(records);
    dppbo::emit_run_csv((dir / ("runs_" + label + ".csv")).string(), records);
    dppbo::emit_aggregate_csv((dir / ("aggregate_" + label + ".csv")).string(), stats);
    dppbo::emit_status_json((dir / ("status_" + label + ".json")).string(), records);
    dppbo::save_config(cfg, (dir / ("config_" + label + ".json")).string());

    std::cout << label << ": " << records.size() - static_cast<std::size_t>(stats.n_failed) << "/"
              << records.size() << " runs ok";
    if (!stats.rows.empty()) {
      std::cout << ", final simple regret " << stats.rows.back().mean_simple << " +/- "
                << stats.rows.back().se_simple;
    }
    std::cout << '\n';
    if (stats.n_failed > 0) {
      for (const auto& r : records) {
        if (r.failed) std::cerr << "  run " << r.run_id << " failed in round " << r.failed_round << ": " << r.error << '\n';
      }
      status = 3;
    }
  }
  return status;
}

int cmd_plot(const std::string& in_dir, const std::string& out_file, bool log_y,
             const std::string& metric, const std::string& title) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(in_dir)) {
    const std::string name = e.path().filename().string();
    if (e.is_regular_file() && name.starts_with("aggregate_") && name.ends_with(".csv")) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "no aggregate_*.csv files in " << in_dir << '\n';
    return 1;
  }
  std::vector<dppbo::AggregateStats> series;
  for (const fs::path& f : files) {
    std::string label = f.stem().string().substr(std::string("aggregate_").size());
    series.push_back(dppbo::load_aggregate_csv(f.string(), label));
  }
  dppbo::PlotOptions opt;
  opt.log_y = log_y;
  opt.metric = metric == "cumulative" ? dppbo::PlotMetric::kCumulative : dppbo::PlotMetric::kSimple;
  opt.title = title;
  dppbo::emit_plot(out_file, series, opt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batched Bayesian optimization with DPP-Thompson sampling"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::uint64_t seed = 0;
  std::string out_dir;
  int parallel = 1;
  auto* run = app.add_subcommand("run", "Run experiments from config files");
  run->add_option("--config", configs, "Experiment config (JSON); repeatable")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Override the master seed");
  auto* out_opt = run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);

  std::string in_dir, plot_out, metric = "simple", title;
  bool log_y = false;
  auto* plot = app.add_subcommand("plot", "Render aggregate CSVs as an SVG chart");
  plot->add_option("--in", in_dir, "Directory with aggregate_*.csv")->required()->check(CLI::ExistingDirectory);
  plot->add_option("--out", plot_out, "Output SVG")->required();
  plot->add_flag("--log-y", log_y, "Log-scale y axis");
  plot->add_option("--metric", metric, "simple or cumulative")->check(CLI::IsMember({"simple", "cumulative"}));
  plot->add_option("--title", title, "Chart title");

  std::string suite = "all";
  auto* oracle = app.add_subcommand("oracle-check", "Run enumeration oracle suites");
  std::vector<std::string> suites = dppbo::oracle_suite_names();
  suites.push_back("all");
  oracle->add_option("--suite", suite, "Suite name")->check(CLI::IsMember(suites));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return cmd_run(configs, *seed_opt ? std::optional(seed) : std::nullopt,
                     *out_opt ? std::optional(out_dir) : std::nullopt, parallel);
    }
    if (*plot) return cmd_plot(in_dir, plot_out, log_y, metric, title);
    if (*oracle) return dppbo::run_oracle_suite(suite, std::cout) ? 0 : 1;
  } catch (const dppbo::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
