#ifndef DPPBO_CONFIG_HPP
#define DPPBO_CONFIG_HPP

#include <cstdint>
#include <string>

#include "json.hpp"

#include "dppbo/kernel.hpp"
#include "dppbo/objectives.hpp"
#include "dppbo/strategies.hpp"

namespace dppbo {

enum class SurrogateKind { kExact, kFeature };

std::string to_string(SurrogateKind kind);
SurrogateKind parse_surrogate(const std::string& name);

/// The optimizer's internal model. With the feature surrogate the GP prior
/// covariance is the quadrature-feature kernel instead of the exact one.
struct ModelSpec {
  KernelSpec kernel;
  double noise_sigma = 0.01;
  SurrogateKind surrogate = SurrogateKind::kExact;
  /// 0 = automatic (see FeatureModel).
  int features_per_dim = 0;
};

struct ExperimentConfig {
  /// Output file tag; defaults to the strategy name.
  std::string label;
  ObjectiveSpec objective;
  StrategyConfig strategy;
  ModelSpec model;
  int T = 20;
  int B = 5;
  int replications = 15;
  std::uint64_t master_seed = 0;
  std::string output_directory = "out";

  /// Checks every field and copies B into the strategy.
  void validate();
  std::string effective_label() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
/// Strict: unknown keys and unresolvable identifiers throw ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

}  // namespace dppbo

#endif  // DPPBO_CONFIG_HPP
