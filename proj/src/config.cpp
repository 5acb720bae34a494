#include "dppbo/config.hpp"

#include <fstream>
#include <set>

#include "dppbo/errors.hpp"

namespace dppbo {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

json kernel_to_json(const KernelSpec& k) {
  return json{{"scale", k.scale}, {"output_scale", k.output_scale},
              {"convention", to_string(k.convention)}};
}

KernelSpec kernel_from_json(const json& j, const std::string& where) {
  check_keys(j, {"scale", "output_scale", "convention"}, where);
  KernelSpec k;
  read(j, "scale", k.scale, where);
  read(j, "output_scale", k.output_scale, where);
  std::string conv = to_string(k.convention);
  read(j, "convention", conv, where);
  k.convention = parse_scale_convention(conv);
  return k;
}

}  // namespace

std::string to_string(SurrogateKind kind) { return kind == SurrogateKind::kExact ? "exact" : "feature"; }

SurrogateKind parse_surrogate(const std::string& name) {
  if (name == "exact") return SurrogateKind::kExact;
  if (name == "feature") return SurrogateKind::kFeature;
  throw ConfigError("unknown surrogate '" + name + "'");
}

void ExperimentConfig::validate() {
  if (T < 1 || B < 1 || replications < 1) throw ConfigError("T, B and replications must be >= 1");
  objective.validate();
  model.kernel.validate();
  if (!(model.noise_sigma > 0.0)) throw ConfigError("model noise_sigma must be > 0");
  if (model.features_per_dim < 0) throw ConfigError("features_per_dim must be >= 0");
  strategy.batch_size = B;
  strategy.validate();
  if (output_directory.empty()) throw ConfigError("output_directory must not be empty");
}

std::string ExperimentConfig::effective_label() const {
  return label.empty() ? to_string(strategy.kind) : label;
}

json to_json(const ExperimentConfig& c) {
  json objective{{"kind", to_string(c.objective.kind)},
                 {"dimension", c.objective.dimension},
                 {"noise_sigma", c.objective.noise_sigma},
                 {"kernel", kernel_to_json(c.objective.kernel)}};
  if (!c.objective.bounds.empty()) {
    json b = json::array();
    for (const auto& [lo, hi] : c.objective.bounds) b.push_back({lo, hi});
    objective["bounds"] = b;
  }
  if (!c.objective.resolution.empty()) objective["resolution"] = c.objective.resolution;

  json strategy{{"name", to_string(c.strategy.kind)},
                {"beta_schedule",
                 {{"case", to_string(c.strategy.beta.kind)},
                  {"dimension", c.strategy.beta.dimension},
                  {"a", c.strategy.beta.a},
                  {"b", c.strategy.beta.b}}},
                {"lambda_schedule",
                 {{"mode", to_string(c.strategy.lambda.mode)},
                  {"lambda", c.strategy.lambda.lambda},
                  {"T_init", c.strategy.lambda.t_init}}},
                {"mcmc_steps", c.strategy.mcmc_steps},
                {"mcmc_kind", to_string(c.strategy.sampler)}};
  if (c.strategy.phe_a) strategy["phe_a"] = *c.strategy.phe_a;

  json model{{"kernel", kernel_to_json(c.model.kernel)},
             {"noise_sigma", c.model.noise_sigma},
             {"surrogate", to_string(c.model.surrogate)},
             {"features_per_dim", c.model.features_per_dim}};

  json out{{"objective", objective}, {"strategy", strategy}, {"model", model},
           {"T", c.T}, {"B", c.B}, {"replications", c.replications},
           {"master_seed", c.master_seed}, {"output_directory", c.output_directory}};
  if (!c.label.empty()) out["label"] = c.label;
  return out;
}

ExperimentConfig config_from_json(const json& j) {
  check_keys(j, {"label", "objective", "strategy", "model", "T", "B", "replications", "master_seed",
                 "output_directory"},
             "config");
  ExperimentConfig c;
  read(j, "label", c.label, "config");
  read(j, "T", c.T, "config");
  read(j, "B", c.B, "config");
  read(j, "replications", c.replications, "config");
  read(j, "master_seed", c.master_seed, "config");
  read(j, "output_directory", c.output_directory, "config");

  if (!j.contains("objective")) throw ConfigError("config: missing 'objective'");
  const json& o = j.at("objective");
  check_keys(o, {"kind", "dimension", "bounds", "resolution", "noise_sigma", "kernel"}, "objective");
  std::string kind;
  read(o, "kind", kind, "objective");
  if (kind.empty()) throw ConfigError("objective: missing 'kind'");
  c.objective.kind = parse_objective(kind);
  read(o, "dimension", c.objective.dimension, "objective");
  read(o, "noise_sigma", c.objective.noise_sigma, "objective");
  if (o.contains("bounds")) {
    std::vector<std::vector<double>> raw;
    read(o, "bounds", raw, "objective");
    for (const auto& b : raw) {
      if (b.size() != 2) throw ConfigError("objective.bounds: each entry must be [lo, hi]");
      c.objective.bounds.emplace_back(b[0], b[1]);
    }
  }
  read(o, "resolution", c.objective.resolution, "objective");
  if (o.contains("kernel")) c.objective.kernel = kernel_from_json(o.at("kernel"), "objective.kernel");

  if (!j.contains("strategy")) throw ConfigError("config: missing 'strategy'");
  const json& s = j.at("strategy");
  check_keys(s, {"name", "beta_schedule", "lambda_schedule", "phe_a", "mcmc_steps", "mcmc_kind"},
             "strategy");
  std::string name;
  read(s, "name", name, "strategy");
  if (name.empty()) throw ConfigError("strategy: missing 'name'");
  c.strategy.kind = parse_strategy(name);
  if (s.contains("beta_schedule")) {
    const json& b = s.at("beta_schedule");
    check_keys(b, {"case", "dimension", "a", "b"}, "strategy.beta_schedule");
    std::string bc = to_string(c.strategy.beta.kind);
    read(b, "case", bc, "strategy.beta_schedule");
    c.strategy.beta.kind = parse_beta_case(bc);
    read(b, "dimension", c.strategy.beta.dimension, "strategy.beta_schedule");
    read(b, "a", c.strategy.beta.a, "strategy.beta_schedule");
    read(b, "b", c.strategy.beta.b, "strategy.beta_schedule");
  }
  if (s.contains("lambda_schedule")) {
    const json& l = s.at("lambda_schedule");
    check_keys(l, {"mode", "lambda", "T_init"}, "strategy.lambda_schedule");
    std::string mode = to_string(c.strategy.lambda.mode);
    read(l, "mode", mode, "strategy.lambda_schedule");
    c.strategy.lambda.mode = parse_lambda_mode(mode);
    read(l, "lambda", c.strategy.lambda.lambda, "strategy.lambda_schedule");
    read(l, "T_init", c.strategy.lambda.t_init, "strategy.lambda_schedule");
  }
  if (s.contains("phe_a")) {
    double a = 0.0;
    read(s, "phe_a", a, "strategy");
    c.strategy.phe_a = a;
  }
  read(s, "mcmc_steps", c.strategy.mcmc_steps, "strategy");
  std::string mk = to_string(c.strategy.sampler);
  read(s, "mcmc_kind", mk, "strategy");
  c.strategy.sampler = parse_mcmc_kind(mk);

  if (j.contains("model")) {
    const json& m = j.at("model");
    check_keys(m, {"kernel", "noise_sigma", "surrogate", "features_per_dim"}, "model");
    if (m.contains("kernel")) c.model.kernel = kernel_from_json(m.at("kernel"), "model.kernel");
    read(m, "noise_sigma", c.model.noise_sigma, "model");
    std::string sur = to_string(c.model.surrogate);
    read(m, "surrogate", sur, "model");
    c.model.surrogate = parse_surrogate(sur);
    read(m, "features_per_dim", c.model.features_per_dim, "model");
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << to_json(config).dump(2) << '\n';
}

}  // namespace dppbo
