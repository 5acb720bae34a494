#include "dppbo/kernel.hpp"

#include <cmath>

#include "dppbo/errors.hpp"

namespace dppbo {

std::string to_string(ScaleConvention c) {
  return c == ScaleConvention::kLengthscale ? "lengthscale" : "squared-lengthscale";
}

ScaleConvention parse_scale_convention(const std::string& name) {
  if (name == "lengthscale") return ScaleConvention::kLengthscale;
  if (name == "squared-lengthscale") return ScaleConvention::kSquaredLengthscale;
  throw ConfigError("unknown kernel scale convention '" + name + "'");
}

double KernelSpec::lengthscale() const {
  return convention == ScaleConvention::kLengthscale ? scale : std::sqrt(scale);
}

void KernelSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("kernel scale must be positive");
  if (!(output_scale >= 0.0) || !std::isfinite(output_scale)) {
    throw ConfigError("kernel output scale must be non-negative");
  }
}

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y) {
  if (x.size() != y.size()) {
    throw ConfigError("kernel_eval: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                      std::to_string(y.size()) + ")");
  }
  const double l = spec.lengthscale();
  return spec.output_scale * std::exp(-(x - y).squaredNorm() / (2.0 * l * l));
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const DomainGrid& grid) {
  spec.validate();
  const int n = grid.size();
  const double l = spec.lengthscale();
  const Eigen::MatrixXd& p = grid.points();
  Eigen::MatrixXd k(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = spec.output_scale;
    for (int j = 0; j < i; ++j) {
      const double v = spec.output_scale * std::exp(-(p.row(i) - p.row(j)).squaredNorm() / (2.0 * l * l));
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

}  // namespace dppbo
