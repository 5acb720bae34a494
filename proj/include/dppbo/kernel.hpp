#ifndef DPPBO_KERNEL_HPP
#define DPPBO_KERNEL_HPP

#include <string>

#include <Eigen/Core>

#include "dppbo/grid.hpp"

namespace dppbo {

/// How KernelSpec::scale is read: as the lengthscale itself, or as its
/// square (k = exp(-r^2 / (2 * scale))).
enum class ScaleConvention { kLengthscale, kSquaredLengthscale };

std::string to_string(ScaleConvention c);
ScaleConvention parse_scale_convention(const std::string& name);

/// Squared-exponential kernel
///   k(x, x') = output_scale * exp(-|x - x'|^2 / (2 l^2)).
struct KernelSpec {
  double scale = 1.0;
  double output_scale = 1.0;
  ScaleConvention convention = ScaleConvention::kLengthscale;

  double lengthscale() const;
  void validate() const;
};

double kernel_eval(const KernelSpec& spec, const Eigen::Ref<const Eigen::VectorXd>& x,
                   const Eigen::Ref<const Eigen::VectorXd>& y);

/// Prior covariance over every pair of grid points.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const DomainGrid& grid);

}  // namespace dppbo

#endif  // DPPBO_KERNEL_HPP
