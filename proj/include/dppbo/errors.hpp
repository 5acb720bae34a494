#ifndef DPPBO_ERRORS_HPP
#define DPPBO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dppbo {

/// Invalid user input: bad identifiers, mismatched dimensions, out-of-range
/// parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical failure (indefinite system, PSD violation beyond tolerance,
/// ill-conditioning). Carries the optimization round when known, -1 otherwise.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, int round = -1)
      : std::runtime_error(what), round_(round) {}

  int round() const noexcept { return round_; }
  void set_round(int round) noexcept { round_ = round; }

 private:
  int round_;
};

}  // namespace dppbo

#endif  // DPPBO_ERRORS_HPP
