#ifndef DPPBO_ORACLE_SUITES_HPP
#define DPPBO_ORACLE_SUITES_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace dppbo {

/// enumeration, detailed-balance, reweighting, info-gain.
const std::vector<std::string>& oracle_suite_names();

/// Runs one suite (or "all"), printing a PASS/FAIL line per check.
/// Returns true when every check passes. Throws ConfigError on an unknown name.
bool run_oracle_suite(const std::string& name, std::ostream& out);

}  // namespace dppbo

#endif  // DPPBO_ORACLE_SUITES_HPP
