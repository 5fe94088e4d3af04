#pragma once

#include "glin/descent.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace glin::cli {

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<int> max_iter;
  std::optional<double> tol;
};

/// 0 for ToleranceReached and ExactCriticalPoint, 2 for MaxIterations, 1 otherwise.
int exit_code(StopReason stop);

int cmd_solve(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err);
int cmd_fixed_point(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err);
/// Exit 0 iff the metric audit passes.
int cmd_metric(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err);

struct CheckOptions {
  bool list = false;
  /// Name of a check to run with a known defect planted in it.
  std::string inject_fault;
};

std::vector<std::string> check_names();
/// Exit 0 iff every check passes.
int cmd_check(const CheckOptions& c, const Overrides& o, std::ostream& out, std::ostream& err);

}  // namespace glin::cli
