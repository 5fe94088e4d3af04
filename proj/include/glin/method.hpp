#pragma once

#include "glin/audit.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

namespace glin {

/// A scalar function on the compact interval [a, b].
struct ScalarPath {
  std::function<double(double)> eval;
  double a = -1.0;
  double b = 1.0;
};

/// Nested uniform grids, each zooming to +-1 spacing around the incumbent.
struct GridRefine {
  int levels = 6;
  int points_per_level = 33;
};

/// Golden-section reduction of the whole interval, compared against the incumbent.
struct GoldenSection {
  int max_iterations = 100;
};

/// Backtracking from the far end of the interval along the downhill slope.
struct ArmijoBacktrack {
  double c = 1e-4;
  double shrink = 0.5;
  int max_backtracks = 60;
};

using MethodKind = std::variant<GridRefine, GoldenSection, ArmijoBacktrack>;

std::string describe(const MethodKind& m);
/// Throws ContractViolation on non-positive counts or c, shrink outside (0, 1).
void validate(const MethodKind& m);

/// Improvement operator on a path: returns x' in [a, b] with f(x') <= f(x), and x' == x
/// exactly when no candidate was strictly better. The incumbent wins all ties.
///
/// Throws ContractViolation if x lies outside [a, b] and EvaluationError on non-finite
/// values of f.
double apply_method(const MethodKind& m, const ScalarPath& f, double x);

using MethodFn = std::function<double(const ScalarPath&, double)>;

/// Checks f(M_f(x)) <= f(x) and f(M_f(x)) = f(x) <=> M_f(x) = x on random polynomials
/// (degree <= 6) and trigonometric sums over random intervals, `starts` points each.
AuditReport method_contract_audit(const MethodKind& m, int corpus, std::uint64_t seed, int starts = 10);
AuditReport method_contract_audit(const MethodFn& method, const std::string& label, int corpus,
                                  std::uint64_t seed, int starts = 10);

/// Random path family used by the contract audit: even ids are polynomials, odd ids
/// trigonometric sums.
ScalarPath random_test_path(std::uint64_t seed, int id);

}  // namespace glin
