#pragma once

#include "glin/errors.hpp"
#include "glin/gap_metric.hpp"
#include "glin/linearization.hpp"
#include "glin/method.hpp"

#include <cmath>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace glin {

/// Smooth objective on a manifold. `differential` may be left empty, in which case
/// central differences along an orthonormal tangent frame are used.
struct Functional {
  std::function<double(const Point&)> eval;
  std::function<CotangentVec(const Point&)> differential;
  double fd_step = 1e-6;
};

/// Central differences of f along the tangent frame at x, mapped through flat.
/// Differences within a few ulps of the sampled values are treated as exact zeros,
/// so a numerically constant objective has a vanishing differential.
CotangentVec finite_difference_differential(const Manifold& m, const std::function<double(const Point&)>& f,
                                            const Point& x, double h);
CotangentVec differential(const Manifold& m, const Functional& f, const Point& x);

enum class StopReason { ToleranceReached, ExactCriticalPoint, MaxIterations, EvaluationFailed };
std::string to_string(StopReason reason);

enum class DisplacementKind { gap_metric, geodesic };

struct DescentConfig {
  double eps = 1e-10;
  int n_max = 200;
  /// Half-width of the path interval [-t_half, t_half].
  double t_half = 1.0;
  MethodKind method = GridRefine{};
  double grad_zero_tol = 1e-12;
  DisplacementKind displacement = DisplacementKind::gap_metric;
};

void validate(const DescentConfig& cfg);

template <class P>
struct DescentTrace {
  std::vector<P> iterates;
  std::vector<double> values;
  /// Path parameter that produced each iterate (0 for the start).
  std::vector<double> steps;
  /// Displacement from the previous iterate (NaN for the start).
  std::vector<double> displacements;
  /// Norm of the differential at each iterate where it was evaluated (NaN otherwise).
  std::vector<double> grad_norms;
  StopReason stop = StopReason::MaxIterations;
  std::string error;

  std::size_t size() const { return iterates.size(); }
  const P& last() const { return iterates.back(); }

  void push(P x, double value, double step, double displacement) {
    iterates.push_back(std::move(x));
    values.push_back(value);
    steps.push_back(step);
    displacements.push_back(displacement);
    grad_norms.push_back(std::numeric_limits<double>::quiet_NaN());
  }
};

/// The linearization-path descent loop, generic over the space.
///
/// `Space` provides value(x), differential(x) -> Cov, norm(Cov), endpoint(Cov, x, t)
/// (second component of delta(t * cov)) and displacement(x, y).
template <class Space>
auto run_descent_loop(const Space& space, const typename Space::PointType& x0, const DescentConfig& cfg)
    -> DescentTrace<typename Space::PointType> {
  using P = typename Space::PointType;
  validate(cfg);
  DescentTrace<P> trace;
  P x = x0;
  try {
    trace.push(x, space.value(x), 0.0, std::numeric_limits<double>::quiet_NaN());
    double d = 1.0 + cfg.eps;
    int stalled = 0;
    for (int n = 1; n <= cfg.n_max; ++n) {
      if (d < cfg.eps || stalled >= 2) {
        trace.stop = StopReason::ToleranceReached;
        return trace;
      }
      const auto g = space.differential(x);
      const double gn = space.norm(g);
      trace.grad_norms.back() = gn;
      if (gn <= cfg.grad_zero_tol) {
        trace.stop = StopReason::ExactCriticalPoint;
        return trace;
      }
      const ScalarPath path{[&](double t) { return space.value(space.endpoint(g, x, t)); }, -cfg.t_half,
                            cfg.t_half};
      const double t_star = apply_method(cfg.method, path, 0.0);
      P next = t_star == 0.0 ? x : space.endpoint(g, x, t_star);
      const double f_next = space.value(next);
      d = space.displacement(x, next);
      // With eps = 0 the tolerance test can never fire; repeated null steps end the run.
      if (cfg.eps == 0.0) stalled = t_star == 0.0 ? stalled + 1 : 0;
      x = std::move(next);
      trace.push(x, f_next, t_star, d);
    }
    trace.stop = StopReason::MaxIterations;
  } catch (const EvaluationError& e) {
    trace.stop = StopReason::EvaluationFailed;
    trace.error = e.what();
  }
  return trace;
}

/// Descent on a built-in manifold with the linearization path t -> delta(t d_xF).
class ManifoldSpace {
public:
  using PointType = Point;

  ManifoldSpace(const Linearization& lin, const Functional& f, const GapMetric* metric, const WitnessSet* witnesses,
                DisplacementKind displacement)
      : lin_(lin), f_(f), metric_(metric), witnesses_(witnesses), displacement_(displacement) {}

  double value(const Point& x) const;
  CotangentVec differential(const Point& x) const { return glin::differential(lin_.manifold(), f_, x); }
  double norm(const CotangentVec& g) const { return lin_.manifold().norm(g.covec); }
  Point endpoint(const CotangentVec& g, const Point&, double t) const { return lin_.endpoint(g, t); }
  double displacement(const Point& x, const Point& y) const;

private:
  const Linearization& lin_;
  const Functional& f_;
  const GapMetric* metric_;
  const WitnessSet* witnesses_;
  DisplacementKind displacement_;
};

/// t -> F(delta((x, t d_xF, 0)).1) on [-t_half, t_half].
ScalarPath path_at(const Linearization& lin, const Functional& f, const Point& x, double t_half = 1.0);

/// Runs the descent with the gap-metric displacement d_X(x_n, x_{n+1}) over `w`
/// (or the geodesic distance when cfg.displacement says so).
DescentTrace<Point> run_descent(const Linearization& lin, const GapFn& gap, const Functional& f, const Point& x0,
                                const DescentConfig& cfg, const WitnessSet& w);

/// Versioned CSV: a "# glin-trace v1" line, header iter,t_n,d_n,F,x0..x{d-1}, one row
/// per iterate, and a "# stop=<reason>" footer. Values use %.17g, so equal traces
/// serialize to identical bytes.
void write_trace_csv(std::ostream& os, const DescentTrace<Point>& trace);

std::string format_double(double v);

}  // namespace glin
