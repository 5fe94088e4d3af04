#include "glin/descent.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

namespace glin {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ToleranceReached: return "ToleranceReached";
    case StopReason::ExactCriticalPoint: return "ExactCriticalPoint";
    case StopReason::MaxIterations: return "MaxIterations";
    case StopReason::EvaluationFailed: return "EvaluationFailed";
  }
  return "Unknown";
}

void validate(const DescentConfig& cfg) {
  if (!(cfg.eps >= 0.0)) throw ContractViolation("descent eps must be >= 0");
  if (cfg.n_max < 1) throw ContractViolation("descent n_max must be >= 1");
  if (!(cfg.t_half > 0.0)) throw ContractViolation("descent t_half must be > 0");
  if (!(cfg.grad_zero_tol >= 0.0)) throw ContractViolation("grad_zero_tol must be >= 0");
  validate(cfg.method);
}

CotangentVec finite_difference_differential(const Manifold& m, const std::function<double(const Point&)>& f,
                                            const Point& x, double h) {
  const Eigen::MatrixXd frame = m.tangent_frame(x);
  const double f0 = f(x);
  if (!std::isfinite(f0)) throw EvaluationError("objective is not finite at the current point");
  Vec g = Vec::Zero(m.ambient_dim());
  for (int i = 0; i < frame.cols(); ++i) {
    const Vec e = frame.col(i);
    const double fp = f(m.exp(x, Vec(h * e)));
    const double fm = f(m.exp(x, Vec(-h * e)));
    if (!std::isfinite(fp) || !std::isfinite(fm)) throw EvaluationError("objective is not finite near the current point");
    const double diff = fp - fm;
    const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(f0), std::abs(fp), std::abs(fm)});
    if (std::abs(diff) <= floor) continue;
    g += (diff / (2.0 * h)) * e;
  }
  return m.flat(TangentVec{x, std::move(g)});
}

CotangentVec differential(const Manifold& m, const Functional& f, const Point& x) {
  if (f.differential) return f.differential(x);
  return finite_difference_differential(m, f.eval, x, f.fd_step);
}

double ManifoldSpace::value(const Point& x) const {
  const double v = f_.eval(x);
  if (!std::isfinite(v)) throw EvaluationError("objective is not finite");
  return v;
}

double ManifoldSpace::displacement(const Point& x, const Point& y) const {
  if (displacement_ == DisplacementKind::geodesic || metric_ == nullptr) return lin_.manifold().distance(x, y);
  return metric_->dist_x(x, y, *witnesses_);
}

ScalarPath path_at(const Linearization& lin, const Functional& f, const Point& x, double t_half) {
  CotangentVec g = differential(lin.manifold(), f, x);
  return {[lin, eval = f.eval, g = std::move(g)](double t) { return eval(lin.endpoint(g, t)); }, -t_half, t_half};
}

DescentTrace<Point> run_descent(const Linearization& lin, const GapFn& gap, const Functional& f, const Point& x0,
                                const DescentConfig& cfg, const WitnessSet& w) {
  const GapMetric metric(lin, gap);
  const ManifoldSpace space(lin, f, &metric, &w, cfg.displacement);
  return run_descent_loop(space, x0, cfg);
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& os, const DescentTrace<Point>& trace) {
  const long dim = trace.iterates.empty() ? 0 : trace.iterates.front().coords.size();
  os << "# glin-trace v1\n";
  os << "iter,t_n,d_n,F";
  for (long i = 0; i < dim; ++i) os << ",x" << i;
  os << "\n";
  for (std::size_t n = 0; n < trace.size(); ++n) {
    os << n << ',' << format_double(trace.steps[n]) << ',' << format_double(trace.displacements[n]) << ','
       << format_double(trace.values[n]);
    for (long i = 0; i < dim; ++i) os << ',' << format_double(trace.iterates[n].coords[i]);
    os << "\n";
  }
  os << "# stop=" << to_string(trace.stop) << "\n";
}

}  // namespace glin
