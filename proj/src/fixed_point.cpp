#include "glin/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace glin {

SelfMap identity_map() { return {[](const Point& x) { return x; }, "identity"}; }

SelfMap rotation_map(const Manifold& m, double angle) {
  std::ostringstream label;
  label << "rotation(" << angle << ")";
  if (m.kind() == ManifoldKind::torus) {
    return {[angle](const Point& x) {
              Vec y = x.coords;
              for (auto& c : y) c = wrap_angle(c + angle);
              return Point{std::move(y)};
            },
            label.str()};
  }
  if (m.ambient_dim() < 2) throw ContractViolation("rotation needs at least two ambient coordinates");
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {[m, c, s](const Point& x) {
            Vec y = x.coords;
            y[0] = c * x.coords[0] - s * x.coords[1];
            y[1] = s * x.coords[0] + c * x.coords[1];
            return m.point(std::move(y));
          },
          label.str()};
}

SelfMap geodesic_contraction(const Manifold& m, Point p, double factor) {
  std::ostringstream label;
  label << "contraction(" << factor << ")";
  return {[m, p = std::move(p), factor](const Point& x) {
            try {
              return m.exp(x, Vec(factor * m.log(x, p).vec));
            } catch (const CutLocusError& e) {
              throw EvaluationError(std::string("contraction undefined: ") + e.what());
            }
          },
          label.str()};
}

Functional fixed_point_objective(const Linearization& lin, const GapFn& gap, const SelfMap& f, double floor) {
  Functional out;
  out.eval = [&lin, gap, f](const Point& x) { return gap(lin.nu(x, f.apply(x))); };
  out.differential = [&lin, gap, f, floor, eval = out.eval](const Point& x) {
    const Manifold& m = lin.manifold();
    if (eval(x) < floor) return m.flat(TangentVec{x, Vec::Zero(m.ambient_dim())});
    return finite_difference_differential(m, eval, x, 1e-6);
  };
  return out;
}

FixedPointResult run_fixed_point(const Linearization& lin, const GapFn& gap, const SelfMap& f, const Point& x0,
                                 const DescentConfig& cfg, const WitnessSet& w, const FixedPointOptions& opts) {
  const Functional objective = fixed_point_objective(lin, gap, f, opts.tol_fp);
  FixedPointResult out;
  out.trace = run_descent(lin, gap, objective, x0, cfg, w);

  FixedPointReport& rep = out.report;
  const GapMetric metric(lin, gap);
  rep.min_value = out.trace.values.front();
  rep.bound_worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < out.trace.size(); ++n) {
    const Point& x = out.trace.iterates[n];
    const double value = out.trace.values[n];
    const double bound = metric.dist_x(x, f.apply(x), w);
    rep.min_value = std::min(rep.min_value, value);
    rep.bound_worst_excess = std::max(rep.bound_worst_excess, value - bound);
    if (!(value >= 0.0 && value <= bound)) rep.bound_holds = false;
  }

  const Point& last = out.trace.last();
  const Point image = f.apply(last);
  rep.final_value = out.trace.values.back();
  rep.residual = lin.manifold().distance(last, image);
  rep.found = rep.final_value < opts.tol_fp;
  rep.limits = cluster_limits(lin.manifold(), out.trace, opts.cluster_radius);

  const Vec target = rep.limits.clusters.front().representative;
  Point orbit = last;
  for (int n = 1; n <= opts.n_orbit; ++n) {
    orbit = f.apply(orbit);
    rep.orbit_distances.push_back((lin.manifold().embed(orbit) - target).norm());
  }

  std::ostringstream msg;
  if (rep.found) {
    msg << "fixed point found; F = " << format_double(rep.final_value);
  } else if (out.trace.stop == StopReason::ExactCriticalPoint) {
    msg << "no descent direction; F = " << format_double(rep.final_value) << " > 0: no fixed point found";
  } else {
    msg << "F = " << format_double(rep.final_value) << " > 0 after " << out.trace.size() - 1
        << " iterations: no fixed point found";
  }
  rep.message = msg.str();
  return out;
}

void write_report(std::ostream& os, const FixedPointReport& r) {
  os << "fixed_point_found: " << (r.found ? "yes" : "no") << "\n";
  os << "message: " << r.message << "\n";
  os << "final_F: " << format_double(r.final_value) << "\n";
  os << "residual_distance: " << format_double(r.residual) << "\n";
  os << "bound_0_le_F_le_dX: " << (r.bound_holds ? "PASS" : "FAIL") << "\n";
  os << "bound_worst_excess: " << format_double(r.bound_worst_excess) << "\n";
  os << "orbit_distances:";
  for (double d : r.orbit_distances) os << ' ' << format_double(d);
  os << "\n";
  write_report(os, r.limits);
}

}  // namespace glin
