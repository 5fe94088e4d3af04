#pragma once

#include "glin/adherence.hpp"
#include "glin/descent.hpp"
#include "glin/gap_metric.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace glin {

struct SelfMap {
  std::function<Point(const Point&)> apply;
  std::string label;
};

SelfMap identity_map();
/// Rotation by `angle`: every torus angle shifted, or the plane (x0, x1) rotated on a sphere.
SelfMap rotation_map(const Manifold& m, double angle);
/// x -> exp_x(factor * log_x(p)). Throws EvaluationError at the cut locus of p.
SelfMap geodesic_contraction(const Manifold& m, Point p, double factor = 0.5);

/// F(x) = gap(nu(x, f(x))), which vanishes exactly at fixed points of f. Below `floor`
/// the differential is reported as zero instead of differencing across the kink at fix(f).
Functional fixed_point_objective(const Linearization& lin, const GapFn& gap, const SelfMap& f, double floor = 1e-8);

struct FixedPointOptions {
  double tol_fp = 1e-8;
  int n_orbit = 5;
  double cluster_radius = 1e-6;
};

struct FixedPointReport {
  bool found = false;
  double final_value = 0.0;
  double residual = 0.0;  // geodesic d(x_last, f(x_last))
  /// Worst value of F(x_n) - d_X(x_n, f(x_n)) over the trace; <= 0 when the bound holds.
  double bound_worst_excess = 0.0;
  double min_value = 0.0;
  bool bound_holds = true;
  std::vector<double> orbit_distances;  // d(f^n(x_last), cluster representative), n = 1..n_orbit
  ClusterReport limits;
  std::string message;
};

struct FixedPointResult {
  DescentTrace<Point> trace;
  FixedPointReport report;
};

FixedPointResult run_fixed_point(const Linearization& lin, const GapFn& gap, const SelfMap& f, const Point& x0,
                                 const DescentConfig& cfg, const WitnessSet& w, const FixedPointOptions& opts = {});

void write_report(std::ostream& os, const FixedPointReport& report);

}  // namespace glin
