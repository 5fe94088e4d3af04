#pragma once

#include "glin/audit.hpp"
#include "glin/descent.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace glin {

struct Cluster {
  Vec representative;
  std::vector<std::size_t> members;  // iterate indices
  double f_min = 0.0;
  double f_max = 0.0;
  double spread() const { return f_max - f_min; }
};

/// Tail clusters of a trace, standing in for the limit-point set of the iterates.
struct ClusterReport {
  std::vector<Cluster> clusters;
  double f_constancy_tol = 1e-6;
  double f_start = 0.0;
  double worst_spread = 0.0;
  std::string witness;  // pair of members with the worst spread, when failing

  bool constant_on_clusters() const { return worst_spread <= f_constancy_tol; }
  /// Every cluster value is finite and at most F(x_0).
  bool bounded_by_start() const;
  bool passed() const { return constant_on_clusters() && bounded_by_start(); }
};

/// Single-linkage clustering of the last 25% of the iterates at `radius`, over the
/// given coordinates (one column per iterate).
ClusterReport cluster_limits(const std::vector<Vec>& coords, const std::vector<double>& values, double radius,
                             double f_constancy_tol = 1e-6);
/// Clusters in the manifold's isometric embedding so that tori do not split at 0 = 2 pi.
ClusterReport cluster_limits(const Manifold& m, const DescentTrace<Point>& trace, double radius,
                             double f_constancy_tol = 1e-6);
/// Clusters raw ambient coordinates.
ClusterReport cluster_limits(const DescentTrace<Point>& trace, double radius, double f_constancy_tol = 1e-6);

void write_report(std::ostream& os, const ClusterReport& report);

/// Smooth parametrization P: C -> X on the box [lo, hi] of R^k.
struct ConvexProbe {
  std::function<Point(const Vec&)> param;
  Vec lo;
  Vec hi;
  int samples = 200;
  std::uint64_t seed = 1;
};

enum class Convexity { strictly_convex, convex, non_convex };
std::string to_string(Convexity c);

struct ConvexityReport {
  Convexity verdict = Convexity::non_convex;
  AuditReport audit;
};

/// Checks F(P(l c + (1 - l) d)) <= l F(P(c)) + (1 - l) F(P(d)) within 1e-10 for random
/// pairs and l in {0.25, 0.5, 0.75}; strict when every midpoint margin exceeds 1e-12.
/// With a strictly convex verdict and `limits` given, also requires a single cluster.
ConvexityReport convexity_audit(const ConvexProbe& probe, const std::function<double(const Point&)>& f,
                                const Manifold& m, const ClusterReport* limits = nullptr);

}  // namespace glin
