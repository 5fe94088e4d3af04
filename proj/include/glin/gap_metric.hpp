#pragma once

#include "glin/audit.hpp"
#include "glin/linearization.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace glin {

enum class GapShape {
  /// rho(sqrt(|xi|^2 + k^2)) with rho(t) = t / (1 + t).
  bounded_norm,
  /// rho(sqrt(|k^2 - |xi|^2|)): the k slot enters with a flipped sign, so the gap
  /// vanishes on the null cone |xi| = |k|. Violates separation; kept for audits.
  null_cone,
};

std::string to_string(GapShape shape);
GapShape gap_shape_from_string(const std::string& name);

struct GapFn {
  GapShape shape = GapShape::bounded_norm;

  double operator()(const BundleElem& e) const;
};

/// Saturating map t -> t / (1 + t).
inline double saturate(double t) { return t / (1.0 + t); }

enum class WitnessPolicy { grid, random };

/// Finite stand-in for the supremum over X in the induced distance.
struct WitnessSet {
  std::vector<Point> points;
  WitnessPolicy policy = WitnessPolicy::random;

  /// Deterministic lattice: uniform angles on circles, tensor grid on tori, a Fibonacci
  /// lattice on S^2, a uniform box grid for Euclidean spaces. Other spheres fall back to
  /// seeded random points.
  static WitnessSet grid(const Manifold& m, int count);
  static WitnessSet random(const Manifold& m, std::uint64_t seed, int count);
};

/// Distances induced by a linearization and a gap function:
///   d_X(x, y) = max_{z in W u {x, y}} |gap(nu(z, x)) - gap(nu(z, y))|
///   d_E(u, v) = d_X(delta(u - v)) + d_X(delta(v - u))
/// Adding {x, y} to the witnesses makes the z = x term equal gap(nu(x, y)) > 0.
class GapMetric {
public:
  GapMetric(Linearization lin, GapFn gap) : lin_(std::move(lin)), gap_(gap) {}

  const Linearization& linearization() const { return lin_; }
  const GapFn& gap() const { return gap_; }
  const Manifold& manifold() const { return lin_.manifold(); }

  /// OpenMP witness-parallel max.
  double dist_x(const Point& x, const Point& y, const WitnessSet& w) const;
  /// Serial reference kept for testing and benchmarks.
  double dist_x_serial(const Point& x, const Point& y, const WitnessSet& w) const;

  /// Throws FiberMismatch when u and v lie in different fibers.
  double dist_e(const BundleElem& u, const BundleElem& v, const WitnessSet& w) const;

private:
  double witness_term(const Point& z, const Point& x, const Point& y) const;

  Linearization lin_;
  GapFn gap_;
};

/// Checks that d_X is a distance on random triples: the gap's own separation on sampled
/// nu(x, y), separation, exact symmetry and the triangle inequality within 1e-12.
AuditReport metric_audit(const GapMetric& metric, const WitnessSet& w, int triples, std::uint64_t seed);

}  // namespace glin
