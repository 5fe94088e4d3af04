#pragma once

#include "glin/audit.hpp"
#include "glin/manifold.hpp"

#include <cstdint>
#include <functional>
#include <utility>

namespace glin {

/// Element of E = T*X x R over `base`: a covector plus a scalar slot carrying length.
struct BundleElem {
  Point base;
  CotangentVec xi;
  double k = 0.0;

  static BundleElem zero(const Point& x) { return {x, {x, Vec::Zero(x.coords.size())}, 0.0}; }
  bool is_zero() const { return k == 0.0 && xi.covec.isZero(0.0); }
};

/// Fiberwise difference u - v. Throws FiberMismatch when the bases differ.
BundleElem fiber_difference(const BundleElem& u, const BundleElem& v);
/// t * e within the fiber.
BundleElem fiber_scale(const BundleElem& e, double t);

/// Smooth nonincreasing cutoff: 1 on [0, inner], 0 on [outer, inf), C-infinity between.
class SmoothCutoff {
public:
  SmoothCutoff(double inner, double outer);
  double operator()(double d) const;
  double inner() const { return inner_; }
  double outer() const { return outer_; }

private:
  double inner_;
  double outer_;
};

/// The pair (nu, delta) with E = T*X x R, built from exp/log and the distance.
///
/// nu(x, y) = (flat(chi(d) log_x y), d(x, y)), where chi switches the cotangent slot off
/// before the cut locus while the scalar slot keeps nu(x, y) != 0 for x != y.
///
/// delta(xi, k) = (x, exp_x(r v / sqrt(1 + |(1 + k) v|^2))) with v = sharp(xi), so the
/// geodesic argument always stays strictly inside the injectivity radius.
class Linearization {
public:
  explicit Linearization(Manifold manifold, double cutoff_fraction = 0.9, double transition_width = 0.1);

  const Manifold& manifold() const { return manifold_; }
  double r() const { return manifold_.r(); }
  double cutoff_fraction() const { return cutoff_fraction_; }
  const SmoothCutoff& cutoff() const { return cutoff_; }

  BundleElem nu(const Point& x, const Point& y) const;
  std::pair<Point, Point> delta(const BundleElem& e) const;
  /// Second component of delta((x, t * xi, 0)); exactly x when t * xi vanishes.
  Point endpoint(const CotangentVec& xi, double t) const;
  /// k(xi, y) = <nu(pi(xi), y), xi>.
  double pairing_k(const CotangentVec& xi, const Point& y) const;

  /// Norm of the exp argument used by delta; always < r.
  double delta_argument_norm(const BundleElem& e) const;

private:
  Manifold manifold_;
  double cutoff_fraction_;
  SmoothCutoff cutoff_;
};

using NuFn = std::function<BundleElem(const Point&, const Point&)>;
using DeltaFn = std::function<std::pair<Point, Point>(const BundleElem&)>;

/// Numerical audit of the linearization axioms on random samples.
///
/// Items: zero section <-> diagonal and base commutation for delta, base commutation
/// for nu, nu(x, y) = 0 <=> x = y (including cut-locus pairs), nonvanishing d_y nu(x, .)
/// at y = x, the derivative identity D_0((1/r) nu o delta) = Id on the k = 0 slice, and
/// full rank of the differential of (delta o nu)(x, .) inside the chi = 1 region.
AuditReport check_linearization(const Linearization& lin, int samples, std::uint64_t seed);
/// Same audit with replacement maps, used to show that broken constructions are caught.
AuditReport check_linearization(const Linearization& lin, const NuFn& nu, const DeltaFn& delta, int samples,
                                std::uint64_t seed);

}  // namespace glin
