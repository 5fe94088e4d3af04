#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace glin {

using Vec = Eigen::VectorXd;

/// A point stored in ambient coordinates (unit vector for spheres, angle tuple for tori).
struct Point {
  Vec coords;
};

struct TangentVec {
  Point base;
  Vec vec;
};

/// Covector at `base`, carried through the metric as an ambient tangent vector.
struct CotangentVec {
  Point base;
  Vec covec;
};

enum class ManifoldKind { euclidean, sphere, torus };

std::string to_string(ManifoldKind kind);
ManifoldKind manifold_kind_from_string(const std::string& name);

/// Built-in Riemannian manifold: Euclidean R^n, unit sphere S^{n-1} in R^n, or flat
/// torus T^n with circumference 2*pi per coordinate.
///
/// Every operation is a pure function of its arguments. Points returned by `exp`
/// and `random_point` are projected back onto the constraint set.
class Manifold {
public:
  /// `dim` is the intrinsic dimension. `euclidean_radius` is the finite length scale
  /// used as the Euclidean "injectivity radius"; it is ignored for compact kinds.
  Manifold(ManifoldKind kind, int dim, double euclidean_radius = 1.0);

  static Manifold euclidean(int dim, double r = 1.0) { return {ManifoldKind::euclidean, dim, r}; }
  static Manifold sphere(int dim) { return {ManifoldKind::sphere, dim}; }
  static Manifold torus(int dim) { return {ManifoldKind::torus, dim}; }

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int ambient_dim() const { return ambient_dim_; }
  /// Injectivity radius (pi for sphere and torus).
  double r() const { return r_; }
  /// Dimension of the isometric embedding used for loop energies and Sobolev norms.
  int embed_dim() const;

  Point point(Vec coords) const;  // validates and projects
  bool contains(const Point& x, double tol = 1e-12) const;

  Point exp(const Point& x, const TangentVec& v) const;
  Point exp(const Point& x, const Vec& v) const;
  /// Throws CutLocusError when d(x, y) >= r on compact kinds.
  TangentVec log(const Point& x, const Point& y) const;
  double distance(const Point& x, const Point& y) const;

  CotangentVec flat(const TangentVec& v) const { return {v.base, v.vec}; }
  TangentVec sharp(const CotangentVec& xi) const { return {xi.base, xi.covec}; }

  /// Riemannian inner product at a point (ambient dot product for all built-ins).
  double inner(const Vec& a, const Vec& b) const { return a.dot(b); }
  double norm(const Vec& a) const { return a.norm(); }

  Vec project_tangent(const Point& x, const Vec& ambient) const;
  /// Orthonormal basis of T_x M, one ambient vector per column.
  Eigen::MatrixXd tangent_frame(const Point& x) const;

  /// Isometric embedding into R^embed_dim (identity except for the torus, which
  /// maps each angle to (cos, sin)).
  Vec embed(const Point& x) const;
  /// Pulls an ambient gradient in embedding coordinates back to a covector at x.
  CotangentVec pullback_gradient(const Point& x, const Vec& embedded_grad) const;

  Point random_point(std::uint64_t seed) const;
  TangentVec random_tangent(const Point& x, std::uint64_t seed, double scale = 1.0) const;

  bool operator==(const Manifold& other) const {
    return kind_ == other.kind_ && dim_ == other.dim_ && r_ == other.r_;
  }

private:
  ManifoldKind kind_;
  int dim_;
  int ambient_dim_;
  double r_;
};

/// Signed angle difference b - a reduced to (-pi, pi].
double wrap_angle_difference(double a, double b);
/// Reduces an angle to [0, 2*pi).
double wrap_angle(double a);

}  // namespace glin
