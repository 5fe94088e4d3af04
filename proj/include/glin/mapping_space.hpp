#pragma once

#include "glin/descent.hpp"
#include "glin/gap_metric.hpp"
#include "glin/linearization.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

namespace glin {

/// A loop u: S^1 -> N sampled at t_j = 2 pi j / m, j = 0..m-1.
class DiscreteMap {
public:
  /// Requires m >= 4, m even, and every value on the target manifold.
  DiscreteMap(Manifold target, std::vector<Point> values);

  /// Samples `fn(t_j)` and projects each value onto the target.
  static DiscreteMap sample(const Manifold& target, int m, const std::function<Vec(double)>& fn);

  const Manifold& target() const { return target_; }
  int size() const { return static_cast<int>(values_.size()); }
  const std::vector<Point>& values() const { return values_; }
  const Point& operator[](int j) const { return values_[j]; }
  double grid_point(int j) const;
  double spacing() const;
  int ambient_dim() const { return target_.embed_dim(); }

  /// Isometric-embedding samples, one column per node.
  Eigen::MatrixXd embedded() const;

private:
  Manifold target_;
  std::vector<Point> values_;
};

/// A cotangent section along a map: one covector per node.
struct LiftedCovector {
  std::vector<CotangentVec> nodes;
};

/// Section of u*(T*N) x R over a base map.
struct LiftedBundleElem {
  DiscreteMap base;
  std::vector<BundleElem> sections;
};

/// Pointwise nu(f(t_j), g(t_j)). Throws ShapeError on grid or target mismatch.
LiftedBundleElem lifted_nu(const Linearization& lin, const DiscreteMap& f, const DiscreteMap& g);
/// Pointwise delta. The first component is the base map.
std::pair<DiscreteMap, DiscreteMap> lifted_delta(const Linearization& lin, const LiftedBundleElem& e);

namespace serial {
LiftedBundleElem lifted_nu(const Linearization& lin, const DiscreteMap& f, const DiscreteMap& g);
std::pair<DiscreteMap, DiscreteMap> lifted_delta(const Linearization& lin, const LiftedBundleElem& e);
}  // namespace serial

/// Discrete W^{s,2} norm of ambient samples (rows = components, columns = nodes):
///   |u|^2 = sum_{k=-m/2+1}^{m/2} (1 + k^2)^s |u_k|^2
/// with unitary DFT coefficients u_k, so s = 0 is the sample l2 norm.
double sobolev_norm(const Eigen::MatrixXd& samples, double s);
double sobolev_norm(const DiscreteMap& u, double s);
/// Norm of the ambient difference u - v.
double sobolev_distance(const DiscreteMap& u, const DiscreteMap& v, double s);

struct SpectrumRow {
  int k;
  double multiplier;  // (1 + k^2)^(s/2)
  double coefficient_norm;
};
std::vector<SpectrumRow> sobolev_spectrum(const Eigen::MatrixXd& samples, double s);
void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows);

/// Forward-difference energy (1/2) sum_j |u_{j+1} - u_j|^2 / h, h = 2 pi / m, periodic.
double dirichlet_energy(const DiscreteMap& u);
/// Closed-form differential: (2 u_j - u_{j+1} - u_{j-1}) / h pulled back to T*_{u_j} N.
LiftedCovector dirichlet_differential(const DiscreteMap& u);
namespace serial {
double dirichlet_energy(const DiscreteMap& u);
LiftedCovector dirichlet_differential(const DiscreteMap& u);
}  // namespace serial

/// Objective on loops. Without a closed-form differential, central differences are taken
/// node by node along each tangent direction.
struct MapFunctional {
  std::function<double(const DiscreteMap&)> eval;
  std::function<LiftedCovector(const DiscreteMap&)> differential;
  double fd_step = 1e-6;
};

MapFunctional dirichlet_functional();
/// (1/2) |u - target|_{W^{s,2}}^2 with ambient subtraction.
MapFunctional sobolev_tracking_functional(DiscreteMap target, double s);

LiftedCovector finite_difference_differential(const MapFunctional& f, const DiscreteMap& u);

/// Loop-space descent: per-node linearization paths, displacement measured by the
/// saturated discrete L2 norm of the lifted nu (the gap metric with witnesses {x, y}),
/// or by the discrete L2 geodesic distance.
class MappingSpace {
public:
  using PointType = DiscreteMap;

  MappingSpace(const Linearization& lin, const MapFunctional& f, DisplacementKind displacement)
      : lin_(lin), f_(f), displacement_(displacement) {}

  double value(const DiscreteMap& u) const;
  LiftedCovector differential(const DiscreteMap& u) const;
  double norm(const LiftedCovector& g) const;
  DiscreteMap endpoint(const LiftedCovector& g, const DiscreteMap& u, double t) const;
  double displacement(const DiscreteMap& u, const DiscreteMap& v) const;

private:
  const Linearization& lin_;
  const MapFunctional& f_;
  DisplacementKind displacement_;
};

/// Saturated discrete L2 size of a lifted bundle element: rho(sqrt(sum_j h (|xi_j|^2 + k_j^2))).
double lifted_gap(const LiftedBundleElem& e);

/// Degree of a loop in a circle target (S^1 as sphere or torus of dimension 1).
int winding_number(const DiscreteMap& u);
bool is_circle_target(const Manifold& m);

struct MappingTrace {
  DescentTrace<DiscreteMap> trace;
  std::vector<double> s_values;
  /// sobolev[n][i] = |u_n - u_last|_{W^{s_i,2}}.
  std::vector<std::vector<double>> sobolev;
  /// Winding number per iterate (circle targets only).
  std::vector<int> winding;
  /// Largest per-node geodesic step of each iterate from its predecessor.
  std::vector<double> max_node_step;

  bool winding_constant() const;
};

MappingTrace run_mapping_descent(const Linearization& lin, const MapFunctional& f, const DiscreteMap& u0,
                                 const DescentConfig& cfg, const std::vector<double>& s_values = {-1.0, 0.0});

/// One row per node: t_j then the ambient coordinates of u(t_j), after a version line.
void write_map_csv(std::ostream& os, const DiscreteMap& u);
/// Versioned CSV: iter,t_n,d_n,F,winding,max_node_step,sobolev_s... plus a stop footer.
void write_mapping_trace_csv(std::ostream& os, const MappingTrace& t);

}  // namespace glin
