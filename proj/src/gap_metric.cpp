#include "glin/gap_metric.hpp"

#include "glin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace glin {

std::string to_string(GapShape shape) {
  switch (shape) {
    case GapShape::bounded_norm: return "bounded_norm";
    case GapShape::null_cone: return "null_cone";
  }
  return "unknown";
}

GapShape gap_shape_from_string(const std::string& name) {
  if (name == "bounded_norm") return GapShape::bounded_norm;
  if (name == "null_cone") return GapShape::null_cone;
  throw ContractViolation("unknown gap shape '" + name + "'");
}

double GapFn::operator()(const BundleElem& e) const {
  const double xi2 = e.xi.covec.squaredNorm();
  const double k2 = e.k * e.k;
  switch (shape) {
    case GapShape::bounded_norm: return saturate(std::sqrt(xi2 + k2));
    case GapShape::null_cone: return saturate(std::sqrt(std::abs(k2 - xi2)));
  }
  return 0.0;
}

WitnessSet WitnessSet::grid(const Manifold& m, int count) {
  if (count < 1) throw ContractViolation("witness set must be nonempty");
  WitnessSet w;
  w.policy = WitnessPolicy::grid;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const bool circle = (m.kind() == ManifoldKind::torus && m.dim() == 1) ||
                      (m.kind() == ManifoldKind::sphere && m.dim() == 1);
  if (circle) {
    for (int j = 0; j < count; ++j) {
      const double t = two_pi * j / count;
      w.points.push_back(m.kind() == ManifoldKind::torus ? m.point(Vec::Constant(1, t))
                                                         : m.point(Vec{{std::cos(t), std::sin(t)}}));
    }
    return w;
  }
  if (m.kind() == ManifoldKind::sphere && m.dim() == 2) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int j = 0; j < count; ++j) {
      const double z = 1.0 - (2.0 * j + 1.0) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * j;
      w.points.push_back(m.point(Vec{{rho * std::cos(phi), rho * std::sin(phi), z}}));
    }
    return w;
  }
  if (m.kind() == ManifoldKind::sphere) {
    WitnessSet r = random(m, 0x5eed, count);
    r.policy = WitnessPolicy::grid;
    return r;
  }
  // Tensor grid with per-axis resolution ceil(count^(1/dim)), truncated to count points.
  const int per_axis = std::max(1, static_cast<int>(std::ceil(std::pow(count, 1.0 / m.dim()) - 1e-9)));
  const double lo = m.kind() == ManifoldKind::torus ? 0.0 : -1.0;
  const double span = m.kind() == ManifoldKind::torus ? two_pi : 2.0;
  const double step = m.kind() == ManifoldKind::torus ? span / per_axis : span / std::max(1, per_axis - 1);
  std::vector<int> idx(m.dim(), 0);
  for (int n = 0; n < count; ++n) {
    Vec c(m.ambient_dim());
    for (int i = 0; i < m.dim(); ++i) c[i] = lo + step * idx[i];
    w.points.push_back(m.point(std::move(c)));
    for (int i = 0; i < m.dim(); ++i) {
      if (++idx[i] < per_axis) break;
      idx[i] = 0;
    }
  }
  return w;
}

WitnessSet WitnessSet::random(const Manifold& m, std::uint64_t seed, int count) {
  if (count < 1) throw ContractViolation("witness set must be nonempty");
  WitnessSet w;
  w.policy = WitnessPolicy::random;
  std::mt19937_64 rng(seed);
  w.points.reserve(count);
  for (int j = 0; j < count; ++j) w.points.push_back(m.random_point(rng()));
  return w;
}

double GapMetric::witness_term(const Point& z, const Point& x, const Point& y) const {
  return std::abs(gap_(lin_.nu(z, x)) - gap_(lin_.nu(z, y)));
}

double GapMetric::dist_x(const Point& x, const Point& y, const WitnessSet& w) const {
  if (w.points.empty()) throw ContractViolation("witness set must be nonempty");
  double best = std::max(witness_term(x, x, y), witness_term(y, x, y));
  const auto n = static_cast<long>(w.points.size());
#pragma omp parallel for reduction(max : best) schedule(static)
  for (long j = 0; j < n; ++j) {
    best = std::max(best, witness_term(w.points[j], x, y));
  }
  return best;
}

double GapMetric::dist_x_serial(const Point& x, const Point& y, const WitnessSet& w) const {
  if (w.points.empty()) throw ContractViolation("witness set must be nonempty");
  double best = std::max(witness_term(x, x, y), witness_term(y, x, y));
  for (const Point& z : w.points) best = std::max(best, witness_term(z, x, y));
  return best;
}

double GapMetric::dist_e(const BundleElem& u, const BundleElem& v, const WitnessSet& w) const {
  const auto [a1, b1] = lin_.delta(fiber_difference(u, v));
  const auto [a2, b2] = lin_.delta(fiber_difference(v, u));
  return dist_x(a1, b1, w) + dist_x(a2, b2, w);
}

AuditReport metric_audit(const GapMetric& metric, const WitnessSet& w, int triples, std::uint64_t seed) {
  if (triples < 1) throw ContractViolation("metric audit needs at least one triple");
  if (w.points.empty()) throw ContractViolation("witness set must be nonempty");
  const Manifold& m = metric.manifold();
  const Linearization& lin = metric.linearization();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double gap_min = 1.0;
  double gap_max = 0.0;
  double diag_max = 0.0;
  double sep_min = 1.0;
  double sym_max = 0.0;
  double tri_max = 0.0;
  std::string tri_witness;

  for (int t = 0; t < triples; ++t) {
    const Point x = m.random_point(rng());
    const Point y = m.random_point(rng());
    // Third point close to x so that short pairs are exercised as well as generic ones.
    const std::uint64_t tseed = rng();
    const double scale = std::pow(10.0, -4.0 + 3.0 * unit(rng));
    const Point z = t % 2 == 0 ? m.exp(x, m.random_tangent(x, tseed, scale).vec) : m.random_point(tseed);

    for (const auto& [a, b] : {std::pair{&x, &y}, std::pair{&x, &z}, std::pair{&y, &z}}) {
      if (m.distance(*a, *b) == 0.0) continue;
      const double g = metric.gap()(lin.nu(*a, *b));
      gap_min = std::min(gap_min, g);
      gap_max = std::max(gap_max, g);
    }

    const double dxy = metric.dist_x(x, y, w);
    const double dyx = metric.dist_x(y, x, w);
    const double dxz = metric.dist_x(x, z, w);
    const double dzx = metric.dist_x(z, x, w);
    const double dyz = metric.dist_x(y, z, w);
    const double dzy = metric.dist_x(z, y, w);
    diag_max = std::max({diag_max, metric.dist_x(x, x, w), metric.dist_x(z, z, w)});
    if (m.distance(x, y) > 0.0) sep_min = std::min(sep_min, dxy);
    if (m.distance(x, z) > 0.0) sep_min = std::min(sep_min, dxz);
    if (m.distance(y, z) > 0.0) sep_min = std::min(sep_min, dyz);
    sym_max = std::max({sym_max, std::abs(dxy - dyx), std::abs(dxz - dzx), std::abs(dyz - dzy)});
    const double viol = std::max({dxz - (dxy + dyz), dxy - (dxz + dyz), dyz - (dxy + dxz), 0.0});
    if (viol > tri_max) {
      tri_max = viol;
      std::ostringstream os;
      os << "triple " << t << ": d(x,y)=" << dxy << " d(y,z)=" << dyz << " d(x,z)=" << dxz;
      tri_witness = os.str();
    }
  }

  const double gap_zero = metric.gap()(BundleElem::zero(m.random_point(seed)));
  AuditReport report;
  report.title = "metric audit (" + to_string(m.kind()) + ", " + std::to_string(triples) + " triples, " +
                 std::to_string(w.points.size()) + " witnesses)";
  report.add("gap_separation", gap_zero == 0.0 && gap_min > 0.0, gap_min,
             "gap(0) = " + std::to_string(gap_zero) + ", min gap(nu(x,y)) over x != y");
  report.add("gap_bounded", gap_max < 1.0, gap_max, "max sampled gap");
  report.add("distance_zero_on_diagonal", diag_max == 0.0, diag_max);
  report.add("distance_separation", sep_min > 0.0, sep_min, "min d_X(x,y) over x != y");
  report.add("distance_symmetry", sym_max == 0.0, sym_max);
  report.add("triangle_inequality", tri_max <= 1e-12, tri_max, tri_witness);
  return report;
}

}  // namespace glin
