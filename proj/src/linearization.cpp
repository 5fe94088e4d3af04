#include "glin/linearization.hpp"

#include "glin/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace glin {

namespace {

double bump_psi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double covec_norm(const BundleElem& e) { return std::sqrt(e.xi.covec.squaredNorm() + e.k * e.k); }

/// A point far from x: past the cutoff, and on the cut locus for compact kinds.
Point far_partner(const Manifold& m, const Point& x) {
  switch (m.kind()) {
    case ManifoldKind::sphere: return Point{-x.coords};
    case ManifoldKind::torus: {
      Vec y = x.coords;
      for (auto& c : y) c = wrap_angle(c + std::numbers::pi);
      return Point{std::move(y)};
    }
    case ManifoldKind::euclidean: {
      Vec y = x.coords;
      y[0] += 2.0 * m.r();
      return Point{std::move(y)};
    }
  }
  return x;
}

/// Tangent-frame coordinates of y o exp_z near z, used for finite-difference Jacobians.
Vec chart_coords(const Manifold& m, const Point& z, const Eigen::MatrixXd& frame, const Point& y) {
  return frame.transpose() * m.log(z, y).vec;
}

}  // namespace

BundleElem fiber_difference(const BundleElem& u, const BundleElem& v) {
  if (u.base.coords != v.base.coords) throw FiberMismatch("bundle elements lie in different fibers");
  return {u.base, {u.base, u.xi.covec - v.xi.covec}, u.k - v.k};
}

BundleElem fiber_scale(const BundleElem& e, double t) { return {e.base, {e.base, t * e.xi.covec}, t * e.k}; }

SmoothCutoff::SmoothCutoff(double inner, double outer) : inner_(inner), outer_(outer) {
  if (!(inner > 0.0) || !(outer > inner)) throw ContractViolation("cutoff needs 0 < inner < outer");
}

double SmoothCutoff::operator()(double d) const {
  if (d <= inner_) return 1.0;
  if (d >= outer_) return 0.0;
  const double s = (outer_ - d) / (outer_ - inner_);
  const double a = bump_psi(s);
  const double b = bump_psi(1.0 - s);
  return a / (a + b);
}

Linearization::Linearization(Manifold manifold, double cutoff_fraction, double transition_width)
    : manifold_(std::move(manifold)),
      cutoff_fraction_(cutoff_fraction),
      cutoff_(cutoff_fraction * manifold_.r() * (1.0 - transition_width), cutoff_fraction * manifold_.r()) {
  if (!(cutoff_fraction > 0.0 && cutoff_fraction < 1.0)) {
    throw ContractViolation("cutoff fraction must lie in (0, 1)");
  }
  if (!(transition_width > 0.0 && transition_width < 1.0)) {
    throw ContractViolation("cutoff transition width must lie in (0, 1)");
  }
}

BundleElem Linearization::nu(const Point& x, const Point& y) const {
  const double d = manifold_.distance(x, y);
  BundleElem e = BundleElem::zero(x);
  e.k = d;
  const double chi = d < r() ? cutoff_(d) : 0.0;
  if (chi > 0.0 && d > 0.0) e.xi.covec = chi * manifold_.flat(manifold_.log(x, y)).covec;
  return e;
}

double Linearization::delta_argument_norm(const BundleElem& e) const {
  const double vn = e.xi.covec.norm();
  const double s = (1.0 + e.k) * vn;
  return r() * vn / std::sqrt(1.0 + s * s);
}

std::pair<Point, Point> Linearization::delta(const BundleElem& e) const {
  if (e.xi.base.coords != e.base.coords) throw ContractViolation("covector is not based at the bundle base");
  const Vec v = manifold_.sharp(e.xi).vec;
  if (v.isZero(0.0)) return {e.base, e.base};
  const double one_plus_k = 1.0 + e.k;
  const double scale = r() / std::sqrt(1.0 + one_plus_k * one_plus_k * v.squaredNorm());
  return {e.base, manifold_.exp(e.base, Vec(scale * v))};
}

Point Linearization::endpoint(const CotangentVec& xi, double t) const {
  if (t == 0.0) return xi.base;
  return delta(BundleElem{xi.base, {xi.base, t * xi.covec}, 0.0}).second;
}

double Linearization::pairing_k(const CotangentVec& xi, const Point& y) const {
  const BundleElem e = nu(xi.base, y);
  return manifold_.inner(manifold_.sharp(e.xi).vec, manifold_.sharp(xi).vec);
}

AuditReport check_linearization(const Linearization& lin, int samples, std::uint64_t seed) {
  return check_linearization(
      lin, [&lin](const Point& x, const Point& y) { return lin.nu(x, y); },
      [&lin](const BundleElem& e) { return lin.delta(e); }, samples, seed);
}

AuditReport check_linearization(const Linearization& lin, const NuFn& nu, const DeltaFn& delta, int samples,
                                std::uint64_t seed) {
  if (samples < 1) throw ContractViolation("linearization audit needs at least one sample");
  const Manifold& m = lin.manifold();
  const double r = lin.r();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double zero_section_res = 0.0;
  double delta_base_res = 0.0;
  double preimage_min = std::numeric_limits<double>::infinity();
  double nu_base_res = 0.0;
  double nu_diag_res = 0.0;
  double separation_min = std::numeric_limits<double>::infinity();
  std::string separation_witness;
  double dnu_min = std::numeric_limits<double>::infinity();
  double identity_worst = 0.0;
  double rank_min_sv = std::numeric_limits<double>::infinity();

  const double h_id = 1e-5;
  const double h_fd = 1e-6;
  const double near_radius = std::min(0.5, 0.5 * lin.cutoff().inner());

  for (int s = 0; s < samples; ++s) {
    const Point x = m.random_point(rng());
    const Eigen::MatrixXd frame = m.tangent_frame(x);

    // delta sends the zero section to the diagonal and commutes with the projections.
    {
      const auto [a, b] = delta(BundleElem::zero(x));
      zero_section_res = std::max({zero_section_res, (a.coords - x.coords).norm(), (b.coords - x.coords).norm()});
      const double scale = std::pow(10.0, -3.0 + 4.0 * unit(rng));
      const TangentVec v = m.random_tangent(x, rng(), scale);
      const BundleElem e{x, m.flat(v), 4.0 * unit(rng) - 1.0};
      delta_base_res = std::max(delta_base_res, (delta(e).first.coords - x.coords).norm());
      const BundleElem e0{x, m.flat(v), 0.0};
      if (!v.vec.isZero(0.0)) preimage_min = std::min(preimage_min, m.distance(x, delta(e0).second));
    }

    // nu vanishes exactly on the diagonal, including at cut-locus pairs.
    {
      const BundleElem diag = nu(x, x);
      nu_diag_res = std::max(nu_diag_res, covec_norm(diag));
      const Point partners[] = {m.random_point(rng()), far_partner(m, x),
                                m.exp(x, m.random_tangent(x, rng(), near_radius).vec)};
      for (const Point& y : partners) {
        const BundleElem e = nu(x, y);
        nu_base_res = std::max({nu_base_res, (e.base.coords - x.coords).norm(), (e.xi.base.coords - x.coords).norm()});
        if (m.distance(x, y) == 0.0) continue;
        const double n = covec_norm(e);
        if (n < separation_min) {
          separation_min = n;
          std::ostringstream os;
          os << "d(x,y)=" << m.distance(x, y);
          separation_witness = os.str();
        }
      }
    }

    // d_y nu(x, .) at y = x, cotangent slot, by central differences along the frame.
    {
      double min_col = std::numeric_limits<double>::infinity();
      for (int i = 0; i < frame.cols(); ++i) {
        const Vec e = frame.col(i);
        const Vec plus = nu(x, m.exp(x, Vec(h_fd * e))).xi.covec;
        const Vec minus = nu(x, m.exp(x, Vec(-h_fd * e))).xi.covec;
        min_col = std::min(min_col, ((plus - minus) / (2.0 * h_fd)).norm());
      }
      dnu_min = std::min(dnu_min, min_col);
    }

    // D_0((1/r) nu o delta) = Id on the k = 0 slice.
    {
      const TangentVec v = m.random_tangent(x, rng(), 1.0);
      const Vec xi = m.flat(v).covec;
      const BundleElem he{x, {x, h_id * xi}, 0.0};
      const Point y = delta(he).second;
      const Vec got = nu(x, y).xi.covec / r;
      identity_worst = std::max(identity_worst, (got - h_id * xi).norm() / h_id);
    }

    // The differential of y -> (delta o nu)(x, y) is injective where chi = 1.
    {
      const auto composite = [&](const Point& y) { return delta(nu(x, y)).second; };
      const std::uint64_t tangent_seed = rng();
      const double radius = near_radius * unit(rng);
      Vec dir = m.random_tangent(x, tangent_seed).vec;
      if (dir.norm() > 0.0) dir *= radius / dir.norm();
      const Point ys[] = {x, m.exp(x, dir)};
      for (const Point& y : ys) {
        const Eigen::MatrixXd in_frame = m.tangent_frame(y);
        const Point z = composite(y);
        const Eigen::MatrixXd out_frame = m.tangent_frame(z);
        Eigen::MatrixXd jac(out_frame.cols(), in_frame.cols());
        try {
          for (int i = 0; i < in_frame.cols(); ++i) {
            const Vec e = in_frame.col(i);
            const Vec p = chart_coords(m, z, out_frame, composite(m.exp(y, Vec(h_fd * e))));
            const Vec q = chart_coords(m, z, out_frame, composite(m.exp(y, Vec(-h_fd * e))));
            jac.col(i) = (p - q) / (2.0 * h_fd);
          }
          Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
          rank_min_sv = std::min(rank_min_sv, svd.singularValues().minCoeff());
        } catch (const CutLocusError&) {
          rank_min_sv = 0.0;
        }
      }
    }
  }

  AuditReport report;
  report.title = "linearization audit (" + to_string(m.kind()) + ", " + std::to_string(samples) + " samples)";
  report.add("delta_zero_section_to_diagonal", zero_section_res == 0.0, zero_section_res);
  report.add("delta_diagonal_preimage_is_zero_section", preimage_min > 0.0, preimage_min,
             "min d(x, delta(xi).1) over nonzero xi");
  report.add("delta_commutes_with_projection", delta_base_res == 0.0, delta_base_res);
  report.add("nu_zero_on_diagonal", nu_diag_res == 0.0, nu_diag_res);
  report.add("nu_separates_points", separation_min > 0.0, separation_min,
             "min |nu(x,y)| over x != y; worst pair " + separation_witness);
  report.add("nu_differential_nonzero", dnu_min > 0.0, dnu_min, "min column norm of d_y nu(x,.) at y = x");
  report.add("nu_commutes_with_projection", nu_base_res == 0.0, nu_base_res);
  report.add("derivative_identity_at_origin", identity_worst <= 1e-4, identity_worst,
             "|(1/r) nu(x, delta(h e).1) - h e| / h at h = 1e-5");
  report.add("induced_cotangent_map_injective", rank_min_sv > 1e-6, rank_min_sv,
             "min singular value of d(delta o nu)(x,.) inside the chi = 1 region");
  return report;
}

}  // namespace glin
