#include "glin/manifold.hpp"

#include "glin/errors.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>
#include <random>

namespace glin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_base(const Point& x, const TangentVec& v) {
  if (v.base.coords.size() != x.coords.size() || v.base.coords != x.coords) {
    throw ContractViolation("tangent vector is not based at the given point");
  }
}

}  // namespace

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::euclidean: return "euclidean";
    case ManifoldKind::sphere: return "sphere";
    case ManifoldKind::torus: return "torus";
  }
  return "unknown";
}

ManifoldKind manifold_kind_from_string(const std::string& name) {
  if (name == "euclidean") return ManifoldKind::euclidean;
  if (name == "sphere") return ManifoldKind::sphere;
  if (name == "torus") return ManifoldKind::torus;
  throw ContractViolation("unknown manifold kind '" + name + "'");
}

double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

double wrap_angle_difference(double a, double b) {
  double d = std::remainder(b - a, kTwoPi);
  if (d <= -std::numbers::pi) d = std::numbers::pi;
  return d;
}

Manifold::Manifold(ManifoldKind kind, int dim, double euclidean_radius)
    : kind_(kind), dim_(dim), ambient_dim_(kind == ManifoldKind::sphere ? dim + 1 : dim),
      r_(kind == ManifoldKind::euclidean ? euclidean_radius : std::numbers::pi) {
  if (dim < 1) throw ContractViolation("manifold dimension must be >= 1");
  if (!(r_ > 0.0) || !std::isfinite(r_)) {
    throw ContractViolation("injectivity radius must be positive and finite");
  }
}

int Manifold::embed_dim() const { return kind_ == ManifoldKind::torus ? 2 * dim_ : ambient_dim_; }

Point Manifold::point(Vec coords) const {
  if (coords.size() != ambient_dim_) {
    throw ContractViolation("point has " + std::to_string(coords.size()) + " coordinates, expected " +
                            std::to_string(ambient_dim_));
  }
  switch (kind_) {
    case ManifoldKind::euclidean: break;
    case ManifoldKind::sphere: {
      const double n = coords.norm();
      if (!(n > 0.0)) throw ContractViolation("cannot project the zero vector onto the sphere");
      coords /= n;
      break;
    }
    case ManifoldKind::torus:
      for (auto& c : coords) c = wrap_angle(c);
      break;
  }
  return Point{std::move(coords)};
}

bool Manifold::contains(const Point& x, double tol) const {
  if (x.coords.size() != ambient_dim_ || !x.coords.allFinite()) return false;
  switch (kind_) {
    case ManifoldKind::euclidean: return true;
    case ManifoldKind::sphere: return std::abs(x.coords.norm() - 1.0) <= tol;
    case ManifoldKind::torus:
      for (double c : x.coords) {
        if (c < 0.0 || c >= kTwoPi) return false;
      }
      return true;
  }
  return false;
}

Point Manifold::exp(const Point& x, const TangentVec& v) const {
  require_base(x, v);
  return exp(x, v.vec);
}

Point Manifold::exp(const Point& x, const Vec& v) const {
  if (v.size() != ambient_dim_) throw ContractViolation("tangent vector has wrong dimension");
  switch (kind_) {
    case ManifoldKind::euclidean: return Point{x.coords + v};
    case ManifoldKind::sphere: {
      const Vec t = project_tangent(x, v);
      const double theta = t.norm();
      if (theta == 0.0) return x;
      Vec y = std::cos(theta) * x.coords + (std::sin(theta) / theta) * t;
      y /= y.norm();
      return Point{std::move(y)};
    }
    case ManifoldKind::torus: {
      if (v.isZero(0.0)) return x;
      Vec y(ambient_dim_);
      for (int i = 0; i < ambient_dim_; ++i) y[i] = wrap_angle(x.coords[i] + v[i]);
      return Point{std::move(y)};
    }
  }
  return x;
}

double Manifold::distance(const Point& x, const Point& y) const {
  switch (kind_) {
    case ManifoldKind::euclidean: return (y.coords - x.coords).norm();
    case ManifoldKind::sphere:
      // Symmetric in (x, y) bit for bit and accurate near 0 and pi.
      return 2.0 * std::atan2((x.coords - y.coords).norm(), (x.coords + y.coords).norm());
    case ManifoldKind::torus: {
      double s = 0.0;
      for (int i = 0; i < ambient_dim_; ++i) {
        const double d = std::remainder(y.coords[i] - x.coords[i], kTwoPi);
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

TangentVec Manifold::log(const Point& x, const Point& y) const {
  switch (kind_) {
    case ManifoldKind::euclidean: return {x, y.coords - x.coords};
    case ManifoldKind::sphere: {
      const double theta = distance(x, y);
      if (theta == 0.0) return {x, Vec::Zero(ambient_dim_)};
      const Vec u = project_tangent(x, y.coords);
      const double s = u.norm();
      if (theta >= r_ || s == 0.0) throw CutLocusError("log requested at the cut locus of the sphere");
      return {x, (theta / s) * u};
    }
    case ManifoldKind::torus: {
      if (distance(x, y) >= r_) throw CutLocusError("log requested beyond the torus injectivity radius");
      Vec v(ambient_dim_);
      for (int i = 0; i < ambient_dim_; ++i) v[i] = wrap_angle_difference(x.coords[i], y.coords[i]);
      return {x, std::move(v)};
    }
  }
  return {x, Vec::Zero(ambient_dim_)};
}

Vec Manifold::project_tangent(const Point& x, const Vec& ambient) const {
  if (kind_ != ManifoldKind::sphere) return ambient;
  return ambient - x.coords.dot(ambient) * x.coords;
}

Eigen::MatrixXd Manifold::tangent_frame(const Point& x) const {
  if (kind_ != ManifoldKind::sphere) return Eigen::MatrixXd::Identity(ambient_dim_, dim_);
  // Householder QR of [x | I]: the trailing columns of Q span the complement of x.
  Eigen::MatrixXd a(ambient_dim_, ambient_dim_ + 1);
  a.col(0) = x.coords;
  a.rightCols(ambient_dim_) = Eigen::MatrixXd::Identity(ambient_dim_, ambient_dim_);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(dim_);
}

Vec Manifold::embed(const Point& x) const {
  if (kind_ != ManifoldKind::torus) return x.coords;
  Vec e(2 * dim_);
  for (int i = 0; i < dim_; ++i) {
    e[2 * i] = std::cos(x.coords[i]);
    e[2 * i + 1] = std::sin(x.coords[i]);
  }
  return e;
}

CotangentVec Manifold::pullback_gradient(const Point& x, const Vec& embedded_grad) const {
  if (embedded_grad.size() != embed_dim()) throw ContractViolation("embedded gradient has wrong dimension");
  if (kind_ != ManifoldKind::torus) return {x, project_tangent(x, embedded_grad)};
  Vec g(dim_);
  for (int i = 0; i < dim_; ++i) {
    g[i] = -std::sin(x.coords[i]) * embedded_grad[2 * i] + std::cos(x.coords[i]) * embedded_grad[2 * i + 1];
  }
  return {x, std::move(g)};
}

Point Manifold::random_point(std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  Vec c(ambient_dim_);
  switch (kind_) {
    case ManifoldKind::euclidean: {
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (auto& v : c) v = u(rng);
      return Point{std::move(c)};
    }
    case ManifoldKind::sphere: {
      std::normal_distribution<double> n(0.0, 1.0);
      do {
        for (auto& v : c) v = n(rng);
      } while (c.norm() < 1e-8);
      c /= c.norm();
      return Point{std::move(c)};
    }
    case ManifoldKind::torus: {
      std::uniform_real_distribution<double> u(0.0, kTwoPi);
      for (auto& v : c) v = wrap_angle(u(rng));
      return Point{std::move(c)};
    }
  }
  return Point{std::move(c)};
}

TangentVec Manifold::random_tangent(const Point& x, std::uint64_t seed, double scale) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Vec c(ambient_dim_);
  for (auto& v : c) v = n(rng);
  return {x, scale * project_tangent(x, c)};
}

}  // namespace glin
