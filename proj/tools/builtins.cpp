#include "builtins.hpp"

#include <cmath>

namespace glin::cli {

Functional cosine_functional(const Manifold& m, const Point& p) {
  Functional f;
  f.eval = [p](const Point& x) { return 1.0 - x.coords.dot(p.coords); };
  f.differential = [m, p](const Point& x) {
    return m.flat(TangentVec{x, m.project_tangent(x, -p.coords)});
  };
  return f;
}

Functional height_functional(const Manifold& m) {
  Functional f;
  f.eval = [](const Point& x) { return (2.0 + std::cos(x.coords[1])) * std::cos(x.coords[0]); };
  f.differential = [m](const Point& x) {
    Vec g(2);
    g[0] = -(2.0 + std::cos(x.coords[1])) * std::sin(x.coords[0]);
    g[1] = -std::sin(x.coords[1]) * std::cos(x.coords[0]);
    return m.flat(TangentVec{x, g});
  };
  return f;
}

Functional quadratic_functional(const Manifold& m, const Point& p) {
  Functional f;
  f.eval = [p](const Point& x) { return (x.coords - p.coords).squaredNorm(); };
  f.differential = [m, p](const Point& x) { return m.flat(TangentVec{x, 2.0 * (x.coords - p.coords)}); };
  return f;
}

namespace {

Point point_from_list(const Manifold& m, const std::vector<double>& v, const char* key) {
  if (static_cast<int>(v.size()) != m.ambient_dim()) {
    throw ConfigError(std::string("field '") + key + "': expected " + std::to_string(m.ambient_dim()) +
                      " coordinates, got " + std::to_string(v.size()));
  }
  try {
    return m.point(Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size())));
  } catch (const Error& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Point anchor_point(const ProblemConfig& cfg, const Manifold& m) {
  if (!cfg.p.empty()) return point_from_list(m, cfg.p, "problem.p");
  Vec p = Vec::Zero(m.ambient_dim());
  if (m.kind() == ManifoldKind::sphere) p[m.ambient_dim() - 1] = 1.0;
  return m.point(p);
}

Point start_point(const ProblemConfig& cfg, const Manifold& m) {
  if (!cfg.start.empty()) return point_from_list(m, cfg.start, "problem.start");
  return m.random_point(cfg.seed);
}

Functional make_functional(const ProblemConfig& cfg, const Manifold& m) {
  Functional f;
  if (cfg.functional == "cosine") {
    if (m.kind() != ManifoldKind::sphere) throw ConfigError("field 'problem.functional': cosine needs a sphere");
    f = cosine_functional(m, anchor_point(cfg, m));
  } else if (cfg.functional == "height") {
    if (m.kind() != ManifoldKind::torus || m.dim() != 2) {
      throw ConfigError("field 'problem.functional': height needs the torus of dimension 2");
    }
    f = height_functional(m);
  } else if (cfg.functional == "quadratic") {
    if (m.kind() != ManifoldKind::euclidean) {
      throw ConfigError("field 'problem.functional': quadratic needs a Euclidean space");
    }
    f = quadratic_functional(m, anchor_point(cfg, m));
  } else {
    throw ConfigError("field 'problem.functional': '" + cfg.functional + "' is a loop functional; set problem.kind = mapping");
  }
  if (cfg.finite_difference) f.differential = nullptr;
  return f;
}

DiscreteMap perturbed_loop(const Manifold& target, int m, int degree, double amplitude) {
  if (target.ambient_dim() < 2 && target.kind() != ManifoldKind::torus) {
    throw ConfigError("field 'manifold.dim': loop targets need at least two ambient coordinates");
  }
  return DiscreteMap::sample(target, m, [&](double t) {
    const double phi = degree * t + amplitude * std::sin(2.0 * t) + 0.05 * std::cos(5.0 * t);
    Vec v = Vec::Zero(target.ambient_dim());
    if (target.kind() == ManifoldKind::torus) {
      v[0] = wrap_angle(phi);
      for (long i = 1; i < v.size(); ++i) v[i] = wrap_angle(amplitude * std::sin(3.0 * t));
    } else {
      v[0] = std::cos(phi);
      v[1] = std::sin(phi);
      if (v.size() > 2) v[2] = amplitude * std::sin(3.0 * t);
    }
    return v;
  });
}

MapFunctional make_map_functional(const ProblemConfig& cfg, const Manifold& target) {
  if (cfg.functional == "dirichlet") return dirichlet_functional();
  if (cfg.functional == "sobolev_tracking") {
    const double s = cfg.s_values.empty() ? 0.0 : cfg.s_values.front();
    return sobolev_tracking_functional(perturbed_loop(target, cfg.mapping_m, cfg.mapping_degree, 0.0), s);
  }
  throw ConfigError("field 'problem.functional': '" + cfg.functional + "' is not a loop functional");
}

SelfMap make_self_map(const ProblemConfig& cfg, const Manifold& m) {
  if (cfg.self_map == "identity") return identity_map();
  if (cfg.self_map == "rotation") return rotation_map(m, cfg.fp_angle);
  return geodesic_contraction(m, anchor_point(cfg, m), cfg.fp_factor);
}

}  // namespace glin::cli
