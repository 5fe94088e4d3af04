#pragma once

#include "config.hpp"

#include "glin/descent.hpp"
#include "glin/fixed_point.hpp"
#include "glin/mapping_space.hpp"

namespace glin::cli {

/// 1 - <x, p> on a sphere.
Functional cosine_functional(const Manifold& m, const Point& p);
/// (2 + cos a2) cos a1 on T^2: the height of the standard torus of revolution over a
/// horizontal axis. Two critical levels are saddles, so descent can stall on either.
Functional height_functional(const Manifold& m);
/// |x - p|^2 on R^n.
Functional quadratic_functional(const Manifold& m, const Point& p);

/// Configured anchor point p (sphere: last basis vector, otherwise the origin).
Point anchor_point(const ProblemConfig& cfg, const Manifold& m);
Point start_point(const ProblemConfig& cfg, const Manifold& m);
/// Builds the named functional; throws ConfigError when it does not fit the manifold.
Functional make_functional(const ProblemConfig& cfg, const Manifold& m);

/// Loop t -> (cos phi, sin phi, ...) with phi = degree t + a sin 2t + 0.05 cos 5t.
DiscreteMap perturbed_loop(const Manifold& target, int m, int degree, double amplitude);
MapFunctional make_map_functional(const ProblemConfig& cfg, const Manifold& target);

SelfMap make_self_map(const ProblemConfig& cfg, const Manifold& m);

}  // namespace glin::cli
