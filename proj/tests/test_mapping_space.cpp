#include "glin/errors.hpp"
#include "glin/mapping_space.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

using namespace glin;

namespace {

constexpr double kPi = std::numbers::pi;

DiscreteMap circle_loop(int m, int degree, double amplitude = 0.0) {
  return DiscreteMap::sample(Manifold::sphere(1), m, [&](double t) {
    const double phi = degree * t + amplitude * std::sin(2.0 * t) + 0.05 * amplitude * std::cos(5.0 * t);
    return Vec{{std::cos(phi), std::sin(phi)}};
  });
}

DiscreteMap random_loop(const Manifold& n, int m, std::uint64_t seed) {
  std::vector<Point> v;
  for (int j = 0; j < m; ++j) v.push_back(n.random_point(seed + j));
  return {n, std::move(v)};
}

DiscreteMap angles(const std::vector<double>& a) {
  const Manifold t1 = Manifold::torus(1);
  std::vector<Point> v;
  for (double x : a) v.push_back(t1.point(Vec::Constant(1, x)));
  return {t1, std::move(v)};
}

/// Direct O(m^2) unitary DFT of every row.
double naive_sobolev(const Eigen::MatrixXd& s, double order) {
  const int m = static_cast<int>(s.cols());
  double sum = 0.0;
  for (int k = -m / 2 + 1; k <= m / 2; ++k) {
    double power = 0.0;
    for (long c = 0; c < s.rows(); ++c) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < m; ++j) acc += s(c, j) * std::polar(1.0, -2.0 * kPi * k * j / m);
      power += std::norm(acc) / m;
    }
    sum += std::pow(1.0 + double(k) * k, order) * power;
  }
  return std::sqrt(sum);
}

}  // namespace

TEST(DiscreteMap, ShapeChecks) {
  const Manifold s1 = Manifold::sphere(1);
  EXPECT_THROW(random_loop(s1, 2, 1), ShapeError);
  EXPECT_THROW(random_loop(s1, 5, 1), ShapeError);
  std::vector<Point> off(4, Point{Vec{{2.0, 0.0}}});
  EXPECT_THROW(DiscreteMap(s1, off), ShapeError);
  const DiscreteMap u = random_loop(s1, 8, 1);
  EXPECT_DOUBLE_EQ(u.spacing(), 2 * kPi / 8);
  EXPECT_DOUBLE_EQ(u.grid_point(2), kPi / 2);
}

TEST(LiftedNu, EqualMapsGiveZeroSections) {
  const DiscreteMap f = random_loop(Manifold::sphere(2), 16, 3);
  const LiftedBundleElem e = lifted_nu(Linearization(f.target()), f, f);
  for (const BundleElem& b : e.sections) EXPECT_TRUE(b.is_zero());
}

TEST(LiftedNu, MatchesPointwiseValues) {
  const Linearization lin(Manifold::torus(1));
  const DiscreteMap f = angles({0, 0, 0, 0});
  const DiscreteMap g = angles({kPi / 2, kPi, kPi / 2, kPi});
  const LiftedBundleElem e = lifted_nu(lin, f, g);
  for (int j = 0; j < 4; ++j) {
    const BundleElem ref = lin.nu(f[j], g[j]);
    EXPECT_EQ(e.sections[j].xi.covec, ref.xi.covec);
    EXPECT_EQ(e.sections[j].k, ref.k);
    EXPECT_EQ(e.sections[j].base.coords, f[j].coords);
    EXPECT_EQ(e.base[j].coords, f[j].coords);
  }
  EXPECT_NEAR(e.sections[0].xi.covec[0], kPi / 2, 1e-15);
  EXPECT_TRUE(e.sections[1].xi.covec.isZero(0.0));
  EXPECT_DOUBLE_EQ(e.sections[1].k, kPi);
}

TEST(LiftedNu, MismatchedShapes) {
  const Linearization lin(Manifold::sphere(2));
  EXPECT_THROW(lifted_nu(lin, random_loop(Manifold::sphere(2), 8, 1), random_loop(Manifold::sphere(2), 10, 1)),
               ShapeError);
  EXPECT_THROW(lifted_nu(lin, random_loop(Manifold::sphere(2), 8, 1), random_loop(Manifold::sphere(3), 8, 1)),
               ShapeError);
}

TEST(LiftedNu, CommutesWithRestriction) {
  const Manifold s2 = Manifold::sphere(2);
  const Linearization lin(s2);
  const DiscreteMap f = random_loop(s2, 16, 1);
  const DiscreteMap g = random_loop(s2, 16, 100);
  std::vector<Point> fs, gs;
  for (int j = 0; j < 16; j += 2) {
    fs.push_back(f[j]);
    gs.push_back(g[j]);
  }
  const LiftedBundleElem full = lifted_nu(lin, f, g);
  const LiftedBundleElem sub = lifted_nu(lin, DiscreteMap(s2, fs), DiscreteMap(s2, gs));
  for (int j = 0; j < 8; ++j) EXPECT_EQ(sub.sections[j].xi.covec, full.sections[2 * j].xi.covec);
}

TEST(LiftedDelta, ZeroAndSingleSection) {
  const Manifold s2 = Manifold::sphere(2);
  const Linearization lin(s2);
  const DiscreteMap f = random_loop(s2, 8, 5);
  LiftedBundleElem e{f, {}};
  for (int j = 0; j < 8; ++j) e.sections.push_back(BundleElem::zero(f[j]));
  auto [a, b] = lifted_delta(lin, e);
  for (int j = 0; j < 8; ++j) EXPECT_EQ(b[j].coords, f[j].coords);
  e.sections[3].xi.covec = s2.random_tangent(f[3], 1).vec;
  std::tie(a, b) = lifted_delta(lin, e);
  for (int j = 0; j < 8; ++j) {
    EXPECT_EQ(a[j].coords, f[j].coords);
    EXPECT_EQ(b[j].coords == f[j].coords, j != 3) << j;
  }
}

TEST(LiftedDelta, RoundTripAfterUndoingSaturation) {
  const Manifold s1 = Manifold::sphere(1);
  const Linearization lin(s1);
  const DiscreteMap f = circle_loop(16, 1);
  const DiscreteMap g = DiscreteMap::sample(s1, 16, [](double t) {
    const double phi = t + 0.4 * std::sin(3.0 * t);
    return Vec{{std::cos(phi), std::sin(phi)}};
  });
  LiftedBundleElem e = lifted_nu(lin, f, g);
  for (BundleElem& s : e.sections) {
    const double b = s.xi.covec.norm();
    if (b == 0.0) continue;
    const double a = b / std::sqrt(lin.r() * lin.r() - b * b * (1.0 + s.k) * (1.0 + s.k));
    s.xi.covec *= a / b;
  }
  const DiscreteMap back = lifted_delta(lin, e).second;
  for (int j = 0; j < 16; ++j) EXPECT_LT(s1.distance(back[j], g[j]), 1e-12);
}

TEST(LiftedKernels, ParallelMatchesSerial) {
  const Manifold s2 = Manifold::sphere(2);
  const Linearization lin(s2);
  const DiscreteMap f = random_loop(s2, 64, 1);
  const DiscreteMap g = random_loop(s2, 64, 500);
  const LiftedBundleElem a = lifted_nu(lin, f, g);
  const LiftedBundleElem b = serial::lifted_nu(lin, f, g);
  for (int j = 0; j < 64; ++j) {
    EXPECT_EQ(a.sections[j].xi.covec, b.sections[j].xi.covec);
    EXPECT_EQ(a.sections[j].k, b.sections[j].k);
  }
  const auto da = lifted_delta(lin, a).second;
  const auto db = serial::lifted_delta(lin, a).second;
  for (int j = 0; j < 64; ++j) EXPECT_EQ(da[j].coords, db[j].coords);
  const DiscreteMap u = circle_loop(256, 1, 0.3);
  EXPECT_EQ(dirichlet_energy(u), serial::dirichlet_energy(u));
  const LiftedCovector ga = dirichlet_differential(u);
  const LiftedCovector gb = serial::dirichlet_differential(u);
  for (int j = 0; j < 256; ++j) EXPECT_EQ(ga.nodes[j].covec, gb.nodes[j].covec);
}

TEST(Sobolev, ParsevalAndNaiveOracle) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  for (int m : {4, 6, 8, 16, 30}) {
    Eigen::MatrixXd a(3, m);
    for (long i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
    EXPECT_NEAR(sobolev_norm(a, 0.0), a.norm(), 1e-12 * a.norm());
    for (double s : {-1.0, -0.5, 0.5, 1.0, 2.0}) EXPECT_NEAR(sobolev_norm(a, s), naive_sobolev(a, s), 1e-11 * naive_sobolev(a, s));
  }
}

TEST(Sobolev, SingleModeAndConstants) {
  const int m = 32;
  Eigen::MatrixXd e(2, m);
  for (int j = 0; j < m; ++j) {
    e(0, j) = std::cos(2 * kPi * j / m) / std::sqrt(double(m));
    e(1, j) = std::sin(2 * kPi * j / m) / std::sqrt(double(m));
  }
  EXPECT_NEAR(sobolev_norm(e, -1.0), 1.0 / std::sqrt(2.0), 1e-14);

  const Manifold s2 = Manifold::sphere(2);
  const Point c = s2.random_point(3);
  const DiscreteMap u(s2, std::vector<Point>(m, c));
  for (double s : {-2.0, -1.0, 0.0, 1.0, 3.0}) EXPECT_NEAR(sobolev_norm(u, s), std::sqrt(double(m)), 1e-12);
}

TEST(Sobolev, NondecreasingInOrder) {
  const DiscreteMap u = random_loop(Manifold::sphere(2), 64, 9);
  double last = 0.0;
  for (double s = -2.0; s <= 2.0; s += 0.25) {
    const double v = sobolev_norm(u, s);
    EXPECT_GE(v, last);
    last = v;
  }
}

TEST(Sobolev, SpectrumCsv) {
  const DiscreteMap u = circle_loop(8, 1);
  const auto rows = sobolev_spectrum(u.embedded(), -1.0);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows.front().k, -3);
  EXPECT_EQ(rows.back().k, 4);
  std::ostringstream os;
  write_spectrum_csv(os, rows);
  EXPECT_EQ(os.str().rfind("# glin-spectrum v1\nk,multiplier,coefficient_norm\n", 0), 0u);
}

TEST(Dirichlet, ClosedFormEnergies) {
  EXPECT_EQ(dirichlet_energy(DiscreteMap(Manifold::sphere(1), std::vector<Point>(8, Point{Vec{{1.0, 0.0}}}))), 0.0);
  for (int k : {1, 2, 3}) {
    const double e = dirichlet_energy(circle_loop(256, k));
    EXPECT_NEAR(e / (kPi * k * k), 1.0, 0.02) << k;
  }
}

TEST(Dirichlet, DifferentialMatchesFiniteDifferences) {
  const DiscreteMap u = DiscreteMap::sample(Manifold::sphere(2), 16, [](double t) {
    return Vec{{std::cos(t), std::sin(t), 0.4 * std::sin(3 * t)}};
  });
  MapFunctional fd = dirichlet_functional();
  fd.differential = nullptr;
  const LiftedCovector a = dirichlet_differential(u);
  const LiftedCovector b = finite_difference_differential(fd, u);
  for (int j = 0; j < 16; ++j) EXPECT_LE((a.nodes[j].covec - b.nodes[j].covec).norm(), 1e-5 * std::max(1.0, a.nodes[j].covec.norm()));
}

TEST(Winding, Degrees) {
  for (int k : {-2, 0, 1, 3}) EXPECT_EQ(winding_number(circle_loop(64, k, 0.2)), k);
  EXPECT_THROW(winding_number(random_loop(Manifold::sphere(2), 8, 1)), ShapeError);
}

TEST(MappingDescent, ExactLoopIsCritical) {
  const DiscreteMap u = circle_loop(256, 1);
  const MappingTrace t = run_mapping_descent(Linearization(u.target()), dirichlet_functional(), u, DescentConfig{});
  EXPECT_EQ(t.trace.stop, StopReason::ExactCriticalPoint);
  EXPECT_EQ(t.trace.size(), 1u);
}

TEST(MappingDescent, PerturbedCircleLoopApproachesPi) {
  const DiscreteMap u = circle_loop(256, 1, 0.3);
  DescentConfig cfg;
  cfg.n_max = 80;
  cfg.eps = 1e-12;
  cfg.grad_zero_tol = 1e-10;
  const MappingTrace t = run_mapping_descent(Linearization(u.target()), dirichlet_functional(), u, cfg);
  EXPECT_TRUE(t.winding_constant());
  EXPECT_EQ(t.winding.front(), 1);
  for (std::size_t n = 1; n < t.trace.size(); ++n) EXPECT_LE(t.trace.values[n], t.trace.values[n - 1]);
  EXPECT_LT(std::abs(t.trace.values.back() - kPi) / kPi, 0.02);
  for (const auto& row : t.sobolev) {
    for (double v : row) EXPECT_TRUE(std::isfinite(v));
  }
  for (double step : t.max_node_step) EXPECT_LT(step, kPi);
}

TEST(MappingDescent, SphereLoopShrinks) {
  const Manifold s2 = Manifold::sphere(2);
  const DiscreteMap u = DiscreteMap::sample(s2, 32, [](double t) {
    return Vec{{std::cos(t), std::sin(t), 0.3 + 0.2 * std::sin(2 * t)}};
  });
  DescentConfig cfg;
  cfg.n_max = 60;
  const MappingTrace t = run_mapping_descent(Linearization(s2), dirichlet_functional(), u, cfg);
  for (std::size_t n = 1; n < t.trace.size(); ++n) EXPECT_LE(t.trace.values[n], t.trace.values[n - 1]);
  EXPECT_LT(t.trace.values.back(), 0.5 * t.trace.values.front());
  EXPECT_TRUE(t.winding.empty());
}

TEST(MappingDescent, SobolevTrackingReachesTarget) {
  const Manifold s1 = Manifold::sphere(1);
  const DiscreteMap target = circle_loop(16, 1);
  DescentConfig cfg;
  cfg.n_max = 40;
  const MappingTrace t =
      run_mapping_descent(Linearization(s1), sobolev_tracking_functional(target, 0.0), circle_loop(16, 1, 0.3), cfg);
  EXPECT_LT(t.trace.values.back(), 1e-3 * t.trace.values.front());
}

TEST(MappingDescent, DisplacementOfIdenticalLoopsIsZero) {
  const Manifold s2 = Manifold::sphere(2);
  const Linearization lin(s2);
  const MapFunctional f = dirichlet_functional();
  const DiscreteMap u = random_loop(s2, 8, 1);
  const DiscreteMap v = random_loop(s2, 8, 50);
  for (DisplacementKind k : {DisplacementKind::gap_metric, DisplacementKind::geodesic}) {
    const MappingSpace space(lin, f, k);
    EXPECT_EQ(space.displacement(u, u), 0.0);
    EXPECT_GT(space.displacement(u, v), 0.0);
    EXPECT_EQ(space.displacement(u, v), space.displacement(v, u));
  }
}

TEST(MapCsv, Format) {
  std::ostringstream os;
  write_map_csv(os, circle_loop(4, 1));
  EXPECT_EQ(os.str().rfind("# glin-map v1\nt,a0,a1\n0,1,0\n", 0), 0u);
}
