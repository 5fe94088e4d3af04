#include "glin/adherence.hpp"
#include "glin/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace glin;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

}  // namespace

TEST(Clusters, ConvergedTraceIsOneCluster) {
  std::vector<Vec> coords(20, v1(0.3));
  std::vector<double> values(20, 1.5);
  for (int i = 0; i < 10; ++i) {
    coords[i] = v1(1.0 - 0.07 * i);
    values[i] = 3.0 - 0.1 * i;
  }
  const ClusterReport rep = cluster_limits(coords, values, 1e-6);
  ASSERT_EQ(rep.clusters.size(), 1u);
  EXPECT_EQ(rep.clusters[0].spread(), 0.0);
  EXPECT_EQ(rep.clusters[0].members.size(), 5u);
  EXPECT_TRUE(rep.passed());
}

TEST(Clusters, TwoPointOrbitWithEqualValuesPasses) {
  std::vector<Vec> coords;
  std::vector<double> values;
  for (int i = 0; i < 40; ++i) {
    coords.push_back(v1(i % 2 == 0 ? -1.0 : 1.0));
    values.push_back(2.0);
  }
  const ClusterReport rep = cluster_limits(coords, values, 1e-3);
  EXPECT_EQ(rep.clusters.size(), 2u);
  EXPECT_TRUE(rep.passed());
}

TEST(Clusters, UnequalValuesInOneClusterFailWithWitness) {
  std::vector<Vec> coords(40, v1(0.0));
  std::vector<double> values(40, 1.0);
  values[35] = 1.1;
  const ClusterReport rep = cluster_limits(coords, values, 1e-3);
  EXPECT_FALSE(rep.constant_on_clusters());
  EXPECT_NE(rep.witness.find("35"), std::string::npos);
  std::ostringstream os;
  write_report(os, rep);
  EXPECT_NE(os.str().find("constancy: FAIL"), std::string::npos);
  EXPECT_NE(os.str().find("witness:"), std::string::npos);
}

TEST(Clusters, TailMembersPartitioned) {
  std::vector<Vec> coords;
  std::vector<double> values;
  for (int i = 0; i < 101; ++i) {
    coords.push_back(v1(std::cos(0.3 * i)));
    values.push_back(0.0);
  }
  const ClusterReport rep = cluster_limits(coords, values, 0.05);
  std::vector<int> seen(101, 0);
  for (const Cluster& c : rep.clusters) {
    for (std::size_t m : c.members) ++seen[m];
  }
  for (int i = 0; i < 101; ++i) EXPECT_EQ(seen[i], i >= 101 - 26 ? 1 : 0) << i;
}

TEST(Clusters, ValuesAboveStartFlagged) {
  std::vector<Vec> coords(8, v1(0.0));
  std::vector<double> values(8, 2.0);
  values[0] = 1.0;
  EXPECT_FALSE(cluster_limits(coords, values, 1e-3).bounded_by_start());
}

TEST(Clusters, Preconditions) {
  EXPECT_THROW(cluster_limits(std::vector<Vec>{}, std::vector<double>{}, 1.0), ContractViolation);
  EXPECT_THROW(cluster_limits(std::vector<Vec>{v1(0)}, std::vector<double>{0.0}, 0.0), ContractViolation);
}

TEST(Clusters, TorusClustersAcrossTheSeam) {
  const Manifold t1 = Manifold::torus(1);
  DescentTrace<Point> trace;
  for (int i = 0; i < 8; ++i) trace.push(t1.point(v1(i % 2 == 0 ? 1e-9 : 2 * std::numbers::pi - 1e-9)), 0.0, 0.0, 0.0);
  EXPECT_EQ(cluster_limits(t1, trace, 1e-6).clusters.size(), 1u);
  EXPECT_EQ(cluster_limits(trace, 1e-6).clusters.size(), 2u);
}

TEST(Convexity, Verdicts) {
  const Manifold r1 = Manifold::euclidean(1);
  ConvexProbe probe{[&](const Vec& c) { return r1.point(c); }, v1(-1.0), v1(1.0), 200, 4};
  const auto sq = [](const Point& x) { return x.coords[0] * x.coords[0]; };
  const auto neg = [](const Point& x) { return -x.coords[0] * x.coords[0]; };
  const auto lin = [](const Point& x) { return 3.0 * x.coords[0] + 1.0; };
  EXPECT_EQ(convexity_audit(probe, sq, r1).verdict, Convexity::strictly_convex);
  const ConvexityReport bad = convexity_audit(probe, neg, r1);
  EXPECT_EQ(bad.verdict, Convexity::non_convex);
  EXPECT_FALSE(bad.audit.find("convexity_inequality")->passed);
  EXPECT_FALSE(bad.audit.find("convexity_inequality")->detail.empty());
  EXPECT_EQ(convexity_audit(probe, lin, r1).verdict, Convexity::convex);
}

TEST(Convexity, CosineNearItsMinimumIsStrictlyConvex) {
  const Manifold s2 = Manifold::sphere(2);
  const Point p = s2.point((Vec(3) << 0, 0, 1).finished());
  ConvexProbe probe{[&](const Vec& c) { return s2.exp(p, (Vec(3) << c[0], c[1], 0).finished()); },
                    Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), 200, 9};
  const auto f = [&](const Point& x) { return 1.0 - x.coords.dot(p.coords); };
  DescentTrace<Point> trace;
  for (int i = 0; i < 12; ++i) trace.push(p, 0.0, 0.0, 0.0);
  const ClusterReport limits = cluster_limits(s2, trace, 1e-6);
  const ConvexityReport rep = convexity_audit(probe, f, s2, &limits);
  EXPECT_EQ(rep.verdict, Convexity::strictly_convex);
  ASSERT_NE(rep.audit.find("unique_limit_cluster"), nullptr);
  EXPECT_TRUE(rep.audit.passed());
}

TEST(Convexity, RejectsBadProbe) {
  const Manifold r1 = Manifold::euclidean(1);
  ConvexProbe probe{[&](const Vec& c) { return r1.point(c); }, v1(1.0), v1(-1.0), 10, 1};
  EXPECT_THROW(convexity_audit(probe, [](const Point&) { return 0.0; }, r1), ContractViolation);
  probe.lo = v1(-1.0);
  probe.hi = v1(1.0);
  probe.samples = 0;
  EXPECT_THROW(convexity_audit(probe, [](const Point&) { return 0.0; }, r1), ContractViolation);
}
