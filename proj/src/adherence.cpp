#include "glin/adherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace glin {

namespace {

struct DisjointSet {
  std::vector<std::size_t> parent;
  explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

bool ClusterReport::bounded_by_start() const {
  return std::all_of(clusters.begin(), clusters.end(),
                     [&](const Cluster& c) { return std::isfinite(c.f_min) && c.f_max <= f_start; });
}

ClusterReport cluster_limits(const std::vector<Vec>& coords, const std::vector<double>& values, double radius,
                             double f_constancy_tol) {
  if (coords.empty() || coords.size() != values.size()) {
    throw ContractViolation("cluster analysis needs a nonempty trace with one value per iterate");
  }
  if (!(radius > 0.0)) throw ContractViolation("cluster radius must be > 0");
  const std::size_t n = coords.size();
  const std::size_t tail = std::max<std::size_t>(1, (n + 3) / 4);
  const std::size_t first = n - tail;

  DisjointSet sets(tail);
  for (std::size_t i = 0; i < tail; ++i) {
    for (std::size_t j = i + 1; j < tail; ++j) {
      if ((coords[first + i] - coords[first + j]).norm() <= radius) sets.unite(i, j);
    }
  }

  ClusterReport report;
  report.f_constancy_tol = f_constancy_tol;
  report.f_start = values.front();
  std::vector<long> slot(tail, -1);
  for (std::size_t i = 0; i < tail; ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] < 0) {
      slot[root] = static_cast<long>(report.clusters.size());
      Cluster c;
      c.representative = coords[first + root];
      c.f_min = c.f_max = values[first + root];
      report.clusters.push_back(std::move(c));
    }
    Cluster& c = report.clusters[slot[root]];
    c.members.push_back(first + i);
    c.f_min = std::min(c.f_min, values[first + i]);
    c.f_max = std::max(c.f_max, values[first + i]);
  }
  for (const Cluster& c : report.clusters) {
    if (c.spread() > report.worst_spread) {
      report.worst_spread = c.spread();
      std::size_t lo = c.members.front();
      std::size_t hi = lo;
      for (std::size_t m : c.members) {
        if (values[m] < values[lo]) lo = m;
        if (values[m] > values[hi]) hi = m;
      }
      std::ostringstream os;
      os << "iterates " << lo << " and " << hi << " with F = " << format_double(values[lo]) << " and "
         << format_double(values[hi]);
      report.witness = os.str();
    }
  }
  return report;
}

ClusterReport cluster_limits(const Manifold& m, const DescentTrace<Point>& trace, double radius,
                             double f_constancy_tol) {
  std::vector<Vec> coords;
  coords.reserve(trace.size());
  for (const Point& p : trace.iterates) coords.push_back(m.embed(p));
  return cluster_limits(coords, trace.values, radius, f_constancy_tol);
}

ClusterReport cluster_limits(const DescentTrace<Point>& trace, double radius, double f_constancy_tol) {
  std::vector<Vec> coords;
  coords.reserve(trace.size());
  for (const Point& p : trace.iterates) coords.push_back(p.coords);
  return cluster_limits(coords, trace.values, radius, f_constancy_tol);
}

void write_report(std::ostream& os, const ClusterReport& report) {
  os << "clusters: " << report.clusters.size() << "\n";
  for (std::size_t i = 0; i < report.clusters.size(); ++i) {
    const Cluster& c = report.clusters[i];
    os << "cluster_" << i << ".members: " << c.members.size() << "\n";
    os << "cluster_" << i << ".f_min: " << format_double(c.f_min) << "\n";
    os << "cluster_" << i << ".f_spread: " << format_double(c.spread()) << "\n";
    os << "cluster_" << i << ".representative:";
    for (double v : c.representative) os << ' ' << format_double(v);
    os << "\n";
  }
  os << "f_start: " << format_double(report.f_start) << "\n";
  os << "f_constancy_tol: " << format_double(report.f_constancy_tol) << "\n";
  os << "constancy: " << (report.constant_on_clusters() ? "PASS" : "FAIL") << "\n";
  os << "bounded_by_start: " << (report.bounded_by_start() ? "PASS" : "FAIL") << "\n";
  if (!report.constant_on_clusters()) os << "witness: " << report.witness << "\n";
}

std::string to_string(Convexity c) {
  switch (c) {
    case Convexity::strictly_convex: return "strictly-convex";
    case Convexity::convex: return "convex";
    case Convexity::non_convex: return "non-convex";
  }
  return "unknown";
}

ConvexityReport convexity_audit(const ConvexProbe& probe, const std::function<double(const Point&)>& f,
                                const Manifold& m, const ClusterReport* limits) {
  if (probe.samples < 1) throw ContractViolation("convexity audit needs at least one sample");
  if (probe.lo.size() != probe.hi.size() || probe.lo.size() == 0 || !(probe.lo.array() <= probe.hi.array()).all()) {
    throw ContractViolation("convexity probe needs a nonempty box lo <= hi");
  }
  std::mt19937_64 rng(probe.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto draw = [&] {
    Vec c(probe.lo.size());
    for (long i = 0; i < c.size(); ++i) c[i] = probe.lo[i] + (probe.hi[i] - probe.lo[i]) * unit(rng);
    return c;
  };
  const auto fp = [&](const Vec& c) { return f(probe.param(c)); };

  double worst_violation = 0.0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::string violation_witness;
  int collisions = 0;
  for (int s = 0; s < probe.samples; ++s) {
    const Vec c = draw();
    const Vec d = draw();
    const double fc = fp(c);
    const double fd = fp(d);
    if ((c - d).norm() > 1e-9 && m.distance(probe.param(c), probe.param(d)) < 1e-12) ++collisions;
    for (double lambda : {0.25, 0.5, 0.75}) {
      const double lhs = fp(lambda * c + (1.0 - lambda) * d);
      const double rhs = lambda * fc + (1.0 - lambda) * fd;
      if (lhs - rhs > worst_violation) {
        worst_violation = lhs - rhs;
        std::ostringstream os;
        os << "lambda=" << lambda << " F(P(mix))=" << format_double(lhs) << " > " << format_double(rhs);
        violation_witness = os.str();
      }
      if (lambda == 0.5) min_margin = std::min(min_margin, rhs - lhs);
    }
  }

  ConvexityReport out;
  const bool convex = worst_violation <= 1e-10;
  out.verdict = !convex ? Convexity::non_convex : (min_margin > 1e-12 ? Convexity::strictly_convex : Convexity::convex);
  out.audit.title = "convexity audit (" + std::to_string(probe.samples) + " pairs)";
  out.audit.add("convexity_inequality", convex, worst_violation, violation_witness);
  out.audit.add("midpoint_margin", true, min_margin, "verdict " + to_string(out.verdict));
  out.audit.add("parametrization_injective", collisions == 0, collisions);
  if (limits != nullptr && out.verdict == Convexity::strictly_convex) {
    out.audit.add("unique_limit_cluster", limits->clusters.size() == 1, static_cast<double>(limits->clusters.size()));
  }
  return out;
}

}  // namespace glin
