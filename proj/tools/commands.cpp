#include "commands.hpp"

#include "builtins.hpp"
#include "config.hpp"

#include "glin/adherence.hpp"
#include "glin/fixed_point.hpp"
#include "glin/linearization.hpp"
#include "glin/mapping_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace glin::cli {

namespace {

namespace fs = std::filesystem;

Config load_with_overrides(const std::string& path, const Overrides& o) {
  Config c = Config::load(path);
  if (o.seed) c.set("seed", std::to_string(*o.seed));
  if (o.output) c.set("output.dir", *o.output);
  if (o.max_iter) c.set("descent.n_max", std::to_string(*o.max_iter));
  if (o.tol) c.set("descent.eps", format_double(*o.tol));
  return c;
}

fs::path output_path(const ProblemConfig& p, const std::string& name) {
  const fs::path dir(p.output_dir);
  fs::create_directories(dir);
  return dir / name;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path.string());
  return os;
}

std::string describe(const Manifold& m) {
  std::ostringstream os;
  os << to_string(m.kind()) << '(' << m.dim() << ')';
  return os.str();
}

template <class Values>
bool nonincreasing(const Values& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1]) return false;
  }
  return true;
}

/// Writes the report both to the report file and to `out`.
void emit(const ProblemConfig& p, const std::string& text, std::ostream& out) {
  open_output(output_path(p, p.report_file)) << text;
  out << text;
}

void write_header(std::ostream& os, const std::string& command, const std::string& config, const ProblemConfig& p,
                  const Manifold& m) {
  os << "command: " << command << "\n";
  os << "config: " << config << "\n";
  os << "seed: " << p.seed << "\n";
  os << "manifold: " << describe(m) << "\n";
  os << "method: " << glin::describe(p.descent.method) << "\n";
}

void write_stop(std::ostream& os, StopReason stop, std::size_t iterates, const std::string& error) {
  os << "stop: " << to_string(stop) << "\n";
  os << "iterations: " << iterates - 1 << "\n";
  if (!error.empty()) os << "error: " << error << "\n";
  if (stop == StopReason::MaxIterations) os << "warning: maximum number of iterations reached\n";
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int solve_mapping(const std::string& config_path, const ProblemConfig& p, const Manifold& m, std::ostream& out) {
  const Linearization lin(m, p.cutoff_fraction);
  const MapFunctional f = make_map_functional(p, m);
  const DiscreteMap u0 = perturbed_loop(m, p.mapping_m, p.mapping_degree, p.mapping_perturbation);
  const MappingTrace t = run_mapping_descent(lin, f, u0, p.descent, p.s_values);

  const fs::path trace_path = output_path(p, p.trace_file);
  const fs::path map_path = output_path(p, p.map_file);
  {
    std::ofstream os = open_output(trace_path);
    write_mapping_trace_csv(os, t);
  }
  {
    std::ofstream os = open_output(map_path);
    write_map_csv(os, t.trace.last());
  }

  std::ostringstream r;
  write_header(r, "solve", config_path, p, m);
  r << "problem: mapping\n";
  r << "functional: " << p.functional << "\n";
  r << "nodes: " << p.mapping_m << "\n";
  write_stop(r, t.trace.stop, t.trace.size(), t.trace.error);
  r << "initial_F: " << format_double(t.trace.values.front()) << "\n";
  r << "final_F: " << format_double(t.trace.values.back()) << "\n";
  if (p.functional == "dirichlet" && is_circle_target(m)) {
    const double k = static_cast<double>(t.winding.empty() ? p.mapping_degree : t.winding.back());
    const double reference = std::numbers::pi * k * k;
    r << "reference_energy: " << format_double(reference) << "\n";
    if (reference > 0.0) {
      r << "relative_energy_error: " << format_double(std::abs(t.trace.values.back() - reference) / reference)
        << "\n";
    }
  }
  r << "monotone: " << (nonincreasing(t.trace.values) ? "PASS" : "FAIL") << "\n";
  if (!t.winding.empty()) {
    r << "winding_start: " << t.winding.front() << "\n";
    r << "winding_constant: " << (t.winding_constant() ? "PASS" : "FAIL") << "\n";
  }
  const DiscreteMap& last = t.trace.last();
  bool finite = true;
  for (const auto& row : t.sobolev) {
    for (double v : row) finite = finite && std::isfinite(v);
  }
  for (double s : t.s_values) r << "sobolev_norm_s" << format_double(s) << ": " << format_double(sobolev_norm(last, s)) << "\n";
  r << "sobolev_finite: " << (finite ? "PASS" : "FAIL") << "\n";
  const double l2 = last.embedded().norm();
  r << "parseval_residual: " << format_double(std::abs(sobolev_norm(last, 0.0) - l2) / std::max(1.0, l2)) << "\n";
  r << "trace_csv: " << trace_path.string() << "\n";
  r << "map_csv: " << map_path.string() << "\n";
  emit(p, r.str(), out);
  return exit_code(t.trace.stop);
}

int run_fixed_point_problem(const std::string& command, const std::string& config_path, const ProblemConfig& p,
                            const Manifold& m, std::ostream& out) {
  const Linearization lin(m, p.cutoff_fraction);
  const GapFn gap{p.gap};
  const WitnessSet w = make_witnesses(p, m);
  const SelfMap f = make_self_map(p, m);
  FixedPointOptions opts;
  opts.tol_fp = p.fp_tol;
  opts.n_orbit = p.fp_orbit;
  opts.cluster_radius = p.cluster_radius;
  const FixedPointResult res = run_fixed_point(lin, gap, f, start_point(p, m), p.descent, w, opts);

  const fs::path trace_path = output_path(p, p.trace_file);
  {
    std::ofstream os = open_output(trace_path);
    write_trace_csv(os, res.trace);
  }
  std::ostringstream r;
  write_header(r, command, config_path, p, m);
  r << "self_map: " << f.label << "\n";
  write_stop(r, res.trace.stop, res.trace.size(), res.trace.error);
  write_report(r, res.report);
  r << "trace_csv: " << trace_path.string() << "\n";
  emit(p, r.str(), out);
  return exit_code(res.trace.stop);
}

}  // namespace

int exit_code(StopReason stop) {
  switch (stop) {
    case StopReason::ToleranceReached:
    case StopReason::ExactCriticalPoint: return 0;
    case StopReason::MaxIterations: return 2;
    case StopReason::EvaluationFailed: return 1;
  }
  return 1;
}

int cmd_solve(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemConfig p = load_problem(load_with_overrides(config_path, o));
    const Manifold m = make_manifold(p);
    if (p.kind == ProblemKind::mapping) return solve_mapping(config_path, p, m, out);
    if (p.kind == ProblemKind::fixed_point) return run_fixed_point_problem("solve", config_path, p, m, out);

    const Linearization lin(m, p.cutoff_fraction);
    const GapFn gap{p.gap};
    const WitnessSet w = make_witnesses(p, m);
    const Functional f = make_functional(p, m);
    const DescentTrace<Point> trace = run_descent(lin, gap, f, start_point(p, m), p.descent, w);
    const ClusterReport limits = cluster_limits(m, trace, p.cluster_radius, p.f_constancy_tol);

    const fs::path trace_path = output_path(p, p.trace_file);
    {
      std::ofstream os = open_output(trace_path);
      write_trace_csv(os, trace);
    }
    std::ostringstream r;
    write_header(r, "solve", config_path, p, m);
    r << "problem: functional\n";
    r << "functional: " << p.functional << (p.finite_difference ? " (finite differences)" : "") << "\n";
    write_stop(r, trace.stop, trace.size(), trace.error);
    r << "initial_F: " << format_double(trace.values.front()) << "\n";
    r << "final_F: " << format_double(trace.values.back()) << "\n";
    r << "final_grad_norm: " << format_double(trace.grad_norms.back()) << "\n";
    r << "monotone: " << (nonincreasing(trace.values) ? "PASS" : "FAIL") << "\n";
    r << "final_point:";
    for (double c : trace.last().coords) r << ' ' << format_double(c);
    r << "\n";
    write_report(r, limits);
    r << "trace_csv: " << trace_path.string() << "\n";
    emit(p, r.str(), out);
    return exit_code(trace.stop);
  });
}

int cmd_fixed_point(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemConfig p = load_problem(load_with_overrides(config_path, o));
    return run_fixed_point_problem("fixed-point", config_path, p, make_manifold(p), out);
  });
}

int cmd_metric(const std::string& config_path, const Overrides& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemConfig p = load_problem(load_with_overrides(config_path, o));
    const Manifold m = make_manifold(p);
    const GapMetric metric(Linearization(m, p.cutoff_fraction), GapFn{p.gap});
    const WitnessSet w = make_witnesses(p, m);

    const fs::path table_path = output_path(p, p.table_file);
    {
      std::ofstream os = open_output(table_path);
      os << "# glin-metric v1\n";
      os << "pair,d_X,geodesic";
      for (int i = 0; i < m.ambient_dim(); ++i) os << ",x" << i;
      for (int i = 0; i < m.ambient_dim(); ++i) os << ",y" << i;
      os << "\n";
      std::mt19937_64 rng(p.seed);
      for (int i = 0; i < p.metric_pairs; ++i) {
        const std::uint64_t sx = rng();
        const std::uint64_t sy = rng();
        const Point x = m.random_point(sx);
        const Point y = m.random_point(sy);
        os << i << ',' << format_double(metric.dist_x(x, y, w)) << ',' << format_double(m.distance(x, y));
        for (double c : x.coords) os << ',' << format_double(c);
        for (double c : y.coords) os << ',' << format_double(c);
        os << "\n";
      }
    }
    const AuditReport audit = metric_audit(metric, w, p.metric_triples, p.seed);
    std::ostringstream r;
    r << "command: metric\n";
    r << "config: " << config_path << "\n";
    r << "seed: " << p.seed << "\n";
    r << "manifold: " << describe(m) << "\n";
    r << "gap: " << to_string(p.gap) << "\n";
    r << "witnesses: " << w.points.size() << "\n";
    write_report(r, audit);
    r << "table_csv: " << table_path.string() << "\n";
    emit(p, r.str(), out);
    return audit.passed() ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------------------
// check

namespace {

struct Check {
  std::string name;
  std::function<AuditReport(std::uint64_t seed, bool faulty)> run;
};

AuditReport linearization_check(const Manifold& m, std::uint64_t seed, bool faulty) {
  const Linearization lin(m);
  if (!faulty) return check_linearization(lin, 100, seed);
  // Overshooting delta: twice the saturated geodesic argument.
  const DeltaFn delta = [&lin](const BundleElem& e) {
    const Vec v = lin.manifold().sharp(e.xi).vec;
    const double s = 1.0 + e.k;
    const Vec arg = 2.0 * lin.r() * v / std::sqrt(1.0 + s * s * v.squaredNorm());
    return std::make_pair(e.base, lin.manifold().exp(e.base, arg));
  };
  const NuFn nu = [&lin](const Point& x, const Point& y) { return lin.nu(x, y); };
  return check_linearization(lin, nu, delta, 100, seed);
}

AuditReport method_check(const MethodKind& method, std::uint64_t seed, bool faulty) {
  if (!faulty) return method_contract_audit(method, 100, seed, 10);
  // Jumps to the right end of the interval whatever the values there.
  const MethodFn broken = [](const ScalarPath& f, double) { return f.b; };
  return method_contract_audit(broken, describe(method) + " (faulty)", 100, seed, 10);
}

AuditReport parseval_check(std::uint64_t seed, bool faulty) {
  AuditReport rep;
  rep.title = "Parseval identity for the s = 0 norm";
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (const Manifold& m : {Manifold::sphere(1), Manifold::sphere(2), Manifold::torus(2)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int n = 4 << (trial % 6);
      std::vector<Point> values;
      for (int j = 0; j < n; ++j) values.push_back(m.random_point(rng()));
      const DiscreteMap u(m, std::move(values));
      const double l2 = u.embedded().norm();
      const double s0 = sobolev_norm(u, 0.0) * (faulty ? 1.0 + 1e-9 : 1.0);
      worst = std::max(worst, std::abs(s0 - l2) / l2);
    }
  }
  // Raw samples as well, so that off-manifold data is covered.
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXd a(3, 2 * (trial + 2));
    for (long i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
    const double s0 = sobolev_norm(a, 0.0) * (faulty ? 1.0 + 1e-9 : 1.0);
    worst = std::max(worst, std::abs(s0 - a.norm()) / a.norm());
  }
  rep.add("parseval_relative_residual", worst <= 1e-12, worst, "tolerance 1e-12");
  return rep;
}

AuditReport gradient_check(std::uint64_t seed, bool faulty) {
  AuditReport rep;
  rep.title = "finite-difference vs closed-form differentials";
  const auto compare = [&](const std::string& name, const Manifold& m, const Functional& f) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Point x = m.random_point(seed + 101 * i);
      Vec exact = f.differential(x).covec;
      if (faulty) exact *= 1.01;
      const Vec fd = finite_difference_differential(m, f.eval, x, 1e-6).covec;
      worst = std::max(worst, (fd - exact).norm() / std::max(1.0, exact.norm()));
    }
    rep.add(name, worst <= 1e-5, worst, "relative tolerance 1e-5");
  };
  const Manifold s2 = Manifold::sphere(2);
  const Manifold t2 = Manifold::torus(2);
  const Manifold r3 = Manifold::euclidean(3);
  compare("cosine_on_sphere", s2, cosine_functional(s2, s2.point(Vec::Unit(3, 2))));
  compare("height_on_torus", t2, height_functional(t2));
  compare("quadratic_on_euclidean", r3, quadratic_functional(r3, r3.point(Vec::Ones(3))));

  // Loop energy on S^2 against node-wise central differences.
  const Manifold target = Manifold::sphere(2);
  const DiscreteMap u = perturbed_loop(target, 16, 1, 0.4);
  MapFunctional fd = dirichlet_functional();
  fd.differential = nullptr;
  const LiftedCovector a = dirichlet_differential(u);
  const LiftedCovector b = finite_difference_differential(fd, u);
  double worst = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const Vec exact = faulty ? Vec(1.01 * a.nodes[j].covec) : a.nodes[j].covec;
    worst = std::max(worst, (b.nodes[j].covec - exact).norm() / std::max(1.0, exact.norm()));
  }
  rep.add("dirichlet_on_loops", worst <= 1e-5, worst, "relative tolerance 1e-5");
  return rep;
}

const std::vector<Check>& checks() {
  static const std::vector<Check> all = {
      {"linearization.euclidean",
       [](std::uint64_t s, bool f) { return linearization_check(Manifold::euclidean(3), s, f); }},
      {"linearization.sphere", [](std::uint64_t s, bool f) { return linearization_check(Manifold::sphere(2), s, f); }},
      {"linearization.torus", [](std::uint64_t s, bool f) { return linearization_check(Manifold::torus(2), s, f); }},
      {"method.grid_refine", [](std::uint64_t s, bool f) { return method_check(GridRefine{}, s, f); }},
      {"method.golden_section", [](std::uint64_t s, bool f) { return method_check(GoldenSection{}, s, f); }},
      {"method.armijo_backtrack", [](std::uint64_t s, bool f) { return method_check(ArmijoBacktrack{}, s, f); }},
      {"metric.sphere",
       [](std::uint64_t s, bool f) {
         const Manifold m = Manifold::sphere(2);
         const GapMetric metric(Linearization(m), GapFn{f ? GapShape::null_cone : GapShape::bounded_norm});
         return metric_audit(metric, WitnessSet::grid(m, 128), 200, s);
       }},
      {"sobolev.parseval", parseval_check},
      {"descent.gradient", gradient_check},
  };
  return all;
}

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> names;
  for (const Check& c : checks()) names.push_back(c.name);
  return names;
}

int cmd_check(const CheckOptions& opts, const Overrides& o, std::ostream& out, std::ostream& err) {
  if (opts.list) {
    for (const std::string& n : check_names()) out << n << "\n";
    return 0;
  }
  const auto names = check_names();
  if (!opts.inject_fault.empty() && std::find(names.begin(), names.end(), opts.inject_fault) == names.end()) {
    err << "error: --inject-fault: unknown check '" << opts.inject_fault << "' (see --list)\n";
    return 1;
  }
  return guarded(err, [&] {
    const std::uint64_t seed = o.seed.value_or(20240611);
    std::ostringstream r;
    r << "command: check\n";
    r << "seed: " << seed << "\n";
    if (!opts.inject_fault.empty()) r << "injected_fault: " << opts.inject_fault << "\n";
    int failed = 0;
    for (const Check& c : checks()) {
      const AuditReport rep = c.run(seed, c.name == opts.inject_fault);
      r << "\n[" << c.name << "]\n";
      write_report(r, rep);
      if (!rep.passed()) ++failed;
    }
    r << "\nchecks_run: " << checks().size() << "\n";
    r << "checks_failed: " << failed << "\n";
    r << "verdict: " << (failed == 0 ? "PASS" : "FAIL") << "\n";
    out << r.str();
    const char* env = std::getenv("GLIN_OUTPUT_DIR");
    if (o.output || (env != nullptr && *env != '\0')) {
      const fs::path dir(o.output ? *o.output : std::string(env));
      fs::create_directories(dir);
      open_output(dir / "check_report.txt") << r.str();
    }
    return failed == 0 ? 0 : 1;
  });
}

}  // namespace glin::cli
