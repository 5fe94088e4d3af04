#include "glin/mapping_space.hpp"

#include "glin/errors.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>

namespace glin {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_same_shape(const DiscreteMap& f, const DiscreteMap& g) {
  if (f.size() != g.size()) throw ShapeError("maps are sampled on different grids");
  if (!(f.target() == g.target())) throw ShapeError("maps have different targets");
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

/// Plans are created under a lock (FFTW planning is not thread-safe) and cached per size;
/// execution uses the new-array interface on freshly aligned buffers.
fftw_plan r2c_plan(int m) {
  static std::mutex mu;
  static std::map<int, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto it = plans.find(m);
  if (it != plans.end()) return it->second;
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(m));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(m / 2 + 1));
  fftw_plan p = fftw_plan_dft_r2c_1d(m, in.get(), out.get(), FFTW_ESTIMATE);
  plans.emplace(m, p);
  return p;
}

/// Unitary coefficients |u_k|^2 summed over components, for k = 0..m/2.
std::vector<double> power_half_spectrum(const Eigen::MatrixXd& samples) {
  const int m = static_cast<int>(samples.cols());
  if (m < 2 || m % 2 != 0) throw ShapeError("Sobolev norms need an even number of samples");
  const fftw_plan plan = r2c_plan(m);
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(m));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(m / 2 + 1));
  std::vector<double> power(m / 2 + 1, 0.0);
  for (long c = 0; c < samples.rows(); ++c) {
    for (int j = 0; j < m; ++j) in.get()[j] = samples(c, j);
    fftw_execute_dft_r2c(plan, in.get(), out.get());
    for (int k = 0; k <= m / 2; ++k) {
      const double re = out.get()[k][0];
      const double im = out.get()[k][1];
      power[k] += (re * re + im * im) / m;
    }
  }
  return power;
}

double sobolev_weight(int k, double s) { return std::pow(1.0 + static_cast<double>(k) * k, s); }

}  // namespace

DiscreteMap::DiscreteMap(Manifold target, std::vector<Point> values)
    : target_(std::move(target)), values_(std::move(values)) {
  const int m = static_cast<int>(values_.size());
  if (m < 4 || m % 2 != 0) throw ShapeError("discrete maps need an even number of nodes, at least 4");
  for (const Point& p : values_) {
    if (!target_.contains(p)) throw ShapeError("map value does not lie on the target manifold");
  }
}

DiscreteMap DiscreteMap::sample(const Manifold& target, int m, const std::function<Vec(double)>& fn) {
  std::vector<Point> values;
  values.reserve(m);
  for (int j = 0; j < m; ++j) values.push_back(target.point(fn(kTwoPi * j / m)));
  return {target, std::move(values)};
}

double DiscreteMap::grid_point(int j) const { return kTwoPi * j / size(); }
double DiscreteMap::spacing() const { return kTwoPi / size(); }

Eigen::MatrixXd DiscreteMap::embedded() const {
  Eigen::MatrixXd e(ambient_dim(), size());
  for (int j = 0; j < size(); ++j) e.col(j) = target_.embed(values_[j]);
  return e;
}

LiftedBundleElem lifted_nu(const Linearization& lin, const DiscreteMap& f, const DiscreteMap& g) {
  require_same_shape(f, g);
  const int m = f.size();
  std::vector<BundleElem> sections(m);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) sections[j] = lin.nu(f[j], g[j]);
  return {f, std::move(sections)};
}

std::pair<DiscreteMap, DiscreteMap> lifted_delta(const Linearization& lin, const LiftedBundleElem& e) {
  const int m = e.base.size();
  if (static_cast<int>(e.sections.size()) != m) throw ShapeError("section count does not match the base grid");
  std::vector<Point> second(m);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) second[j] = lin.delta(e.sections[j]).second;
  std::vector<Point> first(e.base.values());
  return {DiscreteMap(e.base.target(), std::move(first)), DiscreteMap(e.base.target(), std::move(second))};
}

namespace serial {

LiftedBundleElem lifted_nu(const Linearization& lin, const DiscreteMap& f, const DiscreteMap& g) {
  require_same_shape(f, g);
  std::vector<BundleElem> sections;
  sections.reserve(f.size());
  for (int j = 0; j < f.size(); ++j) sections.push_back(lin.nu(f[j], g[j]));
  return {f, std::move(sections)};
}

std::pair<DiscreteMap, DiscreteMap> lifted_delta(const Linearization& lin, const LiftedBundleElem& e) {
  if (static_cast<int>(e.sections.size()) != e.base.size()) {
    throw ShapeError("section count does not match the base grid");
  }
  std::vector<Point> second;
  second.reserve(e.sections.size());
  for (const BundleElem& s : e.sections) second.push_back(lin.delta(s).second);
  return {e.base, DiscreteMap(e.base.target(), std::move(second))};
}

double dirichlet_energy(const DiscreteMap& u) {
  const Eigen::MatrixXd e = u.embedded();
  const int m = u.size();
  double sum = 0.0;
  for (int j = 0; j < m; ++j) sum += (e.col((j + 1) % m) - e.col(j)).squaredNorm();
  return 0.5 * sum / u.spacing();
}

LiftedCovector dirichlet_differential(const DiscreteMap& u) {
  const Eigen::MatrixXd e = u.embedded();
  const int m = u.size();
  const double h = u.spacing();
  LiftedCovector g;
  g.nodes.reserve(m);
  for (int j = 0; j < m; ++j) {
    const Vec grad = (2.0 * e.col(j) - e.col((j + 1) % m) - e.col((j + m - 1) % m)) / h;
    g.nodes.push_back(u.target().pullback_gradient(u[j], grad));
  }
  return g;
}

}  // namespace serial

double sobolev_norm(const Eigen::MatrixXd& samples, double s) {
  const std::vector<double> power = power_half_spectrum(samples);
  const int half = static_cast<int>(power.size()) - 1;
  double sum = sobolev_weight(0, s) * power[0] + sobolev_weight(half, s) * power[half];
  for (int k = 1; k < half; ++k) sum += 2.0 * sobolev_weight(k, s) * power[k];
  return std::sqrt(sum);
}

double sobolev_norm(const DiscreteMap& u, double s) { return sobolev_norm(u.embedded(), s); }

double sobolev_distance(const DiscreteMap& u, const DiscreteMap& v, double s) {
  require_same_shape(u, v);
  return sobolev_norm(Eigen::MatrixXd(u.embedded() - v.embedded()), s);
}

std::vector<SpectrumRow> sobolev_spectrum(const Eigen::MatrixXd& samples, double s) {
  const std::vector<double> power = power_half_spectrum(samples);
  const int half = static_cast<int>(power.size()) - 1;
  std::vector<SpectrumRow> rows;
  for (int k = -half + 1; k <= half; ++k) {
    rows.push_back({k, std::pow(1.0 + static_cast<double>(k) * k, 0.5 * s), std::sqrt(power[std::abs(k)])});
  }
  return rows;
}

void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows) {
  os << "# glin-spectrum v1\n";
  os << "k,multiplier,coefficient_norm\n";
  for (const SpectrumRow& r : rows) {
    os << r.k << ',' << format_double(r.multiplier) << ',' << format_double(r.coefficient_norm) << "\n";
  }
}

double dirichlet_energy(const DiscreteMap& u) {
  const Eigen::MatrixXd e = u.embedded();
  const int m = u.size();
  std::vector<double> terms(m);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) terms[j] = (e.col((j + 1) % m) - e.col(j)).squaredNorm();
  // Summed in node order so the result does not depend on the thread count.
  double sum = 0.0;
  for (double t : terms) sum += t;
  return 0.5 * sum / u.spacing();
}

LiftedCovector dirichlet_differential(const DiscreteMap& u) {
  const Eigen::MatrixXd e = u.embedded();
  const int m = u.size();
  const double h = u.spacing();
  LiftedCovector g;
  g.nodes.resize(m);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) {
    const Vec grad = (2.0 * e.col(j) - e.col((j + 1) % m) - e.col((j + m - 1) % m)) / h;
    g.nodes[j] = u.target().pullback_gradient(u[j], grad);
  }
  return g;
}

MapFunctional dirichlet_functional() {
  return {[](const DiscreteMap& u) { return dirichlet_energy(u); },
          [](const DiscreteMap& u) { return dirichlet_differential(u); }, 1e-6};
}

MapFunctional sobolev_tracking_functional(DiscreteMap target, double s) {
  return {[target = std::move(target), s](const DiscreteMap& u) {
            const double n = sobolev_distance(u, target, s);
            return 0.5 * n * n;
          },
          {},
          1e-6};
}

LiftedCovector finite_difference_differential(const MapFunctional& f, const DiscreteMap& u) {
  const Manifold& n = u.target();
  const int m = u.size();
  const double h = f.fd_step;
  LiftedCovector g;
  g.nodes.resize(m);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) {
    std::vector<Point> work(u.values());
    const auto value_with = [&](const Point& p) {
      work[j] = p;
      return f.eval(DiscreteMap(n, work));
    };
    g.nodes[j] = finite_difference_differential(n, value_with, u[j], h);
  }
  return g;
}

double MappingSpace::value(const DiscreteMap& u) const {
  const double v = f_.eval(u);
  if (!std::isfinite(v)) throw EvaluationError("loop objective is not finite");
  return v;
}

LiftedCovector MappingSpace::differential(const DiscreteMap& u) const {
  if (f_.differential) return f_.differential(u);
  return finite_difference_differential(f_, u);
}

double MappingSpace::norm(const LiftedCovector& g) const {
  double s = 0.0;
  for (const CotangentVec& c : g.nodes) s += c.covec.squaredNorm();
  return std::sqrt(s);
}

DiscreteMap MappingSpace::endpoint(const LiftedCovector& g, const DiscreteMap& u, double t) const {
  if (t == 0.0) return u;
  const int m = u.size();
  std::vector<Point> out(m);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) {
    // delta((u_j, t g_j, 0)).1 without materializing the bundle element.
    const Vec& v = g.nodes[j].covec;
    const double n2 = v.squaredNorm();
    if (n2 == 0.0) {
      out[j] = u[j];
    } else {
      const double scale = lin_.r() * t / std::sqrt(1.0 + t * t * n2);
      out[j] = u.target().exp(u[j], Vec(scale * v));
    }
  }
  return {u.target(), std::move(out)};
}

double lifted_gap(const LiftedBundleElem& e) {
  const double h = e.base.spacing();
  double s = 0.0;
  for (const BundleElem& b : e.sections) s += h * (b.xi.covec.squaredNorm() + b.k * b.k);
  return saturate(std::sqrt(s));
}

double MappingSpace::displacement(const DiscreteMap& u, const DiscreteMap& v) const {
  if (displacement_ == DisplacementKind::geodesic) {
    double s = 0.0;
    for (int j = 0; j < u.size(); ++j) {
      const double d = u.target().distance(u[j], v[j]);
      s += u.spacing() * d * d;
    }
    return std::sqrt(s);
  }
  return std::max(lifted_gap(lifted_nu(lin_, u, v)), lifted_gap(lifted_nu(lin_, v, u)));
}

bool is_circle_target(const Manifold& m) {
  return m.dim() == 1 && (m.kind() == ManifoldKind::sphere || m.kind() == ManifoldKind::torus);
}

int winding_number(const DiscreteMap& u) {
  if (!is_circle_target(u.target())) throw ShapeError("winding number needs a circle target");
  const Eigen::MatrixXd e = u.embedded();
  const int m = u.size();
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    const int k = (j + 1) % m;
    total += wrap_angle_difference(std::atan2(e(1, j), e(0, j)), std::atan2(e(1, k), e(0, k)));
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

bool MappingTrace::winding_constant() const {
  return std::all_of(winding.begin(), winding.end(), [&](int w) { return w == winding.front(); });
}

MappingTrace run_mapping_descent(const Linearization& lin, const MapFunctional& f, const DiscreteMap& u0,
                                 const DescentConfig& cfg, const std::vector<double>& s_values) {
  if (!(u0.target() == lin.manifold())) throw ShapeError("linearization and loop target differ");
  const MappingSpace space(lin, f, cfg.displacement);
  MappingTrace out;
  out.trace = run_descent_loop(space, u0, cfg);
  out.s_values = s_values;
  const DiscreteMap& last = out.trace.last();
  const bool circle = is_circle_target(u0.target());
  for (std::size_t n = 0; n < out.trace.size(); ++n) {
    const DiscreteMap& u = out.trace.iterates[n];
    std::vector<double> row;
    for (double s : s_values) row.push_back(sobolev_distance(u, last, s));
    out.sobolev.push_back(std::move(row));
    if (circle) out.winding.push_back(winding_number(u));
    double step = 0.0;
    if (n > 0) {
      const DiscreteMap& prev = out.trace.iterates[n - 1];
      for (int j = 0; j < u.size(); ++j) step = std::max(step, u.target().distance(prev[j], u[j]));
    }
    out.max_node_step.push_back(step);
  }
  return out;
}

void write_map_csv(std::ostream& os, const DiscreteMap& u) {
  os << "# glin-map v1\n";
  os << "t";
  for (int i = 0; i < u.target().ambient_dim(); ++i) os << ",a" << i;
  os << "\n";
  for (int j = 0; j < u.size(); ++j) {
    os << format_double(u.grid_point(j));
    for (double c : u[j].coords) os << ',' << format_double(c);
    os << "\n";
  }
}

void write_mapping_trace_csv(std::ostream& os, const MappingTrace& t) {
  os << "# glin-mapping-trace v1\n";
  os << "iter,t_n,d_n,F,winding,max_node_step";
  for (double s : t.s_values) os << ",sobolev_s" << format_double(s);
  os << "\n";
  for (std::size_t n = 0; n < t.trace.size(); ++n) {
    os << n << ',' << format_double(t.trace.steps[n]) << ',' << format_double(t.trace.displacements[n]) << ','
       << format_double(t.trace.values[n]) << ',';
    if (!t.winding.empty()) os << t.winding[n];
    os << ',' << format_double(t.max_node_step[n]);
    for (double v : t.sobolev[n]) os << ',' << format_double(v);
    os << "\n";
  }
  os << "# stop=" << to_string(t.trace.stop) << "\n";
}

}  // namespace glin
