#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace glin::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

template <class T>
bool parse_integer(const std::string& s, T& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

const std::vector<std::string>& Config::schema() {
  static const std::vector<std::string> keys = {
      "seed",
      "manifold.kind",
      "manifold.dim",
      "manifold.r",
      "linearization.cutoff_fraction",
      "gap.shape",
      "witness.policy",
      "witness.count",
      "witness.seed",
      "method.variant",
      "method.levels",
      "method.points_per_level",
      "method.max_iterations",
      "method.c",
      "method.shrink",
      "method.max_backtracks",
      "descent.eps",
      "descent.n_max",
      "descent.t_half",
      "descent.grad_zero_tol",
      "descent.displacement",
      "problem.kind",
      "problem.functional",
      "problem.differential",
      "problem.p",
      "problem.start",
      "mapping.m",
      "mapping.degree",
      "mapping.perturbation",
      "mapping.s_values",
      "fixed_point.map",
      "fixed_point.angle",
      "fixed_point.factor",
      "fixed_point.tol",
      "fixed_point.n_orbit",
      "adherence.radius",
      "adherence.f_tol",
      "metric.triples",
      "metric.pairs",
      "output.dir",
      "output.trace",
      "output.report",
      "output.map",
      "output.table",
  };
  return keys;
}

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  c.source_ = source;
  const auto& keys = schema();
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    std::ostringstream where;
    where << source << ':' << line << ": ";
    if (eq == std::string::npos) throw ConfigError(where.str() + "expected 'key = value', got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError(where.str() + "missing key before '='");
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(where.str() + "field '" + key + "': unknown key");
    }
    if (value.empty()) throw ConfigError(where.str() + "field '" + key + "': empty value");
    if (c.entries_.count(key) != 0) {
      throw ConfigError(where.str() + "field '" + key + "': duplicate key (first set on line " +
                        std::to_string(c.entries_[key].line) + ")");
    }
    c.entries_[key] = {value, line};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot read config file");
  return parse(in, path);
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = schema();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError("unknown key '" + key + "'");
  entries_[key] = {value, 0};
}

void Config::reject(const std::string& key, const std::string& what) const {
  const Entry* e = find(key);
  std::ostringstream os;
  if (e != nullptr && e->line > 0) {
    os << source_ << ':' << e->line << ": ";
  } else {
    os << (e == nullptr ? source_ + " (default)" : std::string("command line")) << ": ";
  }
  os << "field '" << key << "': " << what;
  throw ConfigError(os.str());
}

const Config::Entry* Config::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e == nullptr ? fallback : e->value;
}

double Config::get_double(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  double v = 0.0;
  if (!parse_double(e->value, v)) reject(key, "expected a number, got '" + e->value + "'");
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  int v = 0;
  if (!parse_integer(e->value, v)) reject(key, "expected an integer, got '" + e->value + "'");
  return v;
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  std::uint64_t v = 0;
  if (!parse_integer(e->value, v)) reject(key, "expected a nonnegative integer, got '" + e->value + "'");
  return v;
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
  const Entry* e = find(key);
  if (e == nullptr) return fallback;
  std::vector<double> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_double(trim(item), v)) reject(key, "expected comma-separated numbers, got '" + e->value + "'");
    out.push_back(v);
  }
  return out;
}

ProblemConfig load_problem(const Config& c) {
  ProblemConfig p;
  const auto fail = [&](const std::string& key, const std::string& what) { c.reject(key, what); };
  const auto choose = [&](const std::string& key, const std::string& fallback,
                          const std::vector<std::string>& allowed) {
    const std::string v = c.get_string(key, fallback);
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      fail(key, "expected one of {" + list + "}, got '" + v + "'");
    }
    return v;
  };

  p.seed = c.get_u64("seed", 1);

  p.manifold_kind = manifold_kind_from_string(choose("manifold.kind", "sphere", {"euclidean", "sphere", "torus"}));
  p.manifold_dim = c.get_int("manifold.dim", 2);
  p.manifold_r = c.get_double("manifold.r", 1.0);
  if (p.manifold_dim < 1) fail("manifold.dim", "must be >= 1");
  if (!(p.manifold_r > 0.0)) fail("manifold.r", "must be > 0");
  p.cutoff_fraction = c.get_double("linearization.cutoff_fraction", 0.9);
  if (!(p.cutoff_fraction > 0.0 && p.cutoff_fraction <= 1.0)) fail("linearization.cutoff_fraction", "must be in (0, 1]");
  p.gap = gap_shape_from_string(choose("gap.shape", "bounded_norm", {"bounded_norm", "null_cone"}));

  p.witness_policy = choose("witness.policy", "grid", {"grid", "random"}) == "grid" ? WitnessPolicy::grid
                                                                                     : WitnessPolicy::random;
  p.witness_count = c.get_int("witness.count", 64);
  if (p.witness_count < 1) fail("witness.count", "must be >= 1 (the witness set may not be empty)");
  p.witness_seed = c.get_u64("witness.seed", p.seed);

  const std::string variant = choose("method.variant", "grid_refine", {"grid_refine", "golden_section", "armijo_backtrack"});
  if (variant == "grid_refine") {
    p.descent.method = GridRefine{c.get_int("method.levels", 6), c.get_int("method.points_per_level", 33)};
  } else if (variant == "golden_section") {
    p.descent.method = GoldenSection{c.get_int("method.max_iterations", 100)};
  } else {
    p.descent.method = ArmijoBacktrack{c.get_double("method.c", 1e-4), c.get_double("method.shrink", 0.5),
                                       c.get_int("method.max_backtracks", 60)};
  }
  try {
    validate(p.descent.method);
  } catch (const ContractViolation& e) {
    fail("method.variant", e.what());
  }

  p.descent.eps = c.get_double("descent.eps", 1e-10);
  p.descent.n_max = c.get_int("descent.n_max", 200);
  p.descent.t_half = c.get_double("descent.t_half", 1.0);
  p.descent.grad_zero_tol = c.get_double("descent.grad_zero_tol", 1e-12);
  p.descent.displacement =
      choose("descent.displacement", "gap_metric", {"gap_metric", "geodesic"}) == "gap_metric"
          ? DisplacementKind::gap_metric
          : DisplacementKind::geodesic;
  if (!(p.descent.eps >= 0.0)) fail("descent.eps", "must be >= 0");
  if (p.descent.n_max < 1) fail("descent.n_max", "must be >= 1");
  if (!(p.descent.t_half > 0.0)) fail("descent.t_half", "must be > 0");
  if (!(p.descent.grad_zero_tol >= 0.0)) fail("descent.grad_zero_tol", "must be >= 0");

  const std::string kind = choose("problem.kind", "functional", {"functional", "mapping", "fixed_point"});
  p.kind = kind == "functional" ? ProblemKind::functional
           : kind == "mapping"  ? ProblemKind::mapping
                                : ProblemKind::fixed_point;
  p.functional = choose("problem.functional", p.kind == ProblemKind::mapping ? "dirichlet" : "cosine",
                        {"cosine", "height", "quadratic", "dirichlet", "sobolev_tracking"});
  p.finite_difference =
      choose("problem.differential", "closed_form", {"closed_form", "finite_difference"}) == "finite_difference";
  p.p = c.get_list("problem.p", {});
  p.start = c.get_list("problem.start", {});

  p.mapping_m = c.get_int("mapping.m", 256);
  p.mapping_degree = c.get_int("mapping.degree", 1);
  p.mapping_perturbation = c.get_double("mapping.perturbation", 0.3);
  p.s_values = c.get_list("mapping.s_values", {-1.0, 0.0});
  if (p.mapping_m < 4 || p.mapping_m % 2 != 0) fail("mapping.m", "must be even and >= 4");

  p.self_map = choose("fixed_point.map", "contraction", {"identity", "rotation", "contraction"});
  p.fp_angle = c.get_double("fixed_point.angle", p.fp_angle);
  p.fp_factor = c.get_double("fixed_point.factor", 0.5);
  p.fp_tol = c.get_double("fixed_point.tol", 1e-8);
  p.fp_orbit = c.get_int("fixed_point.n_orbit", 5);
  if (!(p.fp_tol > 0.0)) fail("fixed_point.tol", "must be > 0");
  if (p.fp_orbit < 0) fail("fixed_point.n_orbit", "must be >= 0");

  p.cluster_radius = c.get_double("adherence.radius", 1e-6);
  p.f_constancy_tol = c.get_double("adherence.f_tol", 1e-6);
  if (!(p.cluster_radius > 0.0)) fail("adherence.radius", "must be > 0");

  p.metric_triples = c.get_int("metric.triples", 200);
  p.metric_pairs = c.get_int("metric.pairs", 20);
  if (p.metric_triples < 1) fail("metric.triples", "must be >= 1");
  if (p.metric_pairs < 0) fail("metric.pairs", "must be >= 0");

  const char* env = std::getenv("GLIN_OUTPUT_DIR");
  p.output_dir = c.get_string("output.dir", env != nullptr && *env != '\0' ? env : ".");
  p.trace_file = c.get_string("output.trace", "trace.csv");
  p.report_file = c.get_string("output.report", "report.txt");
  p.map_file = c.get_string("output.map", "final_map.csv");
  p.table_file = c.get_string("output.table", "metric.csv");
  return p;
}

Manifold make_manifold(const ProblemConfig& p) { return {p.manifold_kind, p.manifold_dim, p.manifold_r}; }

WitnessSet make_witnesses(const ProblemConfig& p, const Manifold& m) {
  return p.witness_policy == WitnessPolicy::grid ? WitnessSet::grid(m, p.witness_count)
                                                 : WitnessSet::random(m, p.witness_seed, p.witness_count);
}

}  // namespace glin::cli
