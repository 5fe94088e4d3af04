#include "glin/method.hpp"

#include "glin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

namespace glin {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

/// Tracks the incumbent; a candidate replaces it only when strictly better.
class Incumbent {
public:
  Incumbent(const ScalarPath& f, double x) : f_(f), x_(x), fx_(evaluate(x)) {}

  double evaluate(double t) const {
    const double v = f_.eval(t);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "path value is not finite at t = " << t;
      throw EvaluationError(os.str());
    }
    return v;
  }

  double offer(double t) {
    t = std::clamp(t, f_.a, f_.b);
    const double v = evaluate(t);
    if (v < fx_) {
      x_ = t;
      fx_ = v;
    }
    return v;
  }

  double x() const { return x_; }
  double fx() const { return fx_; }

private:
  const ScalarPath& f_;
  double x_;
  double fx_;
};

double grid_refine(const GridRefine& g, const ScalarPath& f, double x) {
  Incumbent best(f, x);
  double lo = f.a;
  double hi = f.b;
  for (int level = 0; level < g.levels; ++level) {
    const double spacing = (hi - lo) / (g.points_per_level - 1);
    for (int i = 0; i < g.points_per_level; ++i) {
      best.offer(i + 1 == g.points_per_level ? hi : lo + spacing * i);
    }
    lo = std::max(f.a, best.x() - spacing);
    hi = std::min(f.b, best.x() + spacing);
    if (!(hi > lo)) break;
  }
  return best.x();
}

double golden_section(const GoldenSection& g, const ScalarPath& f, double x) {
  Incumbent best(f, x);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = f.a;
  double hi = f.b;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = best.offer(c);
  double fd = best.offer(d);
  const double tol = 1e-14 * std::max(1.0, f.b - f.a);
  for (int i = 0; i < g.max_iterations && hi - lo > tol; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = best.offer(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = best.offer(d);
    }
  }
  best.offer(0.5 * (lo + hi));
  best.offer(f.a);
  best.offer(f.b);
  return best.x();
}

double armijo(const ArmijoBacktrack& g, const ScalarPath& f, double x) {
  Incumbent best(f, x);
  const double fx = best.fx();
  const double h = 1e-7 * (f.b - f.a);
  const double lo = std::max(f.a, x - h);
  const double hi = std::min(f.b, x + h);
  const double slope = (best.evaluate(hi) - best.evaluate(lo)) / (hi - lo);
  if (slope == 0.0) return x;
  const double dir = slope < 0.0 ? 1.0 : -1.0;
  double step = dir > 0.0 ? f.b - x : x - f.a;
  for (int i = 0; i < g.max_backtracks && step > 0.0; ++i, step *= g.shrink) {
    const double t = x + dir * step;
    const double ft = best.evaluate(t);
    if (ft <= fx + g.c * slope * (t - x) && ft < fx) {
      best.offer(t);
      break;
    }
  }
  return best.x();
}

}  // namespace

std::string describe(const MethodKind& m) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const GridRefine& g) { os << "grid_refine(" << g.levels << "," << g.points_per_level << ")"; },
                 [&](const GoldenSection& g) { os << "golden_section(" << g.max_iterations << ")"; },
                 [&](const ArmijoBacktrack& g) { os << "armijo_backtrack(" << g.c << "," << g.shrink << ")"; },
             },
             m);
  return os.str();
}

void validate(const MethodKind& m) {
  std::visit(overloaded{
                 [](const GridRefine& g) {
                   if (g.levels < 1 || g.points_per_level < 2) {
                     throw ContractViolation("grid_refine needs levels >= 1 and points_per_level >= 2");
                   }
                 },
                 [](const GoldenSection& g) {
                   if (g.max_iterations < 1) throw ContractViolation("golden_section needs iterations >= 1");
                 },
                 [](const ArmijoBacktrack& g) {
                   if (!(g.c > 0.0 && g.c < 1.0) || !(g.shrink > 0.0 && g.shrink < 1.0) || g.max_backtracks < 1) {
                     throw ContractViolation("armijo_backtrack needs c, shrink in (0, 1) and backtracks >= 1");
                   }
                 },
             },
             m);
}

double apply_method(const MethodKind& m, const ScalarPath& f, double x) {
  if (!(f.a < f.b)) throw ContractViolation("path interval must satisfy a < b");
  if (!(x >= f.a && x <= f.b)) {
    std::ostringstream os;
    os << "start " << x << " lies outside [" << f.a << ", " << f.b << "]";
    throw ContractViolation(os.str());
  }
  validate(m);
  return std::visit(overloaded{
                        [&](const GridRefine& g) { return grid_refine(g, f, x); },
                        [&](const GoldenSection& g) { return golden_section(g, f, x); },
                        [&](const ArmijoBacktrack& g) { return armijo(g, f, x); },
                    },
                    m);
}

ScalarPath random_test_path(std::uint64_t seed, int id) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id + 1)));
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_real_distribution<double> width(0.1, 10.0);
  const double a = 5.0 * coef(rng);
  const double b = a + width(rng);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  if (id % 2 == 0) {
    const int degree = static_cast<int>(rng() % 7);
    std::vector<double> c(degree + 1);
    for (auto& v : c) v = coef(rng);
    // Polynomial in the normalized variable so values stay O(1) on the interval.
    return {[c, mid, half](double t) {
              const double s = (t - mid) / half;
              double acc = 0.0;
              for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
              return acc;
            },
            a, b};
  }
  const int terms = 1 + static_cast<int>(rng() % 3);
  std::vector<double> amp(terms), freq(terms), phase(terms);
  for (int i = 0; i < terms; ++i) {
    amp[i] = coef(rng);
    freq[i] = 4.0 * std::abs(coef(rng)) / half;
    phase[i] = 3.0 * coef(rng);
  }
  return {[amp, freq, phase](double t) {
            double acc = 0.0;
            for (std::size_t i = 0; i < amp.size(); ++i) acc += amp[i] * std::sin(freq[i] * t + phase[i]);
            return acc;
          },
          a, b};
}

AuditReport method_contract_audit(const MethodKind& m, int corpus, std::uint64_t seed, int starts) {
  validate(m);
  return method_contract_audit([&m](const ScalarPath& f, double x) { return apply_method(m, f, x); }, describe(m),
                               corpus, seed, starts);
}

AuditReport method_contract_audit(const MethodFn& method, const std::string& label, int corpus,
                                  std::uint64_t seed, int starts) {
  if (corpus < 1) throw ContractViolation("method audit needs a corpus of at least one path");
  if (starts < 1) throw ContractViolation("method audit needs at least one start per path");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int decrease_violations = 0;
  int equivalence_violations = 0;
  int domain_violations = 0;
  double worst_increase = 0.0;
  std::string first_witness;

  for (int p = 0; p < corpus; ++p) {
    const ScalarPath f = random_test_path(seed, p);
    for (int s = 0; s < starts; ++s) {
      double x = f.a + (f.b - f.a) * unit(rng);
      if (s == 0) x = f.a;
      if (s == 1) x = f.b;
      const double xp = method(f, x);
      const double fx = f.eval(x);
      if (!(xp >= f.a && xp <= f.b)) ++domain_violations;
      const double fxp = f.eval(xp);
      if (!(fxp <= fx)) {
        ++decrease_violations;
        worst_increase = std::max(worst_increase, fxp - fx);
        if (first_witness.empty()) {
          std::ostringstream os;
          os << "path " << p << " x=" << x << " M(x)=" << xp << " f(x)=" << fx << " f(M(x))=" << fxp;
          first_witness = os.str();
        }
      }
      if ((fxp == fx) != (xp == x)) ++equivalence_violations;
    }
  }

  AuditReport report;
  report.title = "method contract audit (" + label + ", " + std::to_string(corpus) + " paths x " +
                 std::to_string(starts) + " starts)";
  report.add("stays_in_interval", domain_violations == 0, domain_violations);
  report.add("never_increases", decrease_violations == 0, worst_increase,
             std::to_string(decrease_violations) + " violations" +
                 (first_witness.empty() ? std::string() : "; first " + first_witness));
  report.add("fixed_iff_no_strict_improvement", equivalence_violations == 0, equivalence_violations,
             std::to_string(equivalence_violations) + " violations");
  return report;
}

}  // namespace glin
