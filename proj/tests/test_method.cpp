#include "glin/errors.hpp"
#include "glin/method.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace glin;

namespace {

std::vector<MethodKind> variants() {
  return {GridRefine{}, GridRefine{3, 33}, GridRefine{1, 2}, GoldenSection{}, GoldenSection{3}, ArmijoBacktrack{},
          ArmijoBacktrack{0.5, 0.9, 5}};
}

}  // namespace

TEST(Method, GridRefineFindsTheParabolaMinimum) {
  const ScalarPath f{[](double t) { return t * t; }, -1.0, 1.0};
  const double x = apply_method(GridRefine{3, 33}, f, 0.5);
  EXPECT_LE(f.eval(x), 0.25);
  EXPECT_LE(std::abs(x), 1.0 / 32.0);
}

TEST(Method, ConstantPathReturnsStart) {
  const ScalarPath f{[](double) { return 3.0; }, -2.0, 5.0};
  for (const MethodKind& m : variants()) {
    for (double x : {-2.0, 0.0, 1.25, 5.0}) EXPECT_EQ(apply_method(m, f, x), x) << describe(m);
  }
}

TEST(Method, BoundaryMinimumIsKept) {
  const ScalarPath f{[](double t) { return t; }, -1.0, 1.0};
  for (const MethodKind& m : variants()) EXPECT_EQ(apply_method(m, f, -1.0), -1.0) << describe(m);
}

TEST(Method, RejectsStartOutsideInterval) {
  const ScalarPath f{[](double t) { return t; }, -1.0, 1.0};
  for (const MethodKind& m : variants()) EXPECT_THROW(apply_method(m, f, 1.5), ContractViolation);
}

TEST(Method, NonFiniteValuesAreEvaluationErrors) {
  const ScalarPath f{[](double t) { return t > 0.3 ? std::numeric_limits<double>::quiet_NaN() : t; }, -1.0, 1.0};
  EXPECT_THROW(apply_method(GridRefine{}, f, 0.0), EvaluationError);
}

TEST(Method, InvalidParametersRejected) {
  EXPECT_THROW(validate(GridRefine{0, 33}), ContractViolation);
  EXPECT_THROW(validate(GoldenSection{0}), ContractViolation);
  EXPECT_THROW(validate(ArmijoBacktrack{1.5, 0.5, 10}), ContractViolation);
  EXPECT_THROW(validate(ArmijoBacktrack{1e-4, 1.0, 10}), ContractViolation);
}

TEST(Method, Deterministic) {
  for (const MethodKind& m : variants()) {
    for (int id = 0; id < 20; ++id) {
      const ScalarPath f = random_test_path(9, id);
      const double x = 0.5 * (f.a + f.b);
      EXPECT_EQ(apply_method(m, f, x), apply_method(m, f, x));
    }
  }
}

TEST(Method, ContractHoldsOnRandomPaths) {
  for (const MethodKind& m : variants()) {
    for (int id = 0; id < 100; ++id) {
      const ScalarPath f = random_test_path(31, id);
      for (int k = 0; k <= 10; ++k) {
        const double x = k == 10 ? f.b : f.a + (f.b - f.a) * k / 10.0;
        const double y = apply_method(m, f, x);
        EXPECT_GE(y, f.a);
        EXPECT_LE(y, f.b);
        EXPECT_LE(f.eval(y), f.eval(x));
        EXPECT_EQ(y == x, f.eval(y) == f.eval(x)) << describe(m) << " path " << id;
      }
    }
  }
}

TEST(MethodAudit, AllVariantsPass) {
  for (const MethodKind& m : variants()) {
    const AuditReport rep = method_contract_audit(m, 100, 2024, 10);
    EXPECT_TRUE(rep.passed()) << describe(m);
  }
}

TEST(MethodAudit, UnconditionalStepIsCaught) {
  const MethodFn buggy = [](const ScalarPath& f, double x) { return std::min(f.b, x + 0.1); };
  const AuditReport rep = method_contract_audit(buggy, "step", 100, 3, 10);
  EXPECT_FALSE(rep.passed());
  EXPECT_FALSE(rep.find("never_increases")->passed);
}

TEST(MethodAudit, RejectsEmptyCorpus) {
  EXPECT_THROW(method_contract_audit(GridRefine{}, 0, 1), ContractViolation);
}

TEST(Method, PathFamilyCoversBothKinds) {
  const ScalarPath poly = random_test_path(4, 0);
  const ScalarPath trig = random_test_path(4, 1);
  EXPECT_LT(poly.a, poly.b);
  EXPECT_LT(trig.a, trig.b);
  EXPECT_TRUE(std::isfinite(poly.eval(0.5 * (poly.a + poly.b))));
  EXPECT_TRUE(std::isfinite(trig.eval(trig.a)));
}
