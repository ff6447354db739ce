#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rispace/harness.hpp"
#include "rispace/mixed2d.hpp"

using namespace rispace;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool near_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("plane step functions canonicalize equal slices") {
  StepFn1D u = StepFn1D::indicator(0.0, 0.5);
  StepFn2D F({0.0, 0.3, 0.6, 1.0}, {u, u, StepFn1D::zero()});
  REQUIRE(F.slices().size() == 2);
  REQUIRE(F.t_breakpoints() == std::vector<double>{0.0, 0.6, 1.0});
  REQUIRE(F.eval(0.25, 0.5) == 1.0);
  REQUIRE(F.eval(0.75, 0.5) == 0.0);
  REQUIRE(F.eval(0.25, 0.8) == 0.0);

  REQUIRE_THROWS_AS(StepFn2D({0.0, 0.5}, {u, u}), std::invalid_argument);
  REQUIRE_THROWS_AS(StepFn2D({0.2, 1.0}, {u}), std::invalid_argument);
}

TEST_CASE("rectangle input fills the complement with zero") {
  std::vector<Rect> rects{{0.0, 0.5, 0.0, 0.5, 1.0}};
  StepFn2D F = StepFn2D::from_rectangles(rects);
  REQUIRE(F.eval(0.25, 0.25) == 1.0);
  REQUIRE(F.eval(0.75, 0.25) == 0.0);
  REQUIRE(F.eval(0.25, 0.75) == 0.0);

  std::vector<Rect> overlap{{0.0, 0.6, 0.0, 1.0, 1.0}, {0.5, 1.0, 0.0, 1.0, 2.0}};
  REQUIRE_THROWS_AS(StepFn2D::from_rectangles(overlap), std::invalid_argument);

  std::vector<Rect> bad{{0.5, 0.5, 0.0, 1.0, 1.0}};
  REQUIRE_THROWS_AS(StepFn2D::from_rectangles(bad), std::invalid_argument);
}

TEST_CASE("transposition is an involution and swaps arguments") {
  Rng rng(2112);
  for (int trial = 0; trial < 30; ++trial) {
    StepFn2D F = random_stepfn2d(rng, 5, 5);
    StepFn2D T = F.transpose();
    REQUIRE(T.transpose() == F);
    for (int j = 0; j < 10; ++j) {
      double s = rng.uniform01();
      double t = rng.uniform01();
      REQUIRE(F.eval(s, t) == T.eval(t, s));
    }
  }
}

TEST_CASE("iterated Lebesgue norms are transpose invariant") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    StepFn2D F = random_stepfn2d(rng, 5, 5);
    for (double p : {1.0, 2.0}) {
      SpaceSpec lp = SpaceSpec::Lp(p);
      REQUIRE(near_rel(mixed_norm(F, lp, lp), mixed_norm(F.transpose(), lp, lp),
                       1e-12));
    }
  }
}

TEST_CASE("mixed norm of a t-constant function factorizes") {
  StepFn1D g({0.0, 0.25, 1.0}, {2.0, 0.5});
  StepFn2D F({0.0, 1.0}, {g});
  SpaceSpec inner = SpaceSpec::lorentz_log(1.5);
  double gnorm = space_norm(g, inner);
  REQUIRE(near_rel(mixed_norm(F, SpaceSpec::Lp(2.0), inner), gnorm, 1e-13));
  REQUIRE(near_rel(
      mixed_norm(F, SpaceSpec::Lp(std::numeric_limits<double>::infinity()),
                 inner),
      gnorm, 1e-13));
}

TEST_CASE("mixed norm of the quarter square") {
  const double p = 1.5;
  std::vector<Rect> rects{{0.0, 0.5, 0.0, 0.5, 1.0}};
  StepFn2D F = StepFn2D::from_rectangles(rects);
  double inner = std::pow(1.0 + std::log(2.0), (1.0 - p) / p);
  REQUIRE(near(mixed_norm(F, SpaceSpec::Lp(1.0), SpaceSpec::lorentz_log(p)),
               0.5 * inner, 1e-13));
  REQUIRE_THROWS_AS(
      mixed_norm(F, SpaceSpec::weak_seq(2.0, WeakForm::sup_form),
                 SpaceSpec::Lp(1.0)),
      std::invalid_argument);
}

TEST_CASE("kernel windows satisfy the defining inequalities") {
  DivergenceKernel kern(4, 1.5);
  REQUIRE(kern.window_count() == 16);
  REQUIRE(kern.log_a(0) == 0.0);
  REQUIRE(kern.weight_at_a(0) == 1.0);
  REQUIRE(kern.section_value(0) == 1.0);

  // 1/b_2 = ceil(e^(2^2 - 1)) = ceil(e^3) = 21.
  REQUIRE(near(std::exp(-kern.log_b(1)), 21.0, 1e-10));
  REQUIRE(near(kern.weight_at_a(1), 0.5, 1e-15));
  REQUIRE(near(kern.section_value(1), std::pow(2.0, 2.0 / 3.0), 1e-14));

  const double ln2 = std::log(2.0);
  for (std::size_t idx = 0; idx < kern.window_count(); ++idx) {
    REQUIRE(kern.log_b(idx) <= kern.log_a(idx) + 1e-12);
    REQUIRE(kern.log_a(idx) <= kern.log_b(idx) + ln2 + 1e-12);
    // W(a_m) = m^((1-p)/theta), exact from logs.
    double m = double(idx + 1);
    REQUIRE(near_rel(kern.weight_at_a(idx),
                     std::pow(m, (1.0 - 1.5) / 0.5), 1e-13));
  }

  REQUIRE_THROWS_AS(DivergenceKernel(0, 1.5), std::invalid_argument);
  REQUIRE_THROWS_AS(DivergenceKernel(4, 2.0), std::invalid_argument);
}

TEST_CASE("section norms stay at most one while columns grow") {
  for (int n : {1, 4, 8, 12}) {
    DivergenceKernel kern(n, 1.5);
    REQUIRE(kern.sup_section_norm() <= 1.0 + 1e-12);
    ColumnNormBound cb = column_norm_bound(kern);
    REQUIRE(cb.exact_p >= cb.bound);
  }
  double prev = 0.0;
  for (int n : {2, 4, 6, 8, 10, 12}) {
    double b = DivergenceKernel(n, 1.5).transposed_section_bound();
    REQUIRE(b > prev);
    prev = b;
  }
}

TEST_CASE("the smallest kernel materializes to 22 rectangles") {
  DivergenceKernel kern(1, 1.5);
  REQUIRE(kern.rectangle_count() == 22.0);
  StepFn2D K = kern.materialize();
  REQUIRE(K.slices().size() == 22);
  REQUIRE(K.t_breakpoints().front() == 0.0);
  REQUIRE(K.t_breakpoints().back() == 1.0);

  // Window 1 carries the constant value 1 on [0, 1/2).
  REQUIRE(K.eval(0.3, 0.25) == 1.0);
  // Window 2: value on the diagonal blocks, zero off them.
  const double v2 = std::pow(2.0, 2.0 / 3.0);
  REQUIRE(K.eval(1.0 / 42, 0.5 + 1.0 / 84) == v2);
  REQUIRE(K.eval(0.9, 0.5 + 1.0 / 84) == 0.0);

  REQUIRE_THROWS_AS(DivergenceKernel(14, 1.5).materialize(),
                    std::invalid_argument);
}

TEST_CASE("materialized kernels match the analytic handles") {
  const SpaceSpec linf = SpaceSpec::Lp(std::numeric_limits<double>::infinity());
  struct Case {
    int n;
    double p;
  };
  for (Case c : {Case{1, 1.5}, Case{1, 1.9}, Case{2, 1.9}}) {
    DivergenceKernel kern(c.n, c.p);
    SpaceSpec xp = SpaceSpec::lorentz_log(c.p);
    StepFn2D K = kern.materialize();
    REQUIRE(near_rel(mixed_norm(K, linf, xp), kern.sup_section_norm(), 1e-9));
    double col = std::pow(kern.transposed_section_norm_p(), 1.0 / c.p);
    REQUIRE(near_rel(mixed_norm(K.transpose(), linf, xp), col, 1e-9));
  }
}
