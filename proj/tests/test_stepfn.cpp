#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "rispace/harness.hpp"
#include "rispace/stepfn.hpp"

using namespace rispace;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Independent oracle for the decreasing rearrangement: sort the cells of
// |f| by value, merge ties, stack the measures.
StepFn1D sort_oracle(const StepFn1D& f) {
  std::vector<std::pair<double, double>> cells;  // (|value|, measure)
  for (std::size_t i = 0; i < f.cell_count(); ++i)
    cells.emplace_back(std::abs(f.values()[i]), f.measure(i));
  std::stable_sort(cells.begin(), cells.end(),
                   [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<std::pair<double, double>> merged;
  for (const auto& c : cells) {
    if (!merged.empty() && merged.back().first == c.first)
      merged.back().second += c.second;
    else
      merged.push_back(c);
  }
  std::vector<double> bp{0.0};
  std::vector<double> vv;
  double cum = 0.0;
  for (const auto& c : merged) {
    cum += c.second;
    bp.push_back(cum);
    vv.push_back(c.first);
  }
  bp.back() = 1.0;
  return StepFn1D(std::move(bp), std::move(vv));
}

}  // namespace

TEST_CASE("construction canonicalizes cells") {
  StepFn1D f({0.0, 0.5, 0.5, 1.0}, {2.0, 7.0, 2.0});
  REQUIRE(f.cell_count() == 1);
  REQUIRE(f.values()[0] == 2.0);

  StepFn1D g({0.0, 0.25, 0.75, 1.0}, {3.0, 3.0, 1.0});
  REQUIRE(g.cell_count() == 2);
  REQUIRE(g.breakpoints()[1] == 0.75);

  StepFn1D z = StepFn1D::zero();
  REQUIRE(z.cell_count() == 1);
  REQUIRE(z.integral_abs() == 0.0);
}

TEST_CASE("construction rejects malformed input") {
  REQUIRE_THROWS_AS(StepFn1D({0.1, 1.0}, {1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(StepFn1D({0.0, 0.9}, {1.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(StepFn1D({0.0, 0.6, 0.4, 1.0}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(StepFn1D({0.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(StepFn1D({0.0, 1.0}, std::vector<double>{}),
                    std::invalid_argument);
  const double inf = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(StepFn1D({0.0, 1.0}, {inf}), std::invalid_argument);
}

TEST_CASE("evaluation uses half-open cells") {
  StepFn1D f = StepFn1D::indicator(0.0, 0.5);
  REQUIRE(f.eval(0.0) == 1.0);
  REQUIRE(f.eval(0.4999999) == 1.0);
  REQUIRE(f.eval(0.5) == 0.0);
  REQUIRE(f.eval(0.75) == 0.0);

  StepFn1D g = StepFn1D::indicator(0.25, 0.75);
  REQUIRE(g.eval(0.0) == 0.0);
  REQUIRE(g.eval(0.25) == 1.0);
  REQUIRE(g.eval(0.75) == 0.0);
}

TEST_CASE("from_cells stacks measures and pins total mass") {
  std::vector<std::pair<double, double>> cells{{0.25, 3.0}, {0.25, 3.0},
                                               {0.5, 1.0}};
  StepFn1D f = StepFn1D::from_cells(cells);
  REQUIRE(f.cell_count() == 2);
  REQUIRE(f.values()[0] == 3.0);
  REQUIRE(f.values()[1] == 1.0);
  REQUIRE(f.breakpoints().back() == 1.0);
  REQUIRE(near(f.breakpoints()[1], 0.5, 1e-15));

  std::vector<std::pair<double, double>> bad{{0.25, 3.0}, {0.25, 3.0}};
  REQUIRE_THROWS_AS(StepFn1D::from_cells(bad), std::invalid_argument);
}

TEST_CASE("decreasing rearrangement sorts cell values") {
  StepFn1D f({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {1.0, 3.0, 2.0});
  StepFn1D star = rearrange(f);
  REQUIRE(star.cell_count() == 3);
  REQUIRE(star.values()[0] == 3.0);
  REQUIRE(star.values()[1] == 2.0);
  REQUIRE(star.values()[2] == 1.0);
  REQUIRE(near(star.breakpoints()[1], 1.0 / 3, 1e-15));
  REQUIRE(near(star.breakpoints()[2], 2.0 / 3, 1e-15));
}

TEST_CASE("rearrangement takes absolute values and merges ties") {
  StepFn1D f({0.0, 0.5, 1.0}, {-1.0, 1.0});
  StepFn1D star = rearrange(f);
  REQUIRE(star.cell_count() == 1);
  REQUIRE(star.values()[0] == 1.0);

  StepFn1D z = StepFn1D::zero();
  REQUIRE(rearrange(z) == z);
}

TEST_CASE("distribution measures strict super-level sets") {
  StepFn1D f({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {1.0, 3.0, 2.0});
  REQUIRE(near(distribution(f, 1.5), 2.0 / 3, 1e-15));
  REQUIRE(near(distribution(f, 0.0), 1.0, 1e-15));
  REQUIRE(near(distribution(f, 2.5), 1.0 / 3, 1e-15));
  REQUIRE(distribution(f, 3.0) == 0.0);
  REQUIRE(near(distribution(f, 2.0), 1.0 / 3, 1e-15));
}

TEST_CASE("head integral of the rearrangement") {
  StepFn1D f({0.0, 1.0 / 3, 2.0 / 3, 1.0}, {1.0, 3.0, 2.0});
  StepFn1D star = rearrange(f);
  REQUIRE(near(head_integral_sorted(star, 0.5), 4.0 / 3, 1e-12));
  REQUIRE(near(head_integral_sorted(star, 1.0), 2.0, 1e-12));
  REQUIRE(near(head_integral(f, 1.0), f.integral_abs(), 1e-12));
  REQUIRE_THROWS_AS(head_integral(f, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(head_integral(f, 1.5), std::invalid_argument);
}

TEST_CASE("rearrangement properties on random functions") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    StepFn1D f = random_stepfn(rng, 64, false);
    StepFn1D star = rearrange(f);

    // Oracle equality: identical values, breakpoints to 1e-12.
    StepFn1D oracle = sort_oracle(f);
    REQUIRE(star.values() == oracle.values());
    REQUIRE(star.cell_count() == oracle.cell_count());
    for (std::size_t i = 0; i < star.breakpoints().size(); ++i)
      REQUIRE(near(star.breakpoints()[i], oracle.breakpoints()[i], 1e-12));

    // Equimeasurability across 20 levels.
    const double top = f.sup_abs();
    for (int j = 0; j < 20; ++j) {
      double lambda = top * j / 19.0;
      REQUIRE(near(distribution(f, lambda), distribution(star, lambda), 1e-12));
    }

    // Idempotence and mass conservation.
    StepFn1D twice = rearrange(star);
    REQUIRE(twice.values() == star.values());
    for (std::size_t i = 0; i < twice.breakpoints().size(); ++i)
      REQUIRE(near(twice.breakpoints()[i], star.breakpoints()[i], 1e-12));
    REQUIRE(near(star.integral_abs(), f.integral_abs(), 1e-12));

    // Values are nonincreasing.
    for (std::size_t i = 0; i + 1 < star.cell_count(); ++i)
      REQUIRE(star.values()[i] > star.values()[i + 1]);
  }
}

TEST_CASE("head integral is concave and nondecreasing") {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    StepFn1D f = random_stepfn(rng, 32, false);
    StepFn1D star = rearrange(f);
    double t1 = 0.05 + 0.9 * rng.uniform01();
    double t2 = 0.05 + 0.9 * rng.uniform01();
    if (t1 > t2) std::swap(t1, t2);
    double mid = 0.5 * (t1 + t2);
    double h1 = head_integral_sorted(star, t1);
    double h2 = head_integral_sorted(star, t2);
    double hm = head_integral_sorted(star, mid);
    REQUIRE(hm >= 0.5 * (h1 + h2) - 1e-12);
    REQUIRE(h2 >= h1 - 1e-15);
  }
}

TEST_CASE("refinement and linear combinations are exact on cells") {
  StepFn1D f({0.0, 0.5, 1.0}, {1.0, -2.0});
  StepFn1D g({0.0, 0.25, 1.0}, {4.0, 0.5});
  std::vector<StepFn1D> fns{f, g};
  Refinement r = refine(fns);
  REQUIRE(r.cell_count() == 3);
  REQUIRE(r.values[0][0] == 1.0);
  REQUIRE(r.values[1][0] == 4.0);
  REQUIRE(r.values[1][1] == 0.5);

  StepFn1D h = linear_combination(fns, std::vector<double>{2.0, 1.0});
  REQUIRE(h.eval(0.1) == 6.0);
  REQUIRE(h.eval(0.3) == 2.5);
  REQUIRE(h.eval(0.7) == -3.5);
}

TEST_CASE("pointwise combination") {
  StepFn1D f({0.0, 0.5, 1.0}, {1.0, -2.0});
  StepFn1D g = f.abs();
  REQUIRE(g.eval(0.75) == 2.0);
  StepFn1D prod = pointwise(f, f, [](double a, double b) { return a * b; });
  REQUIRE(prod.eval(0.75) == 4.0);
  REQUIRE(f.scaled(-3.0).eval(0.1) == -3.0);
}

TEST_CASE("sequence rearrangement") {
  std::vector<double> a{0.5, -2.0, 1.0};
  std::vector<double> s = seq_rearrange(a);
  REQUIRE(s == std::vector<double>{2.0, 1.0, 0.5});
  REQUIRE(seq_rearrange({}).empty());
}
