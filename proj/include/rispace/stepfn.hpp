#pragma once

// Piecewise-constant functions on [0,1) with exact cell arithmetic. This is
// the ground type of the library: every norm, rearrangement and selection
// routine consumes StepFn1D values.
//
// Representation invariants (enforced by every constructor):
//   - breakpoints strictly increasing, breakpoints.front() == 0,
//     breakpoints.back() == 1; cell i is [breakpoints[i], breakpoints[i+1])
//   - values.size() == breakpoints.size() - 1 >= 1, all entries finite
//   - canonical: no zero-measure cells, no two adjacent cells with equal
//     values; the zero function is exactly one cell of value 0
// Cell measures always enter sums through compensated summation, so the
// total measure of any cell subset is reproducible to the last ulp.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "rispace/numeric.hpp"

namespace rispace {

using SeqVec = std::vector<double>;

class StepFn1D {
 public:
  // Canonicalizes eagerly: merges equal adjacent cells, drops empty cells.
  StepFn1D(std::vector<double> breakpoints, std::vector<double> values) {
    require(breakpoints.size() >= 2, "StepFn1D: need at least two breakpoints");
    require(values.size() + 1 == breakpoints.size(),
            "StepFn1D: values/breakpoints size mismatch");
    require(breakpoints.front() == 0.0, "StepFn1D: first breakpoint must be 0");
    require(breakpoints.back() == 1.0, "StepFn1D: last breakpoint must be 1");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
      require(breakpoints[i] <= breakpoints[i + 1],
              "StepFn1D: breakpoints must be nondecreasing");
    for (double v : values)
      require(std::isfinite(v), "StepFn1D: values must be finite");

    breaks_.push_back(0.0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (breakpoints[i] == breakpoints[i + 1]) continue;  // empty cell
      if (!vals_.empty() && vals_.back() == values[i])
        breaks_.back() = breakpoints[i + 1];  // merge with previous cell
      else {
        vals_.push_back(values[i]);
        breaks_.push_back(breakpoints[i + 1]);
      }
    }
    if (vals_.empty()) {  // all cells empty cannot happen since 0 < 1
      vals_.push_back(0.0);
      breaks_.push_back(1.0);
    }
    breaks_.back() = 1.0;
  }

  static StepFn1D constant(double c) { return StepFn1D({0.0, 1.0}, {c}); }
  static StepFn1D zero() { return constant(0.0); }

  // Indicator of [a, b), 0 <= a < b <= 1.
  static StepFn1D indicator(double a, double b) {
    require(0.0 <= a && a < b && b <= 1.0, "indicator: need 0 <= a < b <= 1");
    std::vector<double> bp{0.0};
    std::vector<double> vv;
    if (a > 0.0) {
      bp.push_back(a);
      vv.push_back(0.0);
    }
    bp.push_back(b);
    vv.push_back(1.0);
    if (b < 1.0) {
      bp.push_back(1.0);
      vv.push_back(0.0);
    }
    return StepFn1D(std::move(bp), std::move(vv));
  }

  // Builds a function from (measure, value) pairs laid out left to right.
  // Measures must be positive and sum to 1 within `tol`; the accumulated
  // grid is pinned so the last breakpoint is exactly 1.
  static StepFn1D from_cells(std::span<const std::pair<double, double>> cells,
                             double tol = 1e-12) {
    require(!cells.empty(), "from_cells: empty cell list");
    std::vector<double> bp{0.0};
    std::vector<double> vv;
    NeumaierSum cum;
    for (auto& [m, v] : cells) {
      require(m > 0.0, "from_cells: measures must be positive");
      cum.add(m);
      bp.push_back(cum.value());
      vv.push_back(v);
    }
    require(std::abs(bp.back() - 1.0) <= tol,
            "from_cells: measures must sum to 1");
    bp.back() = 1.0;
    for (std::size_t i = 1; i + 1 < bp.size(); ++i)
      bp[i] = std::min(bp[i], 1.0);
    return StepFn1D(std::move(bp), std::move(vv));
  }

  const std::vector<double>& breakpoints() const { return breaks_; }
  const std::vector<double>& values() const { return vals_; }
  std::size_t cell_count() const { return vals_.size(); }
  double measure(std::size_t cell) const {
    return breaks_[cell + 1] - breaks_[cell];
  }

  // Value at t in [0,1); cells are half-open so the value at a breakpoint
  // comes from the cell to its right.
  double eval(double t) const {
    require(0.0 <= t && t < 1.0, "eval: t must lie in [0,1)");
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    return vals_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
  }

  bool operator==(const StepFn1D& o) const {
    return breaks_ == o.breaks_ && vals_ == o.vals_;
  }

  double sup_abs() const {
    double m = 0.0;
    for (double v : vals_) m = std::max(m, std::abs(v));
    return m;
  }

  double integral_abs() const {
    NeumaierSum s;
    for (std::size_t i = 0; i < vals_.size(); ++i)
      s.add(std::abs(vals_[i]) * measure(i));
    return s.value();
  }

  StepFn1D map(const std::function<double(double)>& fn) const {
    std::vector<double> vv(vals_.size());
    for (std::size_t i = 0; i < vals_.size(); ++i) vv[i] = fn(vals_[i]);
    return StepFn1D(breaks_, std::move(vv));
  }

  StepFn1D abs() const {
    return map([](double v) { return std::abs(v); });
  }

  StepFn1D scaled(double c) const {
    require(std::isfinite(c), "scaled: factor must be finite");
    return map([c](double v) { return c * v; });
  }

 private:
  std::vector<double> breaks_;
  std::vector<double> vals_;
};

// Grid refinement shared by several functions: `grid` is the sorted union of
// all breakpoints, `values[f][c]` the value of function f on grid cell c.
struct Refinement {
  std::vector<double> grid;
  std::vector<std::vector<double>> values;

  std::size_t cell_count() const { return grid.size() - 1; }
  double measure(std::size_t cell) const { return grid[cell + 1] - grid[cell]; }
};

inline Refinement refine(std::span<const StepFn1D> fns) {
  require(!fns.empty(), "refine: empty function list");
  std::vector<double> grid;
  for (const auto& f : fns)
    grid.insert(grid.end(), f.breakpoints().begin(), f.breakpoints().end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  Refinement r;
  r.grid = std::move(grid);
  r.values.resize(fns.size());
  for (std::size_t k = 0; k < fns.size(); ++k) {
    auto& row = r.values[k];
    row.resize(r.cell_count());
    const auto& bp = fns[k].breakpoints();
    const auto& vv = fns[k].values();
    std::size_t j = 0;  // current cell of fns[k]
    for (std::size_t c = 0; c < r.cell_count(); ++c) {
      while (r.grid[c] >= bp[j + 1]) ++j;
      row[c] = vv[j];
    }
  }
  return r;
}

// Pointwise linear combination sum_k coeff[k] * fns[k].
inline StepFn1D linear_combination(std::span<const StepFn1D> fns,
                                   std::span<const double> coeffs) {
  require(fns.size() == coeffs.size(), "linear_combination: size mismatch");
  Refinement r = refine(fns);
  std::vector<double> vv(r.cell_count());
  for (std::size_t c = 0; c < r.cell_count(); ++c) {
    NeumaierSum s;
    for (std::size_t k = 0; k < fns.size(); ++k)
      s.add(coeffs[k] * r.values[k][c]);
    vv[c] = s.value();
  }
  return StepFn1D(r.grid, std::move(vv));
}

inline StepFn1D pointwise(const StepFn1D& f, const StepFn1D& g,
                          const std::function<double(double, double)>& op) {
  const StepFn1D fs[2] = {f, g};
  Refinement r = refine(fs);
  std::vector<double> vv(r.cell_count());
  for (std::size_t c = 0; c < r.cell_count(); ++c)
    vv[c] = op(r.values[0][c], r.values[1][c]);
  return StepFn1D(r.grid, std::move(vv));
}

// m({ |f| > lambda }), exact: the selected cell measures are sorted before
// compensated summation, so equimeasurable functions report identical
// distribution values regardless of cell order.
inline double distribution(const StepFn1D& f, double lambda) {
  require(lambda >= 0.0 && std::isfinite(lambda),
          "distribution: level must be finite and >= 0");
  std::vector<double> ms;
  for (std::size_t i = 0; i < f.cell_count(); ++i)
    if (std::abs(f.values()[i]) > lambda) ms.push_back(f.measure(i));
  std::sort(ms.begin(), ms.end());
  return neumaier_total(ms);
}

// Decreasing rearrangement of |f|: the cells of |f| sorted by value,
// descending, laid out from 0. Nonincreasing and equimeasurable with |f|.
inline StepFn1D rearrange(const StepFn1D& f) {
  std::vector<std::pair<double, double>> cells(f.cell_count());
  for (std::size_t i = 0; i < f.cell_count(); ++i)
    cells[i] = {std::abs(f.values()[i]), f.measure(i)};
  std::sort(cells.begin(), cells.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::pair<double, double>> mv(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    mv[i] = {cells[i].second, cells[i].first};
  return StepFn1D::from_cells(mv);
}

// integral over [0, tau] of the decreasing rearrangement, tau in (0,1].
// Concave and nondecreasing in tau; equals the L1 norm at tau = 1.
inline double head_integral_sorted(const StepFn1D& star, double tau) {
  require(tau > 0.0 && tau <= 1.0, "head_integral: tau must lie in (0,1]");
  NeumaierSum s;
  const auto& bp = star.breakpoints();
  const auto& vv = star.values();
  for (std::size_t i = 0; i < vv.size() && bp[i] < tau; ++i)
    s.add(vv[i] * (std::min(bp[i + 1], tau) - bp[i]));
  return s.value();
}

inline double head_integral(const StepFn1D& f, double tau) {
  return head_integral_sorted(rearrange(f), tau);
}

// |a| sorted descending: the sequence analogue of rearrange.
inline SeqVec seq_rearrange(std::span<const double> a) {
  SeqVec out(a.begin(), a.end());
  for (double& x : out) x = std::abs(x);
  std::sort(out.begin(), out.end(), std::greater<double>());
  return out;
}

}  // namespace rispace
