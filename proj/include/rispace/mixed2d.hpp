#pragma once

// Step functions on the unit square, mixed norms, transposition, and the
// kernel family showing that transposition is unbounded between mixed-norm
// spaces built over the log-weight Lorentz scale.
//
// A StepFn2D is stored sliced by t: a grid 0 = t_0 < ... < t_J = 1 and one
// StepFn1D in s per t-cell. Rectangle partitions convert on construction.
// Transposition exchanges the roles of s and t (an involution).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rispace/norms.hpp"
#include "rispace/stepfn.hpp"

namespace rispace {

struct Rect {
  double s0, s1, t0, t1;  // [s0,s1) x [t0,t1) inside the unit square
  double value;
};

class StepFn2D {
 public:
  StepFn2D(std::vector<double> t_breaks, std::vector<StepFn1D> slices)
      : t_breaks_(std::move(t_breaks)), slices_(std::move(slices)) {
    require(t_breaks_.size() >= 2, "StepFn2D: need at least two t breakpoints");
    require(slices_.size() + 1 == t_breaks_.size(),
            "StepFn2D: slices/breakpoints size mismatch");
    require(t_breaks_.front() == 0.0 && t_breaks_.back() == 1.0,
            "StepFn2D: t grid must span [0,1]");
    for (std::size_t j = 0; j + 1 < t_breaks_.size(); ++j)
      require(t_breaks_[j] <= t_breaks_[j + 1],
              "StepFn2D: t breakpoints must be nondecreasing");
    canonicalize();
  }

  // Disjoint rectangles; uncovered area takes the value 0, so every input
  // describes a full partition of the square.
  static StepFn2D from_rectangles(std::span<const Rect> rects) {
    std::vector<double> tb{0.0, 1.0};
    for (const auto& r : rects) {
      require(0.0 <= r.s0 && r.s0 < r.s1 && r.s1 <= 1.0,
              "from_rectangles: bad s interval");
      require(0.0 <= r.t0 && r.t0 < r.t1 && r.t1 <= 1.0,
              "from_rectangles: bad t interval");
      require(std::isfinite(r.value), "from_rectangles: value must be finite");
      tb.push_back(r.t0);
      tb.push_back(r.t1);
    }
    std::sort(tb.begin(), tb.end());
    tb.erase(std::unique(tb.begin(), tb.end()), tb.end());

    std::vector<StepFn1D> slices;
    slices.reserve(tb.size() - 1);
    std::vector<const Rect*> hits;
    for (std::size_t j = 0; j + 1 < tb.size(); ++j) {
      hits.clear();
      for (const auto& r : rects)
        if (r.t0 <= tb[j] && tb[j] < r.t1) hits.push_back(&r);
      std::sort(hits.begin(), hits.end(),
                [](const Rect* a, const Rect* b) { return a->s0 < b->s0; });
      std::vector<double> bp{0.0};
      std::vector<double> vv;
      double cursor = 0.0;
      for (const Rect* r : hits) {
        require(r->s0 >= cursor, "from_rectangles: rectangles overlap");
        if (r->s0 > cursor) {
          bp.push_back(r->s0);
          vv.push_back(0.0);
        }
        bp.push_back(r->s1);
        vv.push_back(r->value);
        cursor = r->s1;
      }
      if (cursor < 1.0) {
        bp.push_back(1.0);
        vv.push_back(0.0);
      }
      slices.emplace_back(std::move(bp), std::move(vv));
    }
    return StepFn2D(std::move(tb), std::move(slices));
  }

  const std::vector<double>& t_breakpoints() const { return t_breaks_; }
  const std::vector<StepFn1D>& slices() const { return slices_; }
  double t_measure(std::size_t j) const {
    return t_breaks_[j + 1] - t_breaks_[j];
  }

  double eval(double s, double t) const {
    require(0.0 <= t && t < 1.0, "eval: t must lie in [0,1)");
    auto it = std::upper_bound(t_breaks_.begin(), t_breaks_.end(), t);
    return slices_[std::size_t(it - t_breaks_.begin()) - 1].eval(s);
  }

  // F^T(s,t) = F(t,s). The transposed t grid is the union of all slice
  // breakpoints; each new slice reads one s-cell across the old t axis.
  StepFn2D transpose() const {
    std::vector<double> sb;
    for (const auto& sl : slices_)
      sb.insert(sb.end(), sl.breakpoints().begin(), sl.breakpoints().end());
    std::sort(sb.begin(), sb.end());
    sb.erase(std::unique(sb.begin(), sb.end()), sb.end());

    std::vector<StepFn1D> slices;
    slices.reserve(sb.size() - 1);
    for (std::size_t aidx = 0; aidx + 1 < sb.size(); ++aidx) {
      std::vector<double> vv(slices_.size());
      for (std::size_t j = 0; j < slices_.size(); ++j)
        vv[j] = slices_[j].eval(sb[aidx]);
      slices.emplace_back(t_breaks_, std::move(vv));
    }
    return StepFn2D(std::move(sb), std::move(slices));
  }

  bool operator==(const StepFn2D& o) const {
    return t_breaks_ == o.t_breaks_ && slices_ == o.slices_;
  }

 private:
  void canonicalize() {
    std::vector<double> tb{0.0};
    std::vector<StepFn1D> sl;
    for (std::size_t j = 0; j < slices_.size(); ++j) {
      if (t_breaks_[j] == t_breaks_[j + 1]) continue;
      if (!sl.empty() && sl.back() == slices_[j])
        tb.back() = t_breaks_[j + 1];
      else {
        sl.push_back(std::move(slices_[j]));
        tb.push_back(t_breaks_[j + 1]);
      }
    }
    if (sl.empty()) {
      sl.push_back(StepFn1D::zero());
      tb.push_back(1.0);
    }
    tb.back() = 1.0;
    t_breaks_ = std::move(tb);
    slices_ = std::move(sl);
  }

  std::vector<double> t_breaks_;
  std::vector<StepFn1D> slices_;
};

// Mixed norm: t |-> ||F(.,t)||_inner is itself a step function; the outer
// norm is applied to it. Both specs must name function spaces.
inline double mixed_norm(const StepFn2D& F, const SpaceSpec& outer,
                         const SpaceSpec& inner) {
  require(outer.is_function_space() && inner.is_function_space(),
          "mixed_norm: outer and inner must be function spaces");
  std::vector<double> gamma(F.slices().size());
  for (std::size_t j = 0; j < F.slices().size(); ++j)
    gamma[j] = space_norm(F.slices()[j], inner);
  return space_norm(StepFn1D(F.t_breakpoints(), std::move(gamma)), outer);
}

// ---------------------------------------------------------------------------
// The divergence kernel family.
//
// Fix p in (1,2), theta = p - 1, and for m = 1..2^n put
//   a_m = exp(-m^(1/theta) + 1)      (a_1 = 1)
//   1/b_m = ceil(exp(m^(1/theta) - 1))  (a positive integer, b_m <= a_m <= 2 b_m)
// The m-th window of the t axis, [(m-1) 2^-n, m 2^-n), splits into 1/b_m
// sub-intervals B_{m,k} of length b_m 2^-n; the s axis splits into the
// intervals A_{m,k} = [(k-1) b_m, k b_m). The kernel takes the value
// W(a_m)^(-1/p) on B_{m,k} x A_{m,k} (t in B, s in A), 0 elsewhere, where
// W(t) = ln^(1-p)(e/t) is the log-power weight.
//
// Every t-section is a single scaled indicator with norm
// (W(b_m)/W(a_m))^(1/p) <= 1 in the log-weight Lorentz space, while every
// t-section of the transpose carries the same n-independent distribution
// whose norm grows without bound in n. b_m underflows the double range
// around m^(1/theta) ~ 745, so the handle works in the log domain
// throughout; W(a_m) = m^((1-p)/theta) is evaluated analytically from logs.

struct LogCell {
  double value;        // cell value
  double log_measure;  // log of the cell measure
};

class DivergenceKernel {
 public:
  DivergenceKernel(int n, double p) : n_(n), p_(p), theta_(p - 1.0) {
    require(n >= 1 && n <= 24, "DivergenceKernel: need 1 <= n <= 24");
    require(p > 1.0 && p < 2.0, "DivergenceKernel: need p in (1,2)");
    const std::size_t count = std::size_t(1) << n;
    root_.resize(count);
    log_a_.resize(count);
    log_b_.resize(count);
    inv_b_.resize(count);
    w_a_.resize(count);
    for (std::size_t idx = 0; idx < count; ++idx) {
      const double m = double(idx + 1);
      const double u = std::pow(m, 1.0 / theta_);  // ln(e / a_m)
      root_[idx] = u;
      log_a_[idx] = 1.0 - u;
      const double x = std::exp(u - 1.0);  // 1/a_m, may overflow
      if (x <= 9007199254740992.0) {       // 2^53: ceil is exact
        inv_b_[idx] = std::ceil(x);
        log_b_[idx] = -std::log(inv_b_[idx]);
      } else {
        // ceil(x)/x - 1 <= 1/x < 2^-53: the correction is below double
        // resolution, so log b_m = -(u - 1) exactly as stored.
        inv_b_[idx] = std::numeric_limits<double>::quiet_NaN();
        log_b_[idx] = 1.0 - u;
      }
      w_a_[idx] = std::pow(m, (1.0 - p) / theta_);
      require(log_b_[idx] <= log_a_[idx] + 1e-12,
              "DivergenceKernel: b_m <= a_m violated");
      require(log_a_[idx] <= std::log(2.0) + log_b_[idx] + 1e-12,
              "DivergenceKernel: a_m <= 2 b_m violated");
    }
  }

  int n() const { return n_; }
  double p() const { return p_; }
  double theta() const { return theta_; }
  std::size_t window_count() const { return log_a_.size(); }
  double log_a(std::size_t idx) const { return log_a_[idx]; }
  double log_b(std::size_t idx) const { return log_b_[idx]; }
  double weight_at_a(std::size_t idx) const { return w_a_[idx]; }

  // Section value on the m-th window: W(a_m)^(-1/p).
  double section_value(std::size_t idx) const {
    return std::pow(w_a_[idx], -1.0 / p_);
  }

  // Distribution of K(.,t) for t in window m: one cell, measure b_m.
  LogCell section_distribution(std::size_t idx) const {
    return {section_value(idx), log_b_[idx]};
  }

  // Distribution of the transposed section (the same for every t): value
  // W(a_m)^(-1/p) on measure b_m 2^-n for each m.
  std::vector<LogCell> transposed_section_distribution() const {
    std::vector<LogCell> cells(window_count());
    const double ln2 = std::log(2.0);
    for (std::size_t idx = 0; idx < window_count(); ++idx)
      cells[idx] = {section_value(idx), log_b_[idx] - double(n_) * ln2};
    return cells;
  }

  // sup over t of the log-weight Lorentz norm of K(.,t):
  // max_m (W(b_m)/W(a_m))^(1/p), provably <= 1.
  double sup_section_norm() const {
    const WeightFn w = WeightFn::log_power(p_);
    double best = 0.0;
    for (std::size_t idx = 0; idx < window_count(); ++idx)
      best = std::max(best, w.eval_log(log_b_[idx]) / w_a_[idx]);
    return std::pow(best, 1.0 / p_);
  }

  // p-th power of the log-weight Lorentz norm of a transposed section,
  // via the exact Stieltjes sum in the log domain. Section values increase
  // with m, so the decreasing rearrangement stacks windows from m = 2^n
  // down; the cumulative measures are suffix sums of b_m 2^-n formed by
  // log-sum-exp.
  double transposed_section_norm_p() const {
    const WeightFn w = WeightFn::log_power(p_);
    const double ln2 = std::log(2.0);
    const std::size_t count = window_count();
    std::vector<double> log_suffix(count);  // log sum_{j >= m} b_j
    double acc = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = count; idx-- > 0;) {
      double lb = log_b_[idx];
      double hi = std::max(acc, lb), lo = std::min(acc, lb);
      acc = std::isinf(lo) ? hi : hi + std::log1p(std::exp(lo - hi));
      log_suffix[idx] = acc;
    }
    NeumaierSum s;
    double v_prev = 0.0;  // (section value)^p = 1/W(a_m), increasing in m
    for (std::size_t idx = 0; idx < count; ++idx) {
      double v_here = 1.0 / w_a_[idx];
      s.add((v_here - v_prev) * w.eval_log(log_suffix[idx] - double(n_) * ln2));
      v_prev = v_here;
    }
    return s.value();
  }

  // Closed-form lower bound for transposed_section_norm_p():
  // sum_{m=2}^{2^n} ((n+1) ln 2 + m^(1/theta))^(-theta).
  double transposed_section_bound() const {
    const double shift = double(n_ + 1) * std::log(2.0);
    NeumaierSum s;
    for (std::size_t idx = 1; idx < window_count(); ++idx)
      s.add(std::pow(shift + root_[idx], -theta_));
    return s.value();
  }

  // Total rectangle count sum_m 1/b_m; infinity once any 1/b_m stops being
  // exactly representable.
  double rectangle_count() const {
    NeumaierSum s;
    for (double ib : inv_b_) {
      if (std::isnan(ib)) return std::numeric_limits<double>::infinity();
      s.add(ib);
    }
    return s.value();
  }

  // Small-n oracle: the kernel as an explicit StepFn2D. Guarded by the
  // rectangle budget; large n must use the analytic handle instead.
  StepFn2D materialize(double max_rectangles = 1e6) const {
    const double total = rectangle_count();
    require(total <= max_rectangles,
            "DivergenceKernel: rectangle budget exceeded; use the analytic "
            "handle");
    const double pow2 = std::ldexp(1.0, -n_);
    std::vector<double> tb{0.0};
    std::vector<StepFn1D> slices;
    for (std::size_t idx = 0; idx < window_count(); ++idx) {
      const double B = inv_b_[idx];  // integer 1/b_m
      const double v = section_value(idx);
      for (double k = 1.0; k <= B; k += 1.0) {
        tb.push_back((double(idx) + k / B) * pow2);
        std::vector<double> bp{0.0};
        std::vector<double> vv;
        if (k > 1.0) {
          bp.push_back((k - 1.0) / B);
          vv.push_back(0.0);
        }
        bp.push_back(k / B);
        vv.push_back(v);
        if (k < B) {
          bp.push_back(1.0);
          vv.push_back(0.0);
        }
        slices.emplace_back(std::move(bp), std::move(vv));
      }
    }
    return StepFn2D(std::move(tb), std::move(slices));
  }

 private:
  int n_;
  double p_, theta_;
  std::vector<double> root_;   // m^(1/theta)
  std::vector<double> log_a_;
  std::vector<double> log_b_;
  std::vector<double> inv_b_;  // NaN when not exactly representable
  std::vector<double> w_a_;    // W(a_m) = m^((1-p)/theta)
};

// The two numbers behind the divergence: the exact p-th power of the
// transposed section norm and its closed-form lower bound. exact >= bound
// always; the bound grows like n - theta log n while the sup of the
// untransposed section norms stays <= 1.
struct ColumnNormBound {
  double exact_p;  // transposed section norm, p-th power
  double bound;    // closed-form lower bound for exact_p
};

inline ColumnNormBound column_norm_bound(const DivergenceKernel& kernel) {
  return {kernel.transposed_section_norm_p(),
          kernel.transposed_section_bound()};
}

}  // namespace rispace
