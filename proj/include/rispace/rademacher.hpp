#pragma once

// Dyadic realization of Rademacher sums. The k-th Rademacher function is
// +1/-1 on alternating dyadic intervals of length 2^-k (starting with +1),
// so sum_k a_k r_k is constant on each of the 2^n cells of the dyadic grid.

#include <cmath>
#include <vector>

#include "rispace/stepfn.hpp"

namespace rispace {

inline constexpr int kMaxRademacher = 20;  // 2^20 cells; realization cap

// r_k as a step function, k >= 1.
inline StepFn1D rademacher(int k) {
  require(k >= 1 && k <= kMaxRademacher, "rademacher: k out of range");
  std::size_t cells = std::size_t(1) << k;
  std::vector<double> bp(cells + 1), vv(cells);
  for (std::size_t j = 0; j <= cells; ++j) bp[j] = std::ldexp(double(j), -k);
  for (std::size_t j = 0; j < cells; ++j) vv[j] = (j % 2 == 0) ? 1.0 : -1.0;
  return StepFn1D(std::move(bp), std::move(vv));
}

// sum_k a_k r_k realized on the 2^n grid. Built by successive halving: each
// pass splits every cell in two, adding +a_k on the left half and -a_k on
// the right, which is exactly how r_k alternates within the coarser grid.
inline StepFn1D rademacher_sum(std::span<const double> a) {
  require(!a.empty(), "rademacher_sum: empty coefficient list");
  require(int(a.size()) <= kMaxRademacher,
          "rademacher_sum: realization capped at 20 coefficients");
  for (double c : a)
    require(std::isfinite(c), "rademacher_sum: coefficients must be finite");

  std::vector<double> vals{0.0};
  for (double c : a) {
    std::vector<double> next(vals.size() * 2);
    for (std::size_t j = 0; j < vals.size(); ++j) {
      next[2 * j] = vals[j] + c;
      next[2 * j + 1] = vals[j] - c;
    }
    vals = std::move(next);
  }
  const int n = int(a.size());
  std::vector<double> bp(vals.size() + 1);
  for (std::size_t j = 0; j < bp.size(); ++j) bp[j] = std::ldexp(double(j), -n);
  return StepFn1D(std::move(bp), std::move(vals));
}

// Both sides of the dyadic head-integral comparison for Rademacher sums at
// tau = 2^-i:
//   lhs  integral over [0, 2^-i] of (sum_k s_k r_k)^*
//   rhs  2^-i * ( s_1 + ... + s_min(i,n)  +  sqrt(i) * sqrt(s_{i+1}^2 + ...) )
// where s = |a| sorted descending. For i >= n the tail vanishes and lhs
// equals rhs exactly: the rearranged sum is flat at s_1 + ... + s_n on
// [0, 2^-n), so the head integral is linear there.
struct RadHeadSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline RadHeadSides rad_head_sides(std::span<const double> a, int i) {
  require(i >= 1 && i <= 60, "rad_head_sides: need 1 <= i <= 60");
  SeqVec s = seq_rearrange(a);
  const int n = int(s.size());
  const double tau = std::ldexp(1.0, -i);

  RadHeadSides out;
  out.lhs = head_integral(rademacher_sum(s), tau);

  NeumaierSum headsum;
  for (int k = 0; k < std::min(i, n); ++k) headsum.add(s[k]);
  NeumaierSum tailsq;
  for (int k = i; k < n; ++k) tailsq.add(s[k] * s[k]);
  out.rhs =
      tau * (headsum.value() + std::sqrt(double(i)) * std::sqrt(tailsq.value()));
  return out;
}

}  // namespace rispace
