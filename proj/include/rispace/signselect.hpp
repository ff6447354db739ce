#pragma once

// Constructive sign selection. Given step functions g_1..g_n and a dyadic
// level i, select_signs produces signs eps in {-1,+1}^n together with a
// certificate that the head integral of (sum eps_k g_k)^* over [0, 2^-i]
// is at least gamma times the closed-form two-term bound of
// rad_head_sides, with gamma >= 1/(9 sqrt 2) guaranteed.
//
// The pipeline: sort coefficients a_k = ||g_k||_1 descending, partition the
// tail into i groups by an equal-energy budget, pick Khintchine signs delta
// inside each group, then a pigeonhole over sign-agreement cells picks one
// overall pattern eta per group. All searches are deterministic.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rispace/rademacher.hpp"
#include "rispace/stepfn.hpp"

namespace rispace {

using SignVector = std::vector<int>;  // entries are -1 or +1

// Raised when a certified postcondition fails to verify numerically.
struct CertificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a heuristic search ends below its guaranteed bound. Never
// silent: callers must either handle it or let the run fail.
struct SearchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Which side of the pigeonhole dichotomy fired.
//   a: some item has c_k e_k > d while e_k < 1/N  (light cell, heavy mass)
//   b: some item has c_k > d N  while e_k >= 1/N  (heavy cell, high average)
enum class PigeonholeBranch { a, b };

// Pigeonhole over N weighted items: weights e_k >= 0 summing to 1 and
// nonnegative scores c_k with sum(c_k e_k) = N. For any d in (0, 1/2) one
// of the two branches above must fire: otherwise the light items contribute
// at most d each and the heavy ones at most d N in total, so the full sum
// would be < 2 d N < N. Returns the first index (0-based) satisfying its
// branch. `n_total` allows items beyond e.size() that all carry e_k = 0
// (they can never satisfy either branch, so they need not be materialized).
struct PigeonholeHit {
  std::size_t k0 = 0;
  PigeonholeBranch branch = PigeonholeBranch::a;
};

inline PigeonholeHit pigeonhole_select_n(std::span<const double> e,
                                         std::span<const double> c, double d,
                                         double n_total) {
  require(!e.empty() && e.size() == c.size(),
          "pigeonhole: need matching nonempty e and c");
  require(d > 0.0 && d < 0.5, "pigeonhole: need d in (0, 1/2)");
  require(n_total >= double(e.size()), "pigeonhole: n_total below item count");
  NeumaierSum esum, cesum;
  for (std::size_t k = 0; k < e.size(); ++k) {
    require(e[k] >= 0.0, "pigeonhole: weights must be >= 0");
    require(c[k] >= 0.0, "pigeonhole: scores must be >= 0");
    esum.add(e[k]);
    cesum.add(c[k] * e[k]);
  }
  require(std::abs(esum.value() - 1.0) <= 1e-12,
          "pigeonhole: weights must sum to 1");
  require(std::abs(cesum.value() - n_total) <= 1e-9 * n_total,
          "pigeonhole: weighted scores must sum to N");

  const double inv_n = 1.0 / n_total;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (e[k] < inv_n) {
      if (c[k] * e[k] > d) return {k, PigeonholeBranch::a};
    } else {
      if (c[k] > d * n_total) return {k, PigeonholeBranch::b};
    }
  }
  throw std::logic_error("pigeonhole: no branch fired (invariant violated)");
}

inline PigeonholeHit pigeonhole_select(std::span<const double> e,
                                       std::span<const double> c, double d) {
  return pigeonhole_select_n(e, c, d, double(e.size()));
}

// One overall sign per function chosen by the pigeonhole over the 2^i
// sign-agreement cells E_eta = { t : sign y_l(t) = eta_l for all l } (the
// sign of 0 counts as +1). On E_eta the combination sum eta_l y_l equals
// sum |y_l| >= 0, so with measures as weights and normalized cell averages
// as scores the pigeonhole yields a pattern eta' with
//     d * 2^-level * sum_l ||y_l||_1  <=  head integral of
//         (sum_l eta'_l y_l)^* over [0, 2^-level],
// verified before returning. `level` >= y.size() plays the role of i for a
// family padded with zero functions: the padded patterns have empty cells,
// so only the 2^(y.size()) real patterns are enumerated while the
// pigeonhole thresholds use N = 2^level.
struct EtaSelection {
  SignVector eta;
  PigeonholeBranch branch = PigeonholeBranch::a;
  double tau = 1.0;        // 2^-level
  double lhs = 0.0;        // verified head integral
  double bound = 0.0;      // d * tau * sum ||y_l||_1
  bool degenerate = false; // all inputs were identically zero
};

inline EtaSelection select_eta(std::span<const StepFn1D> y, double d,
                               int level = 0) {
  const int i_fn = int(y.size());
  require(i_fn >= 1 && i_fn <= 20, "select_eta: need 1 to 20 functions");
  if (level == 0) level = i_fn;
  require(level >= i_fn && level <= 60, "select_eta: level below family size");
  require(d > 0.0 && d < 0.5, "select_eta: need d in (0, 1/2)");

  Refinement r = refine(y);
  const std::size_t patterns = std::size_t(1) << i_fn;
  std::vector<double> e(patterns, 0.0), raw(patterns, 0.0);
  for (std::size_t cell = 0; cell < r.cell_count(); ++cell) {
    std::size_t pat = 0;
    double absum = 0.0;
    for (int l = 0; l < i_fn; ++l) {
      double v = r.values[std::size_t(l)][cell];
      if (v < 0.0) pat |= std::size_t(1) << l;
      absum += std::abs(v);
    }
    e[pat] += r.measure(cell);
    raw[pat] += r.measure(cell) * absum;
  }

  // sum over patterns of the raw integrals is sum_l ||y_l||_1
  const double total = neumaier_total(raw);
  EtaSelection out;
  out.tau = std::ldexp(1.0, -level);
  if (total == 0.0) {
    out.eta.assign(std::size_t(i_fn), +1);
    out.degenerate = true;
    return out;
  }

  const double n_total = std::ldexp(1.0, level);
  std::vector<double> c(patterns, 0.0);
  const double scale = n_total / total;
  for (std::size_t pat = 0; pat < patterns; ++pat)
    if (e[pat] > 0.0) c[pat] = raw[pat] * scale / e[pat];

  PigeonholeHit hit = pigeonhole_select_n(e, c, d, n_total);
  out.branch = hit.branch;
  out.eta.resize(std::size_t(i_fn));
  std::vector<double> coeff(static_cast<std::size_t>(i_fn));
  for (int l = 0; l < i_fn; ++l) {
    bool neg = (hit.k0 >> l) & 1u;
    out.eta[std::size_t(l)] = neg ? -1 : +1;
    coeff[std::size_t(l)] = neg ? -1.0 : +1.0;
  }

  out.lhs = head_integral(linear_combination(y, coeff), out.tau);
  out.bound = d * out.tau * total;
  if (out.lhs < out.bound * (1.0 - 1e-9) - 1e-15)
    throw CertificationError("select_eta: verified bound failed");
  return out;
}

// Tail grouping for the selection pipeline. For a nonincreasing positive
// sequence a_1 >= ... >= a_n and 1 <= i < n, splits the tail indices
// (i, n] greedily so that each slab's energy sum a_k^2 stays within
// sigma^2 / i, where sigma^2 is the whole tail energy, then attaches the
// head index l to the l-th slab. Returns 0-based index groups; group l
// always contains l, the groups partition {0..n-1}, and the last group
// absorbs whatever tail remains.
inline std::vector<std::vector<std::size_t>> group_indices(
    std::span<const double> a, int i) {
  const int n = int(a.size());
  require(i >= 1 && i < n, "group_indices: need 1 <= i < n");
  for (int k = 0; k < n; ++k) {
    require(a[std::size_t(k)] > 0.0, "group_indices: entries must be > 0");
    if (k > 0)
      require(a[std::size_t(k - 1)] >= a[std::size_t(k)],
              "group_indices: entries must be nonincreasing");
  }

  NeumaierSum tail;
  for (int k = i; k < n; ++k)
    tail.add(a[std::size_t(k)] * a[std::size_t(k)]);
  const double budget = tail.value() / double(i);

  // m[l] = 1-based end of slab l; slab l covers (m[l-1], m[l]].
  std::vector<int> m(std::size_t(i) + 1);
  m[0] = i;
  for (int l = 1; l < i; ++l) {
    int end = m[std::size_t(l - 1)];
    NeumaierSum slab;
    while (end < n) {
      double next = a[std::size_t(end)] * a[std::size_t(end)];
      slab.add(next);
      if (slab.value() > budget) break;
      ++end;
    }
    m[std::size_t(l)] = end;
  }
  m[std::size_t(i)] = n;

  std::vector<std::vector<std::size_t>> groups(static_cast<std::size_t>(i));
  for (int l = 1; l <= i; ++l) {
    auto& g = groups[std::size_t(l - 1)];
    g.push_back(std::size_t(l - 1));
    for (int k = m[std::size_t(l - 1)] + 1; k <= m[std::size_t(l)]; ++k)
      g.push_back(std::size_t(k - 1));
  }
  return groups;
}

// Signs delta maximizing (or at least certifying) the L1 mass of
// sum delta_k a_k f_k over a group of unit-L1 functions:
//     integral | sum delta_k a_k f_k |  >=  (1/sqrt 2) * sqrt(sum a_k^2).
// The bound is the L1 Khintchine constant: averaging over all sign choices
// already attains it, so the exhaustive maximum (group size <= threshold,
// Gray-code walk) always certifies. Larger groups use seeded random
// restarts plus greedy single flips; the result is re-verified against the
// bound and a SearchFailure is thrown if it falls short.
struct KhintchineResult {
  SignVector delta;
  double value = 0.0;  // integral | sum delta_k a_k f_k |
  double bound = 0.0;  // (1/sqrt 2) * sqrt(sum a_k^2)
  bool exhaustive = true;
};

namespace detail {

// integral |cur| over refinement cells.
inline double abs_mass(std::span<const double> cur, const Refinement& r) {
  NeumaierSum s;
  for (std::size_t cell = 0; cell < cur.size(); ++cell)
    s.add(std::abs(cur[cell]) * r.measure(cell));
  return s.value();
}

}  // namespace detail

inline KhintchineResult khintchine_signs(std::span<const double> a,
                                         std::span<const StepFn1D> f,
                                         std::uint64_t seed = 1,
                                         int exhaustive_threshold = 20,
                                         int restarts = 64) {
  const std::size_t g = a.size();
  require(g >= 1 && g == f.size(), "khintchine_signs: size mismatch");
  require(exhaustive_threshold >= 0 && exhaustive_threshold <= 24,
          "khintchine_signs: threshold out of range");
  for (double ak : a)
    require(std::isfinite(ak) && ak > 0.0,
            "khintchine_signs: coefficients must be > 0");
  for (const auto& fk : f)
    require(std::abs(fk.integral_abs() - 1.0) <= 1e-12,
            "khintchine_signs: functions must have unit L1 norm");

  NeumaierSum energy;
  for (double ak : a) energy.add(ak * ak);

  KhintchineResult out;
  out.bound = std::sqrt(energy.value()) / std::sqrt(2.0);
  out.delta.assign(g, +1);

  Refinement r = refine(f);
  std::vector<std::vector<double>> w(g);
  for (std::size_t k = 0; k < g; ++k) {
    w[k].resize(r.cell_count());
    for (std::size_t cell = 0; cell < r.cell_count(); ++cell)
      w[k][cell] = a[k] * r.values[k][cell];
  }

  std::vector<double> cur(r.cell_count(), 0.0);
  auto reset_cur = [&](const SignVector& delta) {
    for (std::size_t cell = 0; cell < r.cell_count(); ++cell) {
      NeumaierSum s;
      for (std::size_t k = 0; k < g; ++k) s.add(delta[k] * w[k][cell]);
      cur[cell] = s.value();
    }
  };
  auto flip = [&](SignVector& delta, std::size_t k) {
    delta[k] = -delta[k];
    const double two = 2.0 * delta[k];
    for (std::size_t cell = 0; cell < r.cell_count(); ++cell)
      cur[cell] += two * w[k][cell];
  };

  if (int(g) <= exhaustive_threshold) {
    SignVector delta(g, +1);
    reset_cur(delta);
    out.value = detail::abs_mass(cur, r);
    out.delta = delta;
    const std::uint64_t count = std::uint64_t(1) << g;
    for (std::uint64_t t = 1; t < count; ++t) {
      flip(delta, std::size_t(std::countr_zero(t)));  // Gray-code walk
      double val = detail::abs_mass(cur, r);
      if (val > out.value) {
        out.value = val;
        out.delta = delta;
      }
    }
    out.exhaustive = true;
  } else {
    out.exhaustive = false;
    out.value = -1.0;
    for (int attempt = 0; attempt < restarts; ++attempt) {
      Rng rng(seed, std::uint64_t(attempt));
      SignVector delta(g);
      for (auto& s : delta) s = rng.uniform01() < 0.5 ? -1 : +1;
      reset_cur(delta);
      double val = detail::abs_mass(cur, r);
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t k = 0; k < g; ++k) {
          flip(delta, k);
          double cand = detail::abs_mass(cur, r);
          if (cand > val) {
            val = cand;
            improved = true;
          } else {
            flip(delta, k);  // undo
          }
        }
      }
      if (val > out.value) {
        out.value = val;
        out.delta = delta;
      }
      if (out.value >= out.bound) break;
    }
  }
  // Incremental updates drift by a few ulps over long walks; report the
  // exact objective of the chosen signs.
  reset_cur(out.delta);
  out.value = detail::abs_mass(cur, r);
  if (out.value < out.bound * (1.0 - 1e-12) - 1e-15) {
    if (!out.exhaustive)
      throw SearchFailure(
          "khintchine_signs: heuristic ended below the certified bound");
    throw CertificationError("khintchine_signs: bound verification failed");
  }
  return out;
}

// Coefficient regime recorded in the certificate: head_dominant when the
// head sum s_1 + ... + s_i is at least half of sqrt(i) times the tail
// euclidean mass, tail_dominant otherwise.
enum class CoeffRegime { head_dominant, tail_dominant };

struct SelectionCertificate {
  int i = 1;
  double tau = 0.5;  // 2^-i
  double d = 1.0 / 3.0;
  PigeonholeBranch branch = PigeonholeBranch::a;
  CoeffRegime regime = CoeffRegime::head_dominant;
  std::vector<std::vector<std::size_t>> groups;  // over sorted nonzero funcs
  SignVector delta;                              // per sorted nonzero index
  SignVector eta;                                // per group
  std::vector<std::size_t> order;  // sorted position -> original index
  double lhs = 0.0;          // head integral of selected combination
  double rhs_formula = 0.0;  // two-term closed form of rad_head_sides
  double rad_side = 0.0;     // head integral of sum a_k r_k (NaN if n > 20)
  double gamma_emp = 0.0;    // lhs / rhs_formula, certified >= 1/(9 sqrt 2)
  double gamma_vs_rad = 0.0; // lhs / rad_side
};

struct SignSelection {
  SignVector signs;  // per original function
  SelectionCertificate cert;
};

struct SelectOptions {
  double d = 1.0 / 3.0;
  std::uint64_t seed = 1;
  int khintchine_exhaustive_threshold = 20;
};

inline double selection_gamma_floor() {
  return 1.0 / (9.0 * std::sqrt(2.0));
}

inline SignSelection select_signs(std::span<const StepFn1D> g, int i,
                                  const SelectOptions& opts = {}) {
  require(!g.empty(), "select_signs: empty family");
  require(i >= 1 && i <= 60, "select_signs: need 1 <= i <= 60");
  require(opts.d > 0.0 && opts.d < 0.5, "select_signs: need d in (0, 1/2)");

  // Coefficients; zero functions take +1 and are excluded from the pipeline.
  std::vector<double> a_all(g.size());
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < g.size(); ++k) {
    a_all[k] = g[k].integral_abs();
    if (a_all[k] > 0.0) order.push_back(k);
  }
  require(!order.empty(), "select_signs: family is identically zero");
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a_all[x] > a_all[y];
  });
  const int n = int(order.size());

  std::vector<double> a(order.size());
  std::vector<StepFn1D> unit;
  unit.reserve(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    a[j] = a_all[order[j]];
    unit.push_back(g[order[j]].scaled(1.0 / a[j]));
  }

  SelectionCertificate cert;
  cert.i = i;
  cert.tau = std::ldexp(1.0, -i);
  cert.d = opts.d;
  cert.order = order;

  if (i < n)
    cert.groups = group_indices(a, i);
  else {
    cert.groups.resize(std::size_t(n));
    for (int l = 0; l < n; ++l) cert.groups[std::size_t(l)] = {std::size_t(l)};
  }

  // Khintchine signs inside each group, then one pattern per group.
  cert.delta.assign(order.size(), +1);
  std::vector<StepFn1D> y;
  y.reserve(cert.groups.size());
  for (std::size_t l = 0; l < cert.groups.size(); ++l) {
    const auto& grp = cert.groups[l];
    std::vector<double> ga(grp.size());
    std::vector<StepFn1D> gf;
    gf.reserve(grp.size());
    for (std::size_t t = 0; t < grp.size(); ++t) {
      ga[t] = a[grp[t]];
      gf.push_back(unit[grp[t]]);
    }
    KhintchineResult kh =
        khintchine_signs(ga, gf, opts.seed + l,
                         opts.khintchine_exhaustive_threshold);
    std::vector<double> coeff(grp.size());
    for (std::size_t t = 0; t < grp.size(); ++t) {
      cert.delta[grp[t]] = kh.delta[t];
      coeff[t] = kh.delta[t] * ga[t];
    }
    y.push_back(linear_combination(gf, coeff));
  }

  EtaSelection eta = select_eta(y, opts.d, i);
  cert.branch = eta.branch;
  cert.eta = eta.eta;

  // Assemble the final signs: eps_j = delta_j * eta_{group of j}.
  std::vector<std::size_t> group_of(order.size());
  for (std::size_t l = 0; l < cert.groups.size(); ++l)
    for (std::size_t j : cert.groups[l]) group_of[j] = l;

  SignVector eps(g.size(), +1);
  for (std::size_t j = 0; j < order.size(); ++j)
    eps[order[j]] = cert.delta[j] * cert.eta[group_of[j]];

  // Certificate sides.
  std::vector<double> coeff_all(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) coeff_all[k] = double(eps[k]);
  cert.lhs = head_integral(linear_combination(g, coeff_all), cert.tau);

  NeumaierSum headsum;
  for (int k = 0; k < std::min(i, n); ++k) headsum.add(a[std::size_t(k)]);
  NeumaierSum tailsq;
  for (int k = i; k < n; ++k)
    tailsq.add(a[std::size_t(k)] * a[std::size_t(k)]);
  const double sigma = std::sqrt(tailsq.value());
  cert.rhs_formula =
      cert.tau * (headsum.value() + std::sqrt(double(i)) * sigma);
  cert.regime = headsum.value() >= 0.5 * std::sqrt(double(i)) * sigma
                    ? CoeffRegime::head_dominant
                    : CoeffRegime::tail_dominant;

  cert.rad_side = n <= kMaxRademacher
                      ? head_integral(rademacher_sum(a), cert.tau)
                      : std::numeric_limits<double>::quiet_NaN();
  cert.gamma_emp = cert.lhs / cert.rhs_formula;
  cert.gamma_vs_rad = cert.lhs / cert.rad_side;

  if (!(cert.gamma_emp >= selection_gamma_floor() - 1e-12))
    throw CertificationError(
        "select_signs: certificate ratio fell below 1/(9 sqrt 2)");
  return {std::move(eps), std::move(cert)};
}

}  // namespace rispace
