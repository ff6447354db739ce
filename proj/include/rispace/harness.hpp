#pragma once

// Experiment harness: randomized families, the max-over-signs norm, summing
// ratios, the domination and concavity checks, and reproducible suites.
// Every randomized routine takes an explicit seed and derives one RNG per
// trial, so reports are byte-identical for identical (id, seed, params).

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rispace/mixed2d.hpp"
#include "rispace/norms.hpp"
#include "rispace/rademacher.hpp"
#include "rispace/signselect.hpp"

namespace rispace {

// --------------------------------------------------------------------------
// Max over sign choices.

struct MaxSignOptions {
  int exhaustive_threshold = 20;  // families up to this size are enumerated
  std::uint64_t seed = 1;
  int restarts = 64;
};

struct MaxSignResult {
  double value = 0.0;
  SignVector signs;
  bool exhaustive = true;  // false: seeded heuristic, value is a lower bound
};

// max over eps in {-1,+1}^n of || sum eps_k f_k || in the given function
// space. Exhaustive search walks a Gray code so each candidate costs one
// sign flip; beyond the threshold a seeded greedy heuristic runs and the
// result is labeled as a lower bound. For the summing ratios this max is
// the operational meaning of the dual-ball supremum: for L1-normed duality
// the two coincide, and every recorded ratio uses this definition.
inline MaxSignResult max_sign_norm(std::span<const StepFn1D> fns,
                                   const SpaceSpec& space,
                                   const MaxSignOptions& opts = {}) {
  require(!fns.empty(), "max_sign_norm: empty family");
  require(space.is_function_space(),
          "max_sign_norm: need a function space spec");
  require(opts.exhaustive_threshold >= 0 && opts.exhaustive_threshold <= 24,
          "max_sign_norm: threshold out of range");

  Refinement r = refine(fns);
  const std::size_t n = fns.size();
  std::vector<double> cur(r.cell_count());

  auto reset_cur = [&](const SignVector& eps) {
    for (std::size_t cell = 0; cell < r.cell_count(); ++cell) {
      NeumaierSum s;
      for (std::size_t k = 0; k < n; ++k) s.add(eps[k] * r.values[k][cell]);
      cur[cell] = s.value();
    }
  };
  auto flip = [&](SignVector& eps, std::size_t k) {
    eps[k] = -eps[k];
    const double two = 2.0 * eps[k];
    for (std::size_t cell = 0; cell < r.cell_count(); ++cell)
      cur[cell] += two * r.values[k][cell];
  };
  auto eval = [&]() { return space_norm(StepFn1D(r.grid, cur), space); };

  MaxSignResult out;
  if (int(n) <= opts.exhaustive_threshold) {
    SignVector eps(n, +1);
    reset_cur(eps);
    out.value = eval();
    out.signs = eps;
    const std::uint64_t count = std::uint64_t(1) << n;
    for (std::uint64_t t = 1; t < count; ++t) {
      flip(eps, std::size_t(std::countr_zero(t)));
      double val = eval();
      if (val > out.value) {
        out.value = val;
        out.signs = eps;
      }
    }
    out.exhaustive = true;
  } else {
    out.exhaustive = false;
    out.value = -1.0;
    for (int attempt = 0; attempt < opts.restarts; ++attempt) {
      Rng rng(opts.seed, std::uint64_t(attempt));
      SignVector eps(n);
      for (auto& s : eps) s = rng.uniform01() < 0.5 ? -1 : +1;
      reset_cur(eps);
      double val = eval();
      bool improved = true;
      while (improved) {
        improved = false;
        for (std::size_t k = 0; k < n; ++k) {
          flip(eps, k);
          double cand = eval();
          if (cand > val) {
            val = cand;
            improved = true;
          } else {
            flip(eps, k);
          }
        }
      }
      if (val > out.value) {
        out.value = val;
        out.signs = eps;
      }
    }
  }
  reset_cur(out.signs);
  out.value = eval();
  return out;
}

// --------------------------------------------------------------------------
// Summing ratios.

struct SummingRatio {
  double seq_side = 0.0;   // sequence norm of the per-function target norms
  double sign_side = 0.0;  // max over signs in the domain space
  double ratio = 0.0;
  MaxSignResult max;
};

inline SummingRatio summing_ratio(std::span<const StepFn1D> fns,
                                  const SpaceSpec& seq,
                                  const SpaceSpec& target,
                                  const SpaceSpec& domain,
                                  const MaxSignOptions& opts = {}) {
  require(target.is_function_space(),
          "summing_ratio: target must be a function space");
  std::vector<double> norms(fns.size());
  for (std::size_t k = 0; k < fns.size(); ++k)
    norms[k] = space_norm(fns[k], target);
  SummingRatio out;
  out.seq_side = seq_norm(norms, seq);
  out.max = max_sign_norm(fns, domain, opts);
  out.sign_side = out.max.value;
  require(out.sign_side > 0.0,
          "summing_ratio: family must not vanish identically");
  out.ratio = out.seq_side / out.sign_side;
  return out;
}

// The extremal disjoint-indicator family: f_i = indicator of
// [(i-1)/k, i/k). Supports partition [0,1) and |eps_i| = 1, so every sign
// choice gives |sum eps_i f_i| = 1 everywhere and the sign side equals the
// log-weight Lorentz norm of the unit indicator, which is exactly 1. The
// ratio is k^(1/p - 1/q) in closed form.
struct DisjointFamilyRatio {
  double seq_side = 0.0;
  double sign_side = 0.0;
  double ratio = 0.0;
  double closed_form = 0.0;
};

inline DisjointFamilyRatio disjoint_indicator_ratio(int k, double p,
                                                    double q) {
  require(k >= 1, "disjoint_indicator_ratio: need k >= 1");
  require(p > 1.0 && p < 2.0, "disjoint_indicator_ratio: need p in (1,2)");
  require(q >= 1.0 && std::isfinite(q), "disjoint_indicator_ratio: bad q");
  std::vector<StepFn1D> fns;
  fns.reserve(std::size_t(k));
  std::vector<double> ones(std::size_t(k), 1.0);
  for (int i = 1; i <= k; ++i)
    fns.push_back(StepFn1D::indicator((i - 1) / double(k), i / double(k)));

  std::vector<double> norms(fns.size());
  for (std::size_t j = 0; j < fns.size(); ++j) norms[j] = lp_norm(fns[j], q);

  DisjointFamilyRatio out;
  out.seq_side = seq_norm(norms, SpaceSpec::Lp(p));
  out.sign_side =
      lorentz_norm(linear_combination(fns, ones), p, WeightFn::log_power(p));
  out.ratio = out.seq_side / out.sign_side;
  out.closed_form = std::pow(double(k), 1.0 / p - 1.0 / q);
  return out;
}

// --------------------------------------------------------------------------
// Domination of the coefficient Rademacher sum in a Marcinkiewicz space.

struct RadDomination {
  double lhs = 0.0;    // || sum ||f_k||_1 r_k || in M_w
  double rhs = 0.0;    // max over signs of || sum eps f_k || in M_w
  double ratio = 0.0;  // lhs / rhs, the recorded constant
  int i_star = 0;      // maximizing dyadic level of the M_w objective
  double gamma = 0.0;  // head-integral ratio achieved by the selected signs
  double cross_rhs = 0.0;  // (2/gamma) * || sum eps f_k ||, verified >= lhs
};

// Checks || sum_k ||f_k||_1 r_k ||_{M_w} <= c * max_eps || sum eps_k f_k ||
// and certifies the chain constructively: the Marcinkiewicz sup of the
// Rademacher side is attained within a factor 2 at a dyadic level 2^-i*,
// where the sign selection guarantees a positive head-integral ratio gamma,
// so lhs <= (2/gamma) * || sum eps f_k ||_{M_w} always holds. Verified per
// call; failure throws.
inline RadDomination rad_domination_check(std::span<const StepFn1D> fns,
                                          const WeightFn& w,
                                          const SelectOptions& sel_opts = {},
                                          const MaxSignOptions& max_opts = {}) {
  require(!fns.empty() && int(fns.size()) <= kMaxRademacher,
          "rad_domination_check: family size out of range");
  std::vector<double> a(fns.size());
  bool any = false;
  for (std::size_t k = 0; k < fns.size(); ++k) {
    a[k] = fns[k].integral_abs();
    any = any || a[k] > 0.0;
  }
  require(any, "rad_domination_check: family is identically zero");

  RadDomination out;
  StepFn1D rad = rademacher_sum(a);
  out.lhs = marcinkiewicz_norm(rad, w);
  out.rhs = max_sign_norm(fns, SpaceSpec::marcinkiewicz(w), max_opts).value;
  require(out.rhs > 0.0, "rad_domination_check: sign side vanished");
  out.ratio = out.lhs / out.rhs;

  // Maximizing dyadic level of t -> (w(t)/t) * head(t). Levels 0..n cover
  // the sup within a factor 2: on (2^-i-1, 2^-i] every factor is bounded by
  // its value at 2^-i except 1/t < 2^(i+1), and below 2^-n the rearranged
  // sum is flat so the objective is nondecreasing.
  StepFn1D rstar = rearrange(rad);
  const int n = int(fns.size());
  int i_star = 0;
  double v_star = -1.0;
  for (int i = 0; i <= n; ++i) {
    double tau = std::ldexp(1.0, -i);
    double v = w(tau) * (head_integral_sorted(rstar, tau) / tau);
    if (v > v_star) {
      v_star = v;
      i_star = i;
    }
  }
  out.i_star = i_star;

  SignVector eps;
  if (i_star == 0) {
    // tau = 1: one Khintchine pass over the whole family certifies
    // ||sum eps f||_1 >= (1/sqrt 2)||a||_2 >= (1/sqrt 2)||sum a_k r_k||_1.
    std::vector<double> ah;
    std::vector<StepFn1D> unit;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < fns.size(); ++k)
      if (a[k] > 0.0) {
        ah.push_back(a[k]);
        unit.push_back(fns[k].scaled(1.0 / a[k]));
        idx.push_back(k);
      }
    KhintchineResult kh = khintchine_signs(
        ah, unit, sel_opts.seed, sel_opts.khintchine_exhaustive_threshold);
    eps.assign(fns.size(), +1);
    for (std::size_t t = 0; t < idx.size(); ++t) eps[idx[t]] = kh.delta[t];
  } else {
    eps = select_signs(fns, i_star, sel_opts).signs;
  }

  std::vector<double> coeff(fns.size());
  for (std::size_t k = 0; k < fns.size(); ++k) coeff[k] = double(eps[k]);
  StepFn1D sel = linear_combination(fns, coeff);
  const double tau = std::ldexp(1.0, -i_star);
  out.gamma = head_integral(sel, tau) / head_integral_sorted(rstar, tau);
  out.cross_rhs = (2.0 / out.gamma) * marcinkiewicz_norm(sel, w);
  if (!(out.lhs <= out.cross_rhs * (1.0 + 1e-9)))
    throw CertificationError("rad_domination_check: chain verification failed");
  return out;
}

// --------------------------------------------------------------------------
// Weak-sequence summing of L1 norms out of the exponential Orlicz space.

struct WeakSumming {
  double lhs = 0.0;    // averaged weak-lq norm of (||f_i||_1)
  double rhs = 0.0;    // max over signs in ExpL^q
  double ratio = 0.0;  // recorded constant
};

inline WeakSumming weak_summing_check(std::span<const StepFn1D> fns, double p,
                                      const MaxSignOptions& opts = {}) {
  require(p > 1.0 && p < 2.0, "weak_summing_check: need p in (1,2)");
  const double q = p / (p - 1.0);  // conjugate exponent
  std::vector<double> a(fns.size());
  for (std::size_t k = 0; k < fns.size(); ++k) a[k] = fns[k].integral_abs();
  WeakSumming out;
  out.lhs = weak_seq_norm(a, q, WeakForm::average_form);
  out.rhs = max_sign_norm(fns, SpaceSpec::exp_orlicz(q), opts).value;
  require(out.rhs > 0.0, "weak_summing_check: family is identically zero");
  out.ratio = out.lhs / out.rhs;
  return out;
}

// --------------------------------------------------------------------------
// Weak-norm concavity: the weak-lq norm of the LP norms against the LP norm
// of the pointwise weak-lq norm.

struct WeakConcavity {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

inline WeakConcavity weak_concavity_check(std::span<const StepFn1D> fns,
                                          double p, double q) {
  require(p >= 1.0 && q > p, "weak_concavity_check: need 1 <= p < q");
  std::vector<double> norms(fns.size());
  for (std::size_t k = 0; k < fns.size(); ++k) norms[k] = lp_norm(fns[k], p);
  WeakConcavity out;
  out.lhs = weak_seq_norm(norms, q, WeakForm::sup_form);

  Refinement r = refine(fns);
  std::vector<double> cellwise(r.cell_count());
  std::vector<double> column(fns.size());
  for (std::size_t cell = 0; cell < r.cell_count(); ++cell) {
    for (std::size_t k = 0; k < fns.size(); ++k) column[k] = r.values[k][cell];
    cellwise[cell] = weak_seq_norm(column, q, WeakForm::sup_form);
  }
  out.rhs = lp_norm(StepFn1D(r.grid, std::move(cellwise)), p);
  require(out.rhs > 0.0, "weak_concavity_check: family is identically zero");
  out.ratio = out.lhs / out.rhs;
  return out;
}

// --------------------------------------------------------------------------
// Random families. The draw order per function is pinned as part of the
// reproducibility contract: cell count, then the interior breakpoints, then
// the cell values. Values are uniform on [-1,1), or on [0,1) when nonneg.

inline StepFn1D random_stepfn(Rng& rng, std::size_t max_cells, bool nonneg) {
  require(max_cells >= 1, "random_stepfn: need max_cells >= 1");
  const std::size_t cells = 1 + rng.below(max_cells);
  std::vector<double> bp{0.0};
  for (std::size_t j = 0; j + 1 < cells; ++j) bp.push_back(rng.uniform01());
  std::sort(bp.begin(), bp.end());
  bp.push_back(1.0);
  std::vector<double> vv(cells);
  for (auto& v : vv) v = nonneg ? rng.uniform01() : rng.uniform(-1.0, 1.0);
  return StepFn1D(std::move(bp), std::move(vv));
}

inline std::vector<StepFn1D> random_family(Rng& rng, std::size_t count,
                                           std::size_t max_cells,
                                           bool nonneg = false) {
  std::vector<StepFn1D> fns;
  fns.reserve(count);
  for (std::size_t k = 0; k < count; ++k)
    fns.push_back(random_stepfn(rng, max_cells, nonneg));
  return fns;
}

// Random rectangle-grid function on the square: a random t grid whose
// slices are independent random step functions.
inline StepFn2D random_stepfn2d(Rng& rng, std::size_t max_t_cells,
                                std::size_t max_s_cells, bool nonneg = false) {
  const std::size_t cells = 1 + rng.below(max_t_cells);
  std::vector<double> tb{0.0};
  for (std::size_t j = 0; j + 1 < cells; ++j) tb.push_back(rng.uniform01());
  std::sort(tb.begin(), tb.end());
  tb.push_back(1.0);
  std::vector<StepFn1D> slices;
  slices.reserve(cells);
  for (std::size_t j = 0; j < cells; ++j)
    slices.push_back(random_stepfn(rng, max_s_cells, nonneg));
  return StepFn2D(std::move(tb), std::move(slices));
}

inline std::uint64_t family_digest(std::span<const StepFn1D> fns) {
  Fnv1a h;
  for (const auto& f : fns) {
    h.add(f.breakpoints());
    h.add(f.values());
  }
  return h.value();
}

// --------------------------------------------------------------------------
// Suites and reports.

struct TrialRecord {
  std::uint64_t digest = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct Aggregate {
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

struct ExperimentReport {
  std::string id;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  std::vector<TrialRecord> trials;
  Aggregate aggregate;
};

inline Aggregate aggregate_ratios(std::span<const TrialRecord> trials) {
  Aggregate agg;
  agg.count = trials.size();
  if (trials.empty()) return agg;
  agg.min = trials.front().ratio;
  agg.max = trials.front().ratio;
  NeumaierSum mean;
  for (const auto& t : trials) {
    agg.min = std::min(agg.min, t.ratio);
    agg.max = std::max(agg.max, t.ratio);
    mean.add(t.ratio);
  }
  agg.mean = mean.value() / double(agg.count);
  return agg;
}

namespace detail {

inline std::map<std::string, double> merge_params(
    std::map<std::string, double> defaults,
    const std::map<std::string, double>& given, const char* id) {
  for (const auto& [key, val] : given) {
    auto it = defaults.find(key);
    if (it == defaults.end())
      throw std::invalid_argument(std::string("run_suite: unknown parameter '") +
                                  key + "' for suite " + id);
    it->second = val;
  }
  return defaults;
}

}  // namespace detail

// Named reproducible experiment suites. Each trial derives its own RNG from
// (seed, trial index); the report is a pure function of (id, seed, trials,
// params). Certified checks throw on failure rather than recording a bad
// trial. Suites over fixed grids (kernel-divergence, disjoint-family,
// rad-summing) ignore the requested trial count and run their grid.
inline ExperimentReport run_suite(
    const std::string& id, std::uint64_t seed, std::size_t trials,
    const std::map<std::string, double>& params_in = {}) {
  ExperimentReport rep;
  rep.id = id;
  rep.seed = seed;

  auto push = [&](std::uint64_t digest, double lhs, double rhs) {
    rep.trials.push_back({digest, lhs, rhs, lhs / rhs});
  };

  if (id == "rad-head") {
    rep.params = detail::merge_params({{"n", 10}}, params_in, "rad-head");
    const int n = int(rep.params.at("n"));
    require(n >= 1 && n <= kMaxRademacher, "rad-head: n out of range");
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      std::vector<double> a(static_cast<std::size_t>(n));
      for (auto& x : a) x = rng.uniform(-1.0, 1.0);
      const int i = 1 + int(t % std::size_t(n));
      RadHeadSides sides = rad_head_sides(a, i);
      Fnv1a h;
      h.add(a);
      h.add(double(i));
      push(h.value(), sides.lhs, sides.rhs);
    }
  } else if (id == "select") {
    rep.params = detail::merge_params({{"n_max", 8}, {"cells", 32}}, params_in,
                                      "select");
    const std::size_t n_max = std::size_t(rep.params.at("n_max"));
    const std::size_t cells = std::size_t(rep.params.at("cells"));
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      const std::size_t count = 1 + rng.below(n_max);
      auto fns = random_family(rng, count, cells);
      const int i = 1 + int(rng.below(count));
      SelectOptions opts;
      opts.seed = seed ^ t;
      SignSelection sel = select_signs(fns, i, opts);
      push(family_digest(fns), sel.cert.gamma_emp, selection_gamma_floor());
    }
  } else if (id == "rad-domination") {
    rep.params = detail::merge_params({{"p", 1.5}, {"n_max", 6}, {"cells", 16}},
                                      params_in, "rad-domination");
    const WeightFn w =
        WeightFn::log_power_conjugate(rep.params.at("p"));
    const std::size_t n_max = std::size_t(rep.params.at("n_max"));
    const std::size_t cells = std::size_t(rep.params.at("cells"));
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      const std::size_t count = 1 + rng.below(n_max);
      auto fns = random_family(rng, count, cells);
      SelectOptions sopts;
      sopts.seed = seed ^ t;
      MaxSignOptions mopts;
      mopts.seed = seed ^ t;
      RadDomination res = rad_domination_check(fns, w, sopts, mopts);
      push(family_digest(fns), res.lhs, res.rhs);
    }
  } else if (id == "weak-summing") {
    rep.params = detail::merge_params({{"p", 1.5}, {"n_max", 8}, {"cells", 16}},
                                      params_in, "weak-summing");
    const double p = rep.params.at("p");
    const std::size_t n_max = std::size_t(rep.params.at("n_max"));
    const std::size_t cells = std::size_t(rep.params.at("cells"));
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      const std::size_t count = 1 + rng.below(n_max);
      auto fns = random_family(rng, count, cells);
      MaxSignOptions mopts;
      mopts.seed = seed ^ t;
      WeakSumming res = weak_summing_check(fns, p, mopts);
      push(family_digest(fns), res.lhs, res.rhs);
    }
  } else if (id == "weak-concavity") {
    rep.params = detail::merge_params(
        {{"p", 1.5}, {"q", 2.0}, {"n_max", 8}, {"cells", 16}}, params_in,
        "weak-concavity");
    const double p = rep.params.at("p");
    const double q = rep.params.at("q");
    const std::size_t n_max = std::size_t(rep.params.at("n_max"));
    const std::size_t cells = std::size_t(rep.params.at("cells"));
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      const std::size_t count = 1 + rng.below(n_max);
      auto fns = random_family(rng, count, cells);
      WeakConcavity res = weak_concavity_check(fns, p, q);
      push(family_digest(fns), res.lhs, res.rhs);
    }
  } else if (id == "embedding") {
    rep.params =
        detail::merge_params({{"p", 1.5}, {"cells", 32}}, params_in, "embedding");
    const double p = rep.params.at("p");
    const std::size_t cells = std::size_t(rep.params.at("cells"));
    const WeightFn w = WeightFn::log_power(p);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      StepFn1D f = random_stepfn(rng, cells, false);
      const StepFn1D one[1] = {f};
      push(family_digest(one), lp_norm(f, p), lorentz_norm(f, p, w));
    }
  } else if (id == "coincidence") {
    rep.params = detail::merge_params({{"p", 1.5}, {"cells", 32}}, params_in,
                                      "coincidence");
    const double p = rep.params.at("p");
    const double q = p / (p - 1.0);
    const std::size_t cells = std::size_t(rep.params.at("cells"));
    const WeightFn w = WeightFn::log_power_conjugate(p);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      StepFn1D f = random_stepfn(rng, cells, false);
      const StepFn1D one[1] = {f};
      push(family_digest(one), luxemburg_norm(f, q), marcinkiewicz_norm(f, w));
    }
  } else if (id == "transpose-random") {
    rep.params = detail::merge_params(
        {{"p", 1.5}, {"alpha", 2.0}, {"t_cells", 6}, {"s_cells", 6}}, params_in,
        "transpose-random");
    const double p = rep.params.at("p");
    const double alpha = rep.params.at("alpha");
    const std::size_t tc = std::size_t(rep.params.at("t_cells"));
    const std::size_t sc = std::size_t(rep.params.at("s_cells"));
    const SpaceSpec inner = SpaceSpec::exp_orlicz(alpha);
    for (std::size_t t = 0; t < trials; ++t) {
      Rng rng(seed, t);
      StepFn2D F = random_stepfn2d(rng, tc, sc);
      double denom = mixed_norm(
          F, SpaceSpec::Lp(std::numeric_limits<double>::infinity()), inner);
      require(denom > 0.0, "transpose-random: degenerate zero draw");
      double numer = mixed_norm(F.transpose(), SpaceSpec::Lp(p), inner);
      Fnv1a h;
      h.add(F.t_breakpoints());
      for (const auto& sl : F.slices()) {
        h.add(sl.breakpoints());
        h.add(sl.values());
      }
      push(h.value(), numer, denom);
    }
  } else if (id == "kernel-divergence") {
    rep.params = detail::merge_params({{"p", 1.5}, {"n_min", 2}, {"n_max", 10}},
                                      params_in, "kernel-divergence");
    const double p = rep.params.at("p");
    const int n_min = int(rep.params.at("n_min"));
    const int n_max = int(rep.params.at("n_max"));
    require(1 <= n_min && n_min <= n_max && n_max <= 24,
            "kernel-divergence: bad n range");
    for (int n = n_min; n <= n_max; ++n) {
      DivergenceKernel kern(n, p);
      double col = std::pow(kern.transposed_section_norm_p(), 1.0 / p);
      double sup = kern.sup_section_norm();
      Fnv1a h;
      h.add(double(n));
      h.add(p);
      push(h.value(), col, sup);
    }
  } else if (id == "disjoint-family") {
    rep.params = detail::merge_params({{"p", 1.5}, {"q", 2.0}}, params_in,
                                      "disjoint-family");
    const double p = rep.params.at("p");
    const double q = rep.params.at("q");
    for (int k : {2, 4, 8, 16, 32, 64}) {
      DisjointFamilyRatio res = disjoint_indicator_ratio(k, p, q);
      Fnv1a h;
      h.add(double(k));
      h.add(p);
      h.add(q);
      push(h.value(), res.seq_side, res.sign_side);
    }
  } else if (id == "rad-summing") {
    rep.params = detail::merge_params({{"p", 1.5}, {"q", 1.7}}, params_in,
                                      "rad-summing");
    const double p = rep.params.at("p");
    const double q = rep.params.at("q");
    for (int k : {2, 4, 6, 8, 10}) {
      std::vector<StepFn1D> fns;
      fns.reserve(std::size_t(k));
      for (int j = 1; j <= k; ++j) fns.push_back(rademacher(j));
      SummingRatio res =
          summing_ratio(fns, SpaceSpec::Lp(q), SpaceSpec::Lp(p),
                        SpaceSpec::lorentz_log(p));
      push(family_digest(fns), res.seq_side, res.sign_side);
    }
  } else {
    throw std::invalid_argument("run_suite: unknown suite id '" + id + "'");
  }

  rep.aggregate = aggregate_ratios(rep.trials);
  return rep;
}

}  // namespace rispace
