#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rispace/harness.hpp"
#include "rispace/json_io.hpp"

using namespace rispace;

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool near_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("max over signs on families with sign-independent norms") {
  std::vector<StepFn1D> disjoint{StepFn1D::indicator(0.0, 0.5),
                                 StepFn1D::indicator(0.5, 1.0)};
  MaxSignResult r = max_sign_norm(disjoint, SpaceSpec::Lp(2.0));
  REQUIRE(r.exhaustive);
  REQUIRE(near(r.value, 1.0, 1e-13));

  std::vector<StepFn1D> rads{rademacher(1), rademacher(2)};
  MaxSignResult r2 = max_sign_norm(rads, SpaceSpec::Lp(2.0));
  REQUIRE(near(r2.value, std::sqrt(2.0), 1e-13));

  REQUIRE_THROWS_AS(max_sign_norm({}, SpaceSpec::Lp(2.0)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(
      max_sign_norm(rads, SpaceSpec::weak_seq(2.0, WeakForm::sup_form)),
      std::invalid_argument);
}

TEST_CASE("max over signs prefers the aligned combination") {
  // f1 = f2 on [0,1/2): aligning doubles the mass there.
  std::vector<StepFn1D> fns{StepFn1D::indicator(0.0, 0.5),
                            StepFn1D({0.0, 0.5, 1.0}, {1.0, -1.0})};
  MaxSignResult r = max_sign_norm(fns, SpaceSpec::Lp(1.0));
  REQUIRE(near(r.value, 1.5, 1e-13));
  REQUIRE(r.signs[0] * r.signs[1] == 1);
}

TEST_CASE("heuristic sign search never beats the exhaustive maximum") {
  Rng rng(806);
  for (int trial = 0; trial < 10; ++trial) {
    auto fns = random_family(rng, 6, 10);
    MaxSignOptions ex_opts;
    MaxSignResult ex = max_sign_norm(fns, SpaceSpec::Lp(1.7), ex_opts);
    MaxSignOptions h_opts;
    h_opts.exhaustive_threshold = 0;
    h_opts.seed = 55 + std::uint64_t(trial);
    MaxSignResult h = max_sign_norm(fns, SpaceSpec::Lp(1.7), h_opts);
    REQUIRE(ex.exhaustive);
    REQUIRE_FALSE(h.exhaustive);
    REQUIRE(h.value <= ex.value * (1.0 + 1e-12));
    REQUIRE(h.value > 0.0);
  }
}

TEST_CASE("disjoint indicator families have a closed-form ratio") {
  DisjointFamilyRatio r = disjoint_indicator_ratio(16, 1.5, 2.0);
  REQUIRE(near_rel(r.sign_side, 1.0, 1e-13));
  REQUIRE(near_rel(r.ratio, std::pow(16.0, 1.0 / 6.0), 1e-12));
  REQUIRE(near_rel(r.ratio, r.closed_form, 1e-12));

  DisjointFamilyRatio one = disjoint_indicator_ratio(1, 1.5, 2.0);
  REQUIRE(near_rel(one.ratio, 1.0, 1e-12));

  REQUIRE_THROWS_AS(disjoint_indicator_ratio(0, 1.5, 2.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(disjoint_indicator_ratio(4, 2.5, 2.0),
                    std::invalid_argument);
}

TEST_CASE("summing ratio composes its two sides") {
  std::vector<StepFn1D> fns{rademacher(1), rademacher(2), rademacher(3)};
  SummingRatio r = summing_ratio(fns, SpaceSpec::Lp(1.7), SpaceSpec::Lp(1.5),
                                 SpaceSpec::lorentz_log(1.5));
  std::vector<double> norms;
  for (const auto& f : fns) norms.push_back(lp_norm(f, 1.5));
  REQUIRE(near_rel(r.seq_side, seq_norm(norms, SpaceSpec::Lp(1.7)), 1e-13));
  REQUIRE(r.sign_side > 0.0);
  REQUIRE(near_rel(r.ratio, r.seq_side / r.sign_side, 1e-15));

  std::vector<StepFn1D> zeros{StepFn1D::zero()};
  REQUIRE_THROWS_AS(summing_ratio(zeros, SpaceSpec::Lp(1.7),
                                  SpaceSpec::Lp(1.5),
                                  SpaceSpec::lorentz_log(1.5)),
                    std::invalid_argument);
}

TEST_CASE("domination check certifies its chain on random families") {
  Rng rng(917);
  WeightFn w = WeightFn::log_power_conjugate(1.5);
  for (int trial = 0; trial < 8; ++trial) {
    auto fns = random_family(rng, 1 + rng.below(4), 10);
    bool any = false;
    for (const auto& f : fns) any = any || f.integral_abs() > 0.0;
    if (!any) continue;
    SelectOptions sopts;
    sopts.seed = 31 + std::uint64_t(trial);
    RadDomination res = rad_domination_check(fns, w, sopts);
    REQUIRE(res.rhs > 0.0);
    REQUIRE(res.ratio == res.lhs / res.rhs);
    REQUIRE(res.i_star >= 0);
    REQUIRE(res.i_star <= int(fns.size()));
    REQUIRE(res.gamma > 0.0);
    REQUIRE(res.lhs <= res.cross_rhs * (1.0 + 1e-9));
  }
}

TEST_CASE("weak summing check on a fixed family") {
  std::vector<StepFn1D> fns{StepFn1D::indicator(0.0, 0.5),
                            StepFn1D::indicator(0.5, 1.0)};
  WeakSumming r = weak_summing_check(fns, 1.5);
  // L1 norms are (1/2, 1/2); the averaged weak-l3 norm is 2^(2/3) / 2.
  REQUIRE(near_rel(r.lhs, std::pow(2.0, 2.0 / 3.0) / 2.0, 1e-13));
  REQUIRE(r.rhs > 0.0);
  REQUIRE_THROWS_AS(weak_summing_check(fns, 2.5), std::invalid_argument);
}

TEST_CASE("weak concavity check has a closed form on disjoint indicators") {
  const int K = 8;
  std::vector<StepFn1D> fns;
  for (int k = 1; k <= K; ++k)
    fns.push_back(StepFn1D::indicator((k - 1) / double(K), k / double(K)));
  WeakConcavity r = weak_concavity_check(fns, 1.5, 2.0);
  REQUIRE(near_rel(r.rhs, 1.0, 1e-13));
  REQUIRE(near_rel(r.lhs, std::pow(double(K), 0.5 - 2.0 / 3.0), 1e-12));
  REQUIRE_THROWS_AS(weak_concavity_check(fns, 2.0, 1.5),
                    std::invalid_argument);
}

TEST_CASE("random draws honor their cell budget and range") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    StepFn1D f = random_stepfn(rng, 8, false);
    REQUIRE(f.cell_count() <= 8);
    REQUIRE(f.sup_abs() < 1.0);
    StepFn1D g = random_stepfn(rng, 8, true);
    for (double v : g.values()) REQUIRE(v >= 0.0);
  }
}

TEST_CASE("suites are reproducible and seed-sensitive") {
  std::map<std::string, double> params{{"n_max", 4}, {"cells", 8}};
  ExperimentReport a = run_suite("select", 42, 4, params);
  ExperimentReport b = run_suite("select", 42, 4, params);
  REQUIRE(to_json(a).dump() == to_json(b).dump());
  REQUIRE(a.trials.size() == 4);
  REQUIRE(a.aggregate.count == 4);

  ExperimentReport c = run_suite("select", 43, 4, params);
  REQUIRE(c.trials[0].digest != a.trials[0].digest);

  REQUIRE_THROWS_AS(run_suite("no-such-suite", 1, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(run_suite("select", 1, 1, {{"bogus", 1.0}}),
                    std::invalid_argument);
}

TEST_CASE("suite aggregates summarize the trial ratios") {
  ExperimentReport rep = run_suite("rad-head", 7, 12, {{"n", 6}});
  REQUIRE(rep.trials.size() == 12);
  double mn = rep.trials[0].ratio, mx = rep.trials[0].ratio, sum = 0.0;
  for (const auto& t : rep.trials) {
    mn = std::min(mn, t.ratio);
    mx = std::max(mx, t.ratio);
    sum += t.ratio;
  }
  REQUIRE(rep.aggregate.min == mn);
  REQUIRE(rep.aggregate.max == mx);
  REQUIRE(near_rel(rep.aggregate.mean, sum / 12.0, 1e-12));
}

TEST_CASE("deterministic suites run their fixed grids") {
  ExperimentReport k = run_suite("kernel-divergence", 1, 999,
                                 {{"n_min", 2}, {"n_max", 5}});
  REQUIRE(k.trials.size() == 4);
  for (const auto& t : k.trials) {
    REQUIRE(t.rhs <= 1.0 + 1e-12);
    REQUIRE(t.ratio > 1.0);
  }
  // The column-to-section ratio grows along the grid.
  REQUIRE(k.trials.back().ratio > k.trials.front().ratio);

  ExperimentReport e = run_suite("disjoint-family", 1, 0, {});
  REQUIRE(e.trials.size() == 6);
  for (const auto& t : e.trials) REQUIRE(near_rel(t.rhs, 1.0, 1e-12));
}

TEST_CASE("step functions round trip through JSON") {
  StepFn1D f({0.0, 0.25, 1.0}, {2.0, -0.5});
  nlohmann::json j = to_json(f);
  REQUIRE(j.at("schema") == kStepFnSchema);
  REQUIRE(stepfn_from_json(j) == f);

  nlohmann::json wrong = j;
  wrong["schema"] = "rispace/other-v1";
  REQUIRE_THROWS_AS(stepfn_from_json(wrong), std::invalid_argument);
  nlohmann::json missing = j;
  missing.erase("values");
  REQUIRE_THROWS_AS(stepfn_from_json(missing), std::invalid_argument);

  // Untagged objects with the right shape are accepted.
  nlohmann::json bare{{"breakpoints", {0.0, 0.5, 1.0}}, {"values", {1.0, 2.0}}};
  REQUIRE(stepfn_from_json(bare).cell_count() == 2);
}

TEST_CASE("plane step functions round trip through JSON") {
  Rng rng(3);
  StepFn2D F = random_stepfn2d(rng, 4, 4);
  REQUIRE(stepfn2d_from_json(to_json(F)) == F);

  nlohmann::json rect{{"schema", kStepFn2DRectSchema},
                      {"rectangles",
                       {{{"s0", 0.0},
                         {"s1", 0.5},
                         {"t0", 0.0},
                         {"t1", 0.5},
                         {"value", 1.0}}}}};
  StepFn2D G = stepfn2d_from_json(rect);
  std::vector<Rect> rects{{0.0, 0.5, 0.0, 0.5, 1.0}};
  REQUIRE(G == StepFn2D::from_rectangles(rects));
}

TEST_CASE("reports and certificates serialize") {
  ExperimentReport rep = run_suite("rad-head", 11, 5, {{"n", 4}});
  nlohmann::json j = to_json(rep);
  ExperimentReport back = report_from_json(j);
  REQUIRE(to_json(back).dump() == j.dump());

  std::string csv = report_to_csv(rep);
  REQUIRE(csv.rfind("trial,digest,lhs,rhs,ratio\n", 0) == 0);
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 6);

  std::vector<StepFn1D> fns{rademacher(1), rademacher(2)};
  SignSelection sel = select_signs(fns, 2);
  nlohmann::json cj = to_json(sel);
  REQUIRE(cj.at("schema") == kCertificateSchema);
  REQUIRE(cj.at("signs").size() == 2);
  REQUIRE(cj.at("gamma_emp").get<double>() >=
          selection_gamma_floor() - 1e-12);
}
