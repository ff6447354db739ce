// rispace: command line access to the norm calculus, the rearrangement and
// Rademacher machinery, the certified sign-selection pipeline, the
// divergence kernel, and the reproducible experiment suites.
//
// Exit codes: 0 success, 1 failed certification or sign search, 2 usage or
// input errors.

#include <iomanip>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rispace/harness.hpp"
#include "rispace/json_io.hpp"

namespace {

using nlohmann::json;
using namespace rispace;

// Arguments that carry JSON accept either a file path or inline JSON text
// (detected by a leading '{' or '[').
json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
    return json::parse(arg);
  return read_json_file(arg);
}

std::vector<StepFn1D> load_family(const std::string& arg) {
  json j = load_json_arg(arg);
  if (j.is_object() && j.contains("functions")) j = j.at("functions");
  std::vector<StepFn1D> fns;
  if (j.is_array())
    for (const auto& x : j) fns.push_back(stepfn_from_json(x));
  else
    fns.push_back(stepfn_from_json(j));
  require(!fns.empty(), "empty function family");
  return fns;
}

std::vector<double> load_coeffs(const std::string& arg) {
  json j = load_json_arg(arg);
  if (j.is_object() && j.contains("coefficients")) j = j.at("coefficients");
  require(j.is_array(), "coefficients must be a JSON array of numbers");
  std::vector<double> a;
  a.reserve(j.size());
  for (const auto& x : j) {
    require(x.is_number(), "coefficients must be numbers");
    a.push_back(x.get<double>());
  }
  require(!a.empty(), "empty coefficient list");
  return a;
}

std::map<std::string, double> parse_params(
    const std::vector<std::string>& kvs) {
  std::map<std::string, double> params;
  for (const auto& kv : kvs) {
    const auto eq = kv.find('=');
    require(eq != std::string::npos && eq > 0, "expected --param key=value");
    std::size_t pos = 0;
    const std::string val = kv.substr(eq + 1);
    double v = std::stod(val, &pos);
    require(pos == val.size(), "malformed numeric value in --param");
    params[kv.substr(0, eq)] = v;
  }
  return params;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"norm calculus, sign selection and counterexample toolkit "
               "for step functions on [0,1)"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::string out_format = "json";
  int precision = 17;
  app.add_option("--seed", seed, "seed for every randomized routine")
      ->capture_default_str();
  app.add_option("--trials", trials, "trial count for suites")
      ->capture_default_str();
  app.add_option("--out", out_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--precision", precision,
                 "significant digits in CSV output")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();

  // norm ------------------------------------------------------------------
  auto* cmd_norm = app.add_subcommand(
      "norm", "evaluate a space norm for each function in a family");
  std::string norm_funcs, norm_space;
  cmd_norm->add_option("--funcs", norm_funcs,
                       "family: JSON file or inline JSON")
      ->required();
  cmd_norm->add_option("--space", norm_space,
                       "space spec, e.g. Lp:2, Xp:1.5, ExpL:2, M:phi_p:1.5")
      ->required();

  // rearrange ---------------------------------------------------------------
  auto* cmd_rearrange = app.add_subcommand(
      "rearrange", "decreasing rearrangement of each function in a family");
  std::string rearrange_funcs;
  cmd_rearrange->add_option("--funcs", rearrange_funcs,
                            "family: JSON file or inline JSON")
      ->required();

  // rad-equiv ---------------------------------------------------------------
  auto* cmd_radeq = app.add_subcommand(
      "rad-equiv",
      "both sides of the dyadic head-integral comparison for a Rademacher sum");
  std::string radeq_coeffs;
  int radeq_i = 1;
  cmd_radeq->add_option("--coeffs", radeq_coeffs,
                        "coefficients: JSON file or inline JSON array")
      ->required();
  cmd_radeq->add_option("--i", radeq_i, "dyadic level, head length 2^-i")
      ->required()
      ->check(CLI::Range(1, 60));

  // select-signs ------------------------------------------------------------
  auto* cmd_select = app.add_subcommand(
      "select-signs",
      "certified sign selection maximizing the head integral at level 2^-i");
  std::string select_funcs;
  int select_i = 1;
  cmd_select->add_option("--funcs", select_funcs,
                         "family: JSON file or inline JSON")
      ->required();
  cmd_select->add_option("--i", select_i, "dyadic level, head length 2^-i")
      ->required()
      ->check(CLI::Range(1, 60));

  // counterexample ------------------------------------------------------
  auto* cmd_counter = app.add_subcommand(
      "counterexample",
      "divergence kernel: bounded sections, divergent transposed sections");
  double counter_p = 1.5;
  int counter_n = 8;
  std::string counter_mode = "analytic";
  cmd_counter->add_option("--p", counter_p, "exponent in (1,2)")->required();
  cmd_counter->add_option("--n", counter_n, "construction depth")
      ->required()
      ->check(CLI::Range(1, 24));
  cmd_counter->add_option("--mode", counter_mode, "evaluation mode")
      ->check(CLI::IsMember({"analytic", "materialized"}))
      ->capture_default_str();

  // mixed-norm ------------------------------------------------------------
  auto* cmd_mixed = app.add_subcommand(
      "mixed-norm", "iterated norm of a plane step function");
  std::string mixed_file;
  std::vector<std::string> mixed_spaces;
  cmd_mixed->add_option("--func2d", mixed_file,
                        "plane function: JSON file or inline JSON")
      ->required();
  cmd_mixed->add_option("--space", mixed_spaces,
                        "two space specs: outer then inner")
      ->required()
      ->expected(2);

  // summing ---------------------------------------------------------------
  auto* cmd_summing = app.add_subcommand(
      "summing",
      "sequence norm of per-function target norms against the max over signs");
  std::string summing_funcs, summing_seq, summing_target, summing_domain;
  int summing_threshold = 20;
  cmd_summing->add_option("--funcs", summing_funcs,
                          "family: JSON file or inline JSON")
      ->required();
  cmd_summing->add_option("--seq", summing_seq,
                          "sequence space spec, e.g. lq:1.7 or lqw:3:avg")
      ->required();
  cmd_summing->add_option("--target", summing_target,
                          "function space for the per-function norms")
      ->required();
  cmd_summing->add_option("--domain", summing_domain,
                          "function space for the signed sums")
      ->required();
  cmd_summing->add_option("--threshold", summing_threshold,
                          "largest family size searched exhaustively")
      ->check(CLI::Range(0, 24))
      ->capture_default_str();

  // suite -----------------------------------------------------------------
  auto* cmd_suite = app.add_subcommand(
      "suite", "run a named reproducible experiment suite");
  std::string suite_id;
  std::vector<std::string> suite_params;
  cmd_suite->add_option("--id", suite_id,
                        "suite name: rad-head, select, rad-domination, "
                        "weak-summing, weak-concavity, embedding, "
                        "coincidence, transpose-random, kernel-divergence, "
                        "disjoint-family, rad-summing")
      ->required();
  cmd_suite->add_option("--param", suite_params,
                        "suite parameter override, key=value (repeatable)");

  // Global flags are accepted before or after the subcommand name.
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::cout.precision(precision);

  try {
    if (*cmd_norm) {
      const SpaceSpec space = SpaceSpec::parse(norm_space);
      require(space.is_function_space(),
              "norm: need a function space; sequence specs apply to summing");
      auto fns = load_family(norm_funcs);
      std::vector<double> norms(fns.size());
      for (std::size_t k = 0; k < fns.size(); ++k)
        norms[k] = space_norm(fns[k], space);
      if (out_format == "csv") {
        std::cout << "index,norm\n";
        for (std::size_t k = 0; k < fns.size(); ++k)
          std::cout << k << ',' << norms[k] << '\n';
      } else {
        emit({{"space", space.to_string()}, {"norms", norms}});
      }
    } else if (*cmd_rearrange) {
      auto fns = load_family(rearrange_funcs);
      json out = json::array();
      for (const auto& f : fns) out.push_back(to_json(rearrange(f)));
      emit(out);
    } else if (*cmd_radeq) {
      const std::vector<double> a = load_coeffs(radeq_coeffs);
      const RadHeadSides sides = rad_head_sides(a, radeq_i);
      const double ratio = sides.lhs / sides.rhs;
      if (out_format == "csv") {
        std::cout << "i,tau,lhs,rhs,ratio\n"
                  << radeq_i << ',' << std::ldexp(1.0, -radeq_i) << ','
                  << sides.lhs << ',' << sides.rhs << ',' << ratio << '\n';
      } else {
        emit({{"i", radeq_i},
              {"tau", std::ldexp(1.0, -radeq_i)},
              {"lhs", sides.lhs},
              {"rhs", sides.rhs},
              {"ratio", ratio}});
      }
    } else if (*cmd_select) {
      auto fns = load_family(select_funcs);
      SelectOptions opts;
      opts.seed = seed;
      emit(to_json(select_signs(fns, select_i, opts)));
    } else if (*cmd_counter) {
      const DivergenceKernel kern(counter_n, counter_p);
      const ColumnNormBound cb = column_norm_bound(kern);
      json out{{"p", counter_p},
               {"n", counter_n},
               {"mode", counter_mode},
               {"col_norm", std::pow(cb.exact_p, 1.0 / counter_p)},
               {"col_norm_p", cb.exact_p},
               {"bound", cb.bound},
               {"sup_norm_check", kern.sup_section_norm()}};
      const double rects = kern.rectangle_count();
      if (std::isfinite(rects)) out["rectangle_count"] = rects;
      if (counter_mode == "materialized") {
        const StepFn2D K = kern.materialize();
        const SpaceSpec outer =
            SpaceSpec::Lp(std::numeric_limits<double>::infinity());
        const SpaceSpec inner = SpaceSpec::lorentz_log(counter_p);
        out["materialized_sup_norm"] = mixed_norm(K, outer, inner);
        out["materialized_col_norm"] = mixed_norm(K.transpose(), outer, inner);
      }
      emit(out);
    } else if (*cmd_mixed) {
      const StepFn2D F = stepfn2d_from_json(load_json_arg(mixed_file));
      const SpaceSpec outer = SpaceSpec::parse(mixed_spaces[0]);
      const SpaceSpec inner = SpaceSpec::parse(mixed_spaces[1]);
      emit({{"outer", outer.to_string()},
            {"inner", inner.to_string()},
            {"value", mixed_norm(F, outer, inner)}});
    } else if (*cmd_summing) {
      auto fns = load_family(summing_funcs);
      MaxSignOptions opts;
      opts.seed = seed;
      opts.exhaustive_threshold = summing_threshold;
      const SummingRatio r =
          summing_ratio(fns, SpaceSpec::parse(summing_seq),
                        SpaceSpec::parse(summing_target),
                        SpaceSpec::parse(summing_domain), opts);
      emit({{"seq_side", r.seq_side},
            {"sign_side", r.sign_side},
            {"ratio", r.ratio},
            {"exhaustive", r.max.exhaustive},
            {"signs", r.max.signs}});
    } else if (*cmd_suite) {
      const ExperimentReport rep =
          run_suite(suite_id, seed, trials, parse_params(suite_params));
      if (out_format == "csv")
        std::cout << report_to_csv(rep);
      else
        emit(to_json(rep));
    }
  } catch (const CertificationError& e) {
    std::cerr << "certification failed: " << e.what() << '\n';
    return 1;
  } catch (const SearchFailure& e) {
    std::cerr << "sign search failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
