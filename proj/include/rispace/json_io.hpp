#pragma once

// JSON and CSV serialization for the public data types. Schema tags are
// versioned strings; parsers validate the tag when present and check shapes
// strictly. Integer fields (seeds, digests) are stored as native JSON
// integers, which nlohmann round-trips exactly at 64 bits.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rispace/harness.hpp"
#include "rispace/mixed2d.hpp"
#include "rispace/signselect.hpp"

namespace rispace {

inline constexpr const char* kStepFnSchema = "rispace/stepfn-v1";
inline constexpr const char* kStepFn2DSchema = "rispace/stepfn2d-v1";
inline constexpr const char* kStepFn2DRectSchema = "rispace/stepfn2d-rect-v1";
inline constexpr const char* kCertificateSchema = "rispace/certificate-v1";
inline constexpr const char* kReportSchema = "rispace/report-v1";

namespace detail {

inline void check_schema(const nlohmann::json& j, const char* expected) {
  if (j.contains("schema")) {
    if (!j.at("schema").is_string() ||
        j.at("schema").get<std::string>() != expected)
      throw std::invalid_argument(std::string("expected schema ") + expected);
  }
}

inline std::vector<double> number_array(const nlohmann::json& j,
                                        const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw std::invalid_argument(std::string("missing array field '") + key +
                                "'");
  std::vector<double> out;
  out.reserve(j.at(key).size());
  for (const auto& x : j.at(key)) {
    if (!x.is_number())
      throw std::invalid_argument(std::string("non-numeric entry in '") + key +
                                  "'");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Step functions.

inline nlohmann::json to_json(const StepFn1D& f) {
  return {{"schema", kStepFnSchema},
          {"breakpoints", f.breakpoints()},
          {"values", f.values()}};
}

inline StepFn1D stepfn_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("step function: not an object");
  detail::check_schema(j, kStepFnSchema);
  return StepFn1D(detail::number_array(j, "breakpoints"),
                  detail::number_array(j, "values"));
}

inline nlohmann::json to_json(const StepFn2D& F) {
  nlohmann::json slices = nlohmann::json::array();
  for (const auto& s : F.slices()) slices.push_back(to_json(s));
  return {{"schema", kStepFn2DSchema},
          {"t_breakpoints", F.t_breakpoints()},
          {"slices", std::move(slices)}};
}

inline StepFn2D stepfn2d_from_json(const nlohmann::json& j) {
  if (!j.is_object())
    throw std::invalid_argument("plane step function: not an object");
  if (j.contains("rectangles") ||
      (j.contains("schema") && j.at("schema").is_string() &&
       j.at("schema").get<std::string>() == kStepFn2DRectSchema)) {
    detail::check_schema(j, kStepFn2DRectSchema);
    if (!j.contains("rectangles") || !j.at("rectangles").is_array())
      throw std::invalid_argument("missing array field 'rectangles'");
    std::vector<Rect> rects;
    rects.reserve(j.at("rectangles").size());
    for (const auto& r : j.at("rectangles")) {
      if (!r.is_object()) throw std::invalid_argument("rectangle: not an object");
      Rect rect;
      rect.s0 = r.at("s0").get<double>();
      rect.s1 = r.at("s1").get<double>();
      rect.t0 = r.at("t0").get<double>();
      rect.t1 = r.at("t1").get<double>();
      rect.value = r.at("value").get<double>();
      rects.push_back(rect);
    }
    return StepFn2D::from_rectangles(rects);
  }
  detail::check_schema(j, kStepFn2DSchema);
  std::vector<double> tb = detail::number_array(j, "t_breakpoints");
  if (!j.contains("slices") || !j.at("slices").is_array())
    throw std::invalid_argument("missing array field 'slices'");
  std::vector<StepFn1D> slices;
  slices.reserve(j.at("slices").size());
  for (const auto& s : j.at("slices")) slices.push_back(stepfn_from_json(s));
  return StepFn2D(std::move(tb), std::move(slices));
}

// --------------------------------------------------------------------------
// Sign-selection certificates.

inline nlohmann::json to_json(const SignSelection& sel) {
  const SelectionCertificate& c = sel.cert;
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : c.groups) groups.push_back(g);
  nlohmann::json j{
      {"schema", kCertificateSchema},
      {"signs", sel.signs},
      {"i", c.i},
      {"tau", c.tau},
      {"d", c.d},
      {"branch", c.branch == PigeonholeBranch::a ? "a" : "b"},
      {"regime",
       c.regime == CoeffRegime::head_dominant ? "head" : "tail"},
      {"order", c.order},
      {"groups", std::move(groups)},
      {"delta", c.delta},
      {"eta", c.eta},
      {"lhs", c.lhs},
      {"rhs_formula", c.rhs_formula},
      {"gamma_emp", c.gamma_emp},
      {"gamma_floor", selection_gamma_floor()},
  };
  if (std::isfinite(c.rad_side)) {
    j["rad_side"] = c.rad_side;
    j["gamma_vs_rad"] = c.gamma_vs_rad;
  } else {
    j["rad_side"] = nullptr;
    j["gamma_vs_rad"] = nullptr;
  }
  return j;
}

// --------------------------------------------------------------------------
// Experiment reports.

inline nlohmann::json to_json(const ExperimentReport& rep) {
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : rep.trials)
    trials.push_back({{"digest", t.digest},
                      {"lhs", t.lhs},
                      {"rhs", t.rhs},
                      {"ratio", t.ratio}});
  return {{"schema", kReportSchema},
          {"id", rep.id},
          {"seed", rep.seed},
          {"params", rep.params},
          {"trials", std::move(trials)},
          {"aggregate",
           {{"count", rep.aggregate.count},
            {"min", rep.aggregate.min},
            {"max", rep.aggregate.max},
            {"mean", rep.aggregate.mean}}}};
}

inline ExperimentReport report_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("report: not an object");
  detail::check_schema(j, kReportSchema);
  ExperimentReport rep;
  rep.id = j.at("id").get<std::string>();
  rep.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("params"))
    rep.params = j.at("params").get<std::map<std::string, double>>();
  for (const auto& t : j.at("trials")) {
    TrialRecord rec;
    rec.digest = t.at("digest").get<std::uint64_t>();
    rec.lhs = t.at("lhs").get<double>();
    rec.rhs = t.at("rhs").get<double>();
    rec.ratio = t.at("ratio").get<double>();
    rep.trials.push_back(rec);
  }
  const auto& agg = j.at("aggregate");
  rep.aggregate.count = agg.at("count").get<std::size_t>();
  rep.aggregate.min = agg.at("min").get<double>();
  rep.aggregate.max = agg.at("max").get<double>();
  rep.aggregate.mean = agg.at("mean").get<double>();
  return rep;
}

inline std::string report_to_csv(const ExperimentReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "trial,digest,lhs,rhs,ratio\n";
  for (std::size_t k = 0; k < rep.trials.size(); ++k) {
    const TrialRecord& t = rep.trials[k];
    out << k << ',' << t.digest << ',' << t.lhs << ',' << t.rhs << ','
        << t.ratio << '\n';
  }
  return out.str();
}

// --------------------------------------------------------------------------
// File helpers.

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for write: " + path);
  out << text;
}

}  // namespace rispace
