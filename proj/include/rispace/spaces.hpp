#pragma once

// Weight functions and space descriptors. A SpaceSpec is a small tagged
// record naming one of the supported norms; the engines live in norms.hpp.

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "rispace/numeric.hpp"

namespace rispace {

// Catalog of weights on (0,1]. All are nonnegative, nondecreasing and
// vanish at 0+; the 0 value is returned analytically, never via division
// at t = 0.
//   log_power           t |-> ln^(1-p)(e/t)        (p > 1)
//   log_power_conjugate u |-> ln^(1/p-1)(e/u)      (p > 1)
//   power               t |-> t^beta               (beta > 0)
//   identity            t |-> t
struct WeightFn {
  enum class Kind { log_power, log_power_conjugate, power, identity };

  Kind kind = Kind::identity;
  double param = 1.0;

  static WeightFn log_power(double p) {
    require(p > 1.0 && std::isfinite(p), "log_power weight: need p > 1");
    return {Kind::log_power, p};
  }
  static WeightFn log_power_conjugate(double p) {
    require(p > 1.0 && std::isfinite(p),
            "log_power_conjugate weight: need p > 1");
    return {Kind::log_power_conjugate, p};
  }
  static WeightFn power(double beta) {
    require(beta > 0.0 && std::isfinite(beta), "power weight: need beta > 0");
    return {Kind::power, beta};
  }
  static WeightFn identity() { return {Kind::identity, 1.0}; }

  // The log-power exponent: both log kinds are (1 - log t)^gamma.
  double log_exponent() const {
    return kind == Kind::log_power ? 1.0 - param : 1.0 / param - 1.0;
  }

  double operator()(double t) const {
    require(t >= 0.0 && t <= 1.0, "weight: argument must lie in [0,1]");
    if (t == 0.0) return 0.0;
    switch (kind) {
      case Kind::log_power:
      case Kind::log_power_conjugate:
        return std::pow(1.0 - std::log(t), log_exponent());
      case Kind::power:
        return std::pow(t, param);
      case Kind::identity:
        return t;
    }
    return 0.0;
  }

  // Evaluation from log t, for callers whose measures underflow as doubles.
  double eval_log(double log_t) const {
    require(log_t <= 0.0, "weight: log argument must be <= 0");
    switch (kind) {
      case Kind::log_power:
      case Kind::log_power_conjugate:
        return std::pow(1.0 - log_t, log_exponent());
      case Kind::power:
        return std::exp(param * log_t);
      case Kind::identity:
        return std::exp(log_t);
    }
    return 0.0;
  }

  // Nondecreasing with w(t)/t nonincreasing on (0,1]. For the log kinds
  // this needs the log-power exponent > -1 (u^g * e^u is then monotone for
  // u >= 1); for power it needs beta <= 1.
  bool quasiconcave() const {
    switch (kind) {
      case Kind::log_power:
      case Kind::log_power_conjugate:
        return log_exponent() > -1.0;
      case Kind::power:
        return param <= 1.0;
      case Kind::identity:
        return true;
    }
    return false;
  }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
      case Kind::log_power:
        os << "W:" << param;
        break;
      case Kind::log_power_conjugate:
        os << "phi_p:" << param;
        break;
      case Kind::power:
        os << "pow:" << param;
        break;
      case Kind::identity:
        os << "id";
        break;
    }
    return os.str();
  }

  bool operator==(const WeightFn& o) const = default;
};

enum class SpaceTag { lp, lorentz, marcinkiewicz, orlicz_exp, seq_weak };
enum class WeakForm { sup_form, average_form };

// One record per supported norm. `p` doubles as the Lebesgue/Lorentz
// exponent, the Orlicz growth alpha or the weak-sequence exponent q.
struct SpaceSpec {
  SpaceTag tag = SpaceTag::lp;
  double p = 1.0;
  WeightFn weight{};
  WeakForm form = WeakForm::sup_form;

  static SpaceSpec Lp(double p) {
    require(p >= 1.0, "Lp: need p >= 1");
    return {SpaceTag::lp, p, {}, WeakForm::sup_form};
  }
  static SpaceSpec lorentz(double p, WeightFn w) {
    require(p >= 1.0 && std::isfinite(p), "lorentz: need finite p >= 1");
    return {SpaceTag::lorentz, p, w, WeakForm::sup_form};
  }
  // The log-weight Lorentz scale: exponent p with weight ln^(1-p)(e/t).
  static SpaceSpec lorentz_log(double p) {
    require(p > 1.0 && p < 2.0, "Xp: need p in (1,2)");
    return lorentz(p, WeightFn::log_power(p));
  }
  static SpaceSpec marcinkiewicz(WeightFn w) {
    return {SpaceTag::marcinkiewicz, 0.0, w, WeakForm::sup_form};
  }
  static SpaceSpec exp_orlicz(double alpha) {
    require(alpha > 0.0 && std::isfinite(alpha), "ExpL: need alpha > 0");
    return {SpaceTag::orlicz_exp, alpha, {}, WeakForm::sup_form};
  }
  static SpaceSpec weak_seq(double q, WeakForm f) {
    require(q >= 1.0 && std::isfinite(q), "weak seq: need finite q >= 1");
    return {SpaceTag::seq_weak, q, {}, f};
  }

  bool is_function_space() const { return tag != SpaceTag::seq_weak; }

  std::string to_string() const {
    std::ostringstream os;
    os.precision(17);
    switch (tag) {
      case SpaceTag::lp:
        if (std::isinf(p))
          os << "Lp:inf";
        else
          os << "Lp:" << p;
        break;
      case SpaceTag::lorentz:
        if (weight.kind == WeightFn::Kind::log_power && weight.param == p)
          os << "Xp:" << p;
        else
          os << "Lorentz:" << p << ":" << weight.to_string();
        break;
      case SpaceTag::marcinkiewicz:
        os << "M:" << weight.to_string();
        break;
      case SpaceTag::orlicz_exp:
        os << "ExpL:" << p;
        break;
      case SpaceTag::seq_weak:
        os << "lqw:" << p << ":"
           << (form == WeakForm::sup_form ? "sup" : "avg");
        break;
    }
    return os.str();
  }

  // Compact string forms, also accepted by the command line tool:
  //   Lp:<p>|Lp:inf   Xp:<p>   ExpL:<alpha>   M:<weight>
  //   Lorentz:<p>:<weight>     lqw:<q>:<sup|avg>     lq:<q>
  // where <weight> is W:<p>, phi_p:<p>, pow:<beta> or id. "lq:<q>" names the
  // plain little-lq sequence norm and maps to the lp tag (sequence context).
  static SpaceSpec parse(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
      if (ch == ':') {
        parts.push_back(cur);
        cur.clear();
      } else
        cur.push_back(ch);
    }
    parts.push_back(cur);

    auto num = [](const std::string& s) {
      if (s == "inf") return std::numeric_limits<double>::infinity();
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      require(pos == s.size(), "space spec: malformed number");
      return v;
    };
    auto parse_weight = [&](std::size_t from) {
      require(parts.size() > from, "space spec: missing weight");
      const std::string& w = parts[from];
      if (w == "id") {
        require(parts.size() == from + 1, "space spec: trailing junk");
        return WeightFn::identity();
      }
      require(parts.size() == from + 2, "space spec: weight needs parameter");
      double v = num(parts[from + 1]);
      if (w == "W") return WeightFn::log_power(v);
      if (w == "phi_p") return WeightFn::log_power_conjugate(v);
      if (w == "pow") return WeightFn::power(v);
      throw std::invalid_argument("space spec: unknown weight '" + w + "'");
    };

    const std::string& head = parts[0];
    if (head == "Lp" || head == "lq") {
      require(parts.size() == 2, "space spec: Lp:<p>");
      return Lp(num(parts[1]));
    }
    if (head == "Xp") {
      require(parts.size() == 2, "space spec: Xp:<p>");
      return lorentz_log(num(parts[1]));
    }
    if (head == "ExpL") {
      require(parts.size() == 2, "space spec: ExpL:<alpha>");
      return exp_orlicz(num(parts[1]));
    }
    if (head == "M") return marcinkiewicz(parse_weight(1));
    if (head == "Lorentz") {
      require(parts.size() >= 3, "space spec: Lorentz:<p>:<weight>");
      return lorentz(num(parts[1]), parse_weight(2));
    }
    if (head == "lqw") {
      require(parts.size() == 3, "space spec: lqw:<q>:<sup|avg>");
      if (parts[2] == "sup") return weak_seq(num(parts[1]), WeakForm::sup_form);
      if (parts[2] == "avg")
        return weak_seq(num(parts[1]), WeakForm::average_form);
      throw std::invalid_argument("space spec: weak form must be sup or avg");
    }
    throw std::invalid_argument("space spec: unknown space '" + head + "'");
  }
};

}  // namespace rispace
