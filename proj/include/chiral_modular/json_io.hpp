#pragma once

// JSON encodings of specs, reports and correlator requests. Requires
// nlohmann/json (json.hpp) on the include path.

#include <complex>
#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "chiral_modular/kms.hpp"
#include "chiral_modular/states.hpp"

namespace chiral_modular::json_io {

using Json = nlohmann::ordered_json;

inline void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + ": expected a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.contains(key)) throw InvalidArgument(where + ": unknown key '" + key + "'");
  }
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidArgument(where + ": expected a number or [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

template <class T>
T get_as(const Json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InvalidArgument(where + ": wrong value type");
  }
}

// ---------------------------------------------------------------------------
// Fields

inline CurrentAlgebraSpec algebra_from_json(const Json& j, double level) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "su2") return CurrentAlgebraSpec::su2(level);
    if (name == "abelian") return CurrentAlgebraSpec::abelian(1, level);
    throw InvalidArgument("unknown algebra preset '" + name + "'");
  }
  reject_unknown_keys(j, {"abelian", "dim", "f"}, "algebra");
  if (j.contains("abelian")) {
    if (j.size() != 1) throw InvalidArgument("algebra: 'abelian' excludes other keys");
    return CurrentAlgebraSpec::abelian(get_as<int>(j["abelian"], "algebra.abelian"), level);
  }
  if (!j.contains("dim") || !j.contains("f")) throw InvalidArgument("algebra: needs 'dim' and 'f'");
  return CurrentAlgebraSpec(get_as<int>(j["dim"], "algebra.dim"),
                            get_as<std::vector<double>>(j["f"], "algebra.f"), level);
}

inline Json algebra_to_json(const CurrentAlgebraSpec& a) {
  if (a.is_abelian()) return Json{{"abelian", a.dim()}};
  return Json{{"dim", a.dim()}, {"f", a.structure_constants()}};
}

inline Fields fields_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type")) throw InvalidArgument("fields: needs a 'type'");
  const auto type = get_as<std::string>(j["type"], "fields.type");
  if (type == "currents") {
    reject_unknown_keys(j, {"type", "algebra", "level", "colors"}, "fields");
    const double level = j.contains("level") ? get_as<double>(j["level"], "fields.level") : 1.0;
    Currents c{j.contains("algebra") ? algebra_from_json(j["algebra"], level)
                                     : CurrentAlgebraSpec::abelian(1, level),
               {}};
    if (!j.contains("colors")) throw InvalidArgument("fields: currents need 'colors'");
    c.colors = get_as<std::vector<int>>(j["colors"], "fields.colors");
    return c;
  }
  if (type == "primary") {
    reject_unknown_keys(j, {"type", "delta", "delta_bar", "normalization"}, "fields");
    PrimaryFieldSpec s;
    if (!j.contains("delta")) throw InvalidArgument("fields: primary needs 'delta'");
    s.delta = get_as<double>(j["delta"], "fields.delta");
    s.delta_bar = j.contains("delta_bar") ? get_as<double>(j["delta_bar"], "fields.delta_bar") : s.delta;
    if (j.contains("normalization")) s.normalization = get_as<double>(j["normalization"], "fields.normalization");
    return PrimaryPair{s.validated()};
  }
  throw InvalidArgument("fields: unknown type '" + type + "'");
}

inline Json fields_to_json(const Fields& f) {
  if (const auto* c = std::get_if<Currents>(&f)) {
    return Json{{"type", "currents"},
                {"algebra", algebra_to_json(c->algebra)},
                {"level", c->algebra.level()},
                {"colors", c->colors}};
  }
  const auto& s = std::get<PrimaryPair>(f).spec;
  return Json{{"type", "primary"},
              {"delta", s.delta},
              {"delta_bar", s.delta_bar},
              {"normalization", s.normalization}};
}

// ---------------------------------------------------------------------------
// Intervals and states

inline CircleInterval interval_from_json(const Json& j, const std::string& where) {
  reject_unknown_keys(j, {"start", "length"}, where);
  if (!j.contains("start") || !j.contains("length")) {
    throw InvalidArgument(where + ": needs 'start' and 'length'");
  }
  return CircleInterval(CirclePoint(get_as<double>(j["start"], where + ".start")),
                        get_as<double>(j["length"], where + ".length"));
}

inline Json interval_to_json(const CircleInterval& i) {
  return Json{{"start", i.start().theta()}, {"length", i.length()}};
}

inline StateSpec state_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "vacuum") return Vacuum{};
    throw InvalidArgument("state: unknown state '" + j.get<std::string>() + "'");
  }
  reject_unknown_keys(j, {"omega_n", "omega_nn", "product_omega2"}, "state");
  if (j.size() != 1) throw InvalidArgument("state: exactly one variant expected");
  StateSpec s;
  if (j.contains("omega_n")) {
    s = OmegaN{get_as<int>(j["omega_n"], "state.omega_n")};
  } else if (j.contains("omega_nn")) {
    s = OmegaNN{get_as<int>(j["omega_nn"], "state.omega_nn")};
  } else {
    const Json& p = j["product_omega2"];
    reject_unknown_keys(p, {"base", "I1", "I2"}, "state.product_omega2");
    if (p.contains("base")) {
      if (p.size() != 1) throw InvalidArgument("state.product_omega2: give 'base' or 'I1'/'I2'");
      s = ProductOmega2::from_base(interval_from_json(p["base"], "product_omega2.base"));
    } else {
      if (!p.contains("I1") || !p.contains("I2")) {
        throw InvalidArgument("state.product_omega2: needs 'base' or both 'I1' and 'I2'");
      }
      s = ProductOmega2::from_intervals(interval_from_json(p["I1"], "product_omega2.I1"),
                                        interval_from_json(p["I2"], "product_omega2.I2"));
    }
  }
  validate(s);
  return s;
}

// ---------------------------------------------------------------------------
// KMS spec and report

inline KmsConfiguration configuration_from_json(const Json& j) {
  reject_unknown_keys(j, {"theta", "theta_bar", "g"}, "configuration");
  KmsConfiguration c;
  if (!j.contains("theta")) throw InvalidArgument("configuration: needs 'theta'");
  c.theta = get_as<std::vector<double>>(j["theta"], "configuration.theta");
  if (j.contains("theta_bar")) c.theta_bar = get_as<std::vector<double>>(j["theta_bar"], "configuration.theta_bar");
  if (j.contains("g")) {
    reject_unknown_keys(j["g"], {"alpha", "beta"}, "configuration.g");
    c.g = MoebiusElement(complex_from_json(j["g"].value("alpha", Json(1.0)), "g.alpha"),
                         complex_from_json(j["g"].value("beta", Json(0.0)), "g.beta"));
  }
  return c;
}

inline Json configuration_to_json(const KmsConfiguration& c) {
  Json j{{"theta", c.theta}};
  if (!c.theta_bar.empty()) j["theta_bar"] = c.theta_bar;
  j["g"] = Json{{"alpha", complex_to_json(c.g.alpha())}, {"beta", complex_to_json(c.g.beta())}};
  return j;
}

/// Applies the keys present in `j` on top of `spec`.
inline void merge_spec(KmsCheckSpec& spec, const Json& j) {
  reject_unknown_keys(j,
                      {"identity", "n", "fields", "t_grid", "configurations", "num_configurations",
                       "tolerance", "continuation_steps", "min_separation", "seed", "base_interval",
                       "jobs"},
                      "spec");
  if (j.contains("identity")) spec.identity = parse_identity(get_as<std::string>(j["identity"], "identity"));
  if (j.contains("n")) spec.n = get_as<int>(j["n"], "n");
  if (j.contains("fields")) spec.fields = fields_from_json(j["fields"]);
  if (j.contains("t_grid")) spec.t_grid = get_as<std::vector<double>>(j["t_grid"], "t_grid");
  if (j.contains("configurations")) {
    spec.configurations.clear();
    for (const auto& c : j["configurations"]) spec.configurations.push_back(configuration_from_json(c));
  }
  if (j.contains("num_configurations")) spec.num_configurations = get_as<int>(j["num_configurations"], "num_configurations");
  if (j.contains("tolerance")) spec.tolerance = get_as<double>(j["tolerance"], "tolerance");
  if (j.contains("continuation_steps")) spec.continuation_steps = get_as<int>(j["continuation_steps"], "continuation_steps");
  if (j.contains("min_separation")) spec.min_separation = get_as<double>(j["min_separation"], "min_separation");
  if (j.contains("seed")) spec.seed = get_as<std::uint64_t>(j["seed"], "seed");
  if (j.contains("base_interval")) spec.base_interval = interval_from_json(j["base_interval"], "base_interval");
  if (j.contains("jobs")) spec.jobs = get_as<int>(j["jobs"], "jobs");
}

inline KmsCheckSpec spec_from_json(const Json& j) {
  KmsCheckSpec spec;
  merge_spec(spec, j);
  spec.validate();
  return spec;
}

inline Json spec_to_json(const KmsCheckSpec& s) {
  Json j{{"identity", identity_name(s.identity)},
         {"n", s.n},
         {"fields", fields_to_json(s.fields)},
         {"t_grid", s.t_grid}};
  Json configs = Json::array();
  for (const auto& c : s.configurations) configs.push_back(configuration_to_json(c));
  j["configurations"] = configs;
  j["num_configurations"] = s.num_configurations;
  j["tolerance"] = s.tolerance;
  j["continuation_steps"] = s.continuation_steps;
  j["min_separation"] = s.min_separation;
  j["seed"] = s.seed;
  j["base_interval"] = interval_to_json(s.base_interval);
  j["jobs"] = s.jobs;
  return j;
}

inline Json report_to_json(const KmsReport& r) {
  Json cases = Json::array();
  for (const auto& c : r.cases) {
    Json jc{{"t", c.t},
            {"config_id", c.config_id},
            {"lhs", complex_to_json(c.lhs)},
            {"rhs", complex_to_json(c.rhs)},
            {"residual", c.residual},
            {"pass", c.pass}};
    if (!c.chain.empty()) {
      Json chain = Json::array();
      for (const auto& l : c.chain) chain.push_back(Json{{"link", l.link}, {"residual", l.residual}});
      jc["chain"] = chain;
    }
    cases.push_back(std::move(jc));
  }
  return Json{{"identity", identity_name(r.identity)},
              {"seed", r.seed},
              {"tolerance", r.tolerance},
              {"cases", cases},
              {"max_residual", r.max_residual},
              {"verdict", r.verdict ? "pass" : "fail"}};
}

inline Json correlator_result_to_json(const CorrelatorResult& r) {
  Json pts = Json::array();
  for (const Complex& z : r.points) pts.push_back(complex_to_json(z));
  return Json{{"value", complex_to_json(r.value)},
              {"points", pts},
              {"state", r.state},
              {"fields", r.fields}};
}

}  // namespace chiral_modular::json_io
