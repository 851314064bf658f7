#pragma once

// Command-line front end. run_cli() takes argv and two streams so that tests
// can drive it in-process; main.cpp forwards to it.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chiral_modular/chiral_modular.hpp"
#include "chiral_modular/json_io.hpp"

namespace chiral_modular::cli {

using Json = json_io::Json;

enum ExitCode : int { kPass = 0, kCheckFailure = 1, kUsage = 2 };

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string output;
  std::string format = "json";
  std::optional<int> jobs;
};

/// Seed precedence: flag, then config file, then CHIRAL_MODULAR_SEED, then 42.
inline std::uint64_t resolve_seed(const GlobalOptions& g, std::optional<std::uint64_t> from_file) {
  if (g.seed) return *g.seed;
  if (from_file) return *from_file;
  if (const char* env = std::getenv("CHIRAL_MODULAR_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used != std::string(env).size()) throw InvalidArgument("");
      return v;
    } catch (const std::exception&) {
      throw InvalidArgument("CHIRAL_MODULAR_SEED is not an unsigned integer: '" + std::string(env) + "'");
    }
  }
  return 42;
}

inline Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  try {
    Json j = Json::parse(in);
    if (!j.is_object()) throw InvalidArgument("config file must hold a JSON object");
    return j;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

/// Removes and returns a key of the config document.
inline std::optional<Json> take(Json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  Json v = j[key];
  j.erase(key);
  return v;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw InvalidArgument(what + ": empty entry");
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw InvalidArgument("");
    } catch (const std::exception&) {
      throw InvalidArgument(what + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw InvalidArgument(what + " must not be empty");
  return out;
}

inline void emit(const std::string& text, const GlobalOptions& g, std::ostream& out) {
  if (g.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(g.output, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write output file '" + g.output + "'");
  f << text;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline std::string fmt(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// verify

struct VerifyOptions {
  std::string identity;
  std::optional<int> n;
  std::optional<std::string> t_grid;
  bool chiral_only = false;
  std::optional<double> delta;
  std::optional<double> delta_bar;
  std::optional<std::string> algebra;
  std::optional<double> level;
  std::optional<std::string> colors;
  std::optional<int> configs;
  std::optional<int> continuation_steps;
  std::optional<double> min_separation;
};

struct SuiteEntry {
  std::string name;
  KmsCheckSpec spec;
  bool expect_pass = true;
};

inline std::vector<SuiteEntry> default_suite() {
  std::vector<SuiteEntry> suite;
  for (double d : {0.5, 1.0, 1.5}) {
    KmsCheckSpec s = KmsCheckSpec::defaults_for(Identity::VacuumKms);
    s.fields = PrimaryPair{PrimaryFieldSpec::scalar(d)};
    std::ostringstream name;
    name << "vacuum-kms scalar delta=" << d;
    suite.push_back({name.str(), s, true});
  }
  {
    KmsCheckSpec s = KmsCheckSpec::defaults_for(Identity::VacuumKms);
    s.fields = PrimaryPair{PrimaryFieldSpec::chiral(0.5)};
    suite.push_back({"vacuum-kms chiral-only delta=0.5 (negative control)", s, false});
  }
  {
    KmsCheckSpec s = KmsCheckSpec::defaults_for(Identity::VacuumKms);
    s.fields = Currents{CurrentAlgebraSpec::su2(), {0, 1, 2}};
    suite.push_back({"vacuum-kms su2 currents m=3", s, true});
  }
  {
    KmsCheckSpec s = KmsCheckSpec::defaults_for(Identity::OmegaNKms);
    suite.push_back({"omega-n-kms n=2 abelian m=2", s, true});
    s.n = 3;
    s.fields = Currents{CurrentAlgebraSpec::abelian(), {0, 0, 0, 0}};
    suite.push_back({"omega-n-kms n=3 abelian m=4", s, true});
  }
  for (int n : {2, 3, 4}) {
    KmsCheckSpec s = KmsCheckSpec::defaults_for(Identity::OmegaNInvariance);
    s.n = n;
    suite.push_back({"omega-n-invariance n=" + std::to_string(n) + " abelian m=4", s, true});
  }
  {
    KmsCheckSpec s = KmsCheckSpec::defaults_for(Identity::OmegaNInvariance);
    s.n = 3;
    s.num_configurations = 20;
    s.fields = Currents{CurrentAlgebraSpec::su2(), {0, 1, 2}};
    suite.push_back({"omega-n-invariance n=3 su2 m=3", s, true});
  }
  suite.push_back({"product-invariance abelian 2+2",
                   KmsCheckSpec::defaults_for(Identity::ProductInvariance), true});
  return suite;
}

inline Fields fields_from_flags(const VerifyOptions& v, const Fields& current) {
  if (v.algebra || v.colors) {
    const double level = v.level.value_or(1.0);
    CurrentAlgebraSpec alg = CurrentAlgebraSpec::abelian(1, level);
    if (v.algebra) {
      if (*v.algebra == "su2") alg = CurrentAlgebraSpec::su2(level);
      else if (*v.algebra != "abelian") throw InvalidArgument("--algebra must be abelian or su2");
    } else if (const auto* c = std::get_if<Currents>(&current)) {
      alg = c->algebra;
    }
    std::vector<int> colors = {0, 0};
    if (const auto* c = std::get_if<Currents>(&current)) colors = c->colors;
    if (v.colors) {
      colors.clear();
      for (double x : parse_list(*v.colors, "--colors")) colors.push_back(static_cast<int>(x));
    }
    return Currents{alg, colors};
  }
  if (v.delta || v.delta_bar || v.chiral_only) {
    PrimaryFieldSpec s = std::holds_alternative<PrimaryPair>(current)
                             ? std::get<PrimaryPair>(current).spec
                             : PrimaryFieldSpec::scalar(0.5);
    if (v.delta) {
      s.delta = *v.delta;
      if (!v.delta_bar) s.delta_bar = *v.delta;
    }
    if (v.delta_bar) s.delta_bar = *v.delta_bar;
    if (v.chiral_only) s.delta_bar = 0.0;
    return PrimaryPair{s.validated()};
  }
  if (v.level) {
    if (const auto* c = std::get_if<Currents>(&current)) {
      Currents out = *c;
      out.algebra = CurrentAlgebraSpec(c->algebra.dim(), c->algebra.structure_constants(), *v.level);
      return out;
    }
  }
  return current;
}

inline std::string cases_csv(const KmsReport& r) {
  std::string s = "# identity " + identity_name(r.identity) + ", seed " + std::to_string(r.seed) +
                  ", verdict " + (r.verdict ? "pass" : "fail") + "\n";
  s += "t,config_id,lhs_re,lhs_im,rhs_re,rhs_im,residual,pass\n";
  for (const auto& c : r.cases) {
    s += fmt(c.t) + "," + std::to_string(c.config_id) + "," + fmt(c.lhs.real()) + "," +
         fmt(c.lhs.imag()) + "," + fmt(c.rhs.real()) + "," + fmt(c.rhs.imag()) + "," +
         fmt(c.residual) + "," + (c.pass ? "1" : "0") + "\n";
  }
  return s;
}

inline int cmd_verify(const GlobalOptions& g, const VerifyOptions& v, std::ostream& out) {
  Json cfg = load_config(g.config_path);
  std::optional<std::string> identity_text;
  if (!v.identity.empty()) identity_text = v.identity;
  else if (cfg.contains("identity")) identity_text = cfg["identity"].get<std::string>();
  std::optional<std::uint64_t> file_seed;
  if (cfg.contains("seed")) file_seed = json_io::get_as<std::uint64_t>(cfg["seed"], "seed");
  const std::uint64_t seed = resolve_seed(g, file_seed);

  const auto apply = [&](KmsCheckSpec& s) {
    json_io::merge_spec(s, cfg);
    if (identity_text) s.identity = parse_identity(*identity_text);
    s.seed = seed;
    if (g.tolerance) s.tolerance = *g.tolerance;
    if (g.jobs) s.jobs = *g.jobs;
    if (v.n) s.n = *v.n;
    if (v.t_grid) s.t_grid = parse_list(*v.t_grid, "--t-grid");
    if (v.configs) {
      s.num_configurations = *v.configs;
      s.configurations.clear();
    }
    if (v.continuation_steps) s.continuation_steps = *v.continuation_steps;
    if (v.min_separation) s.min_separation = *v.min_separation;
    s.fields = fields_from_flags(v, s.fields);
    s.validate();
  };

  if (identity_text) {
    KmsCheckSpec spec = KmsCheckSpec::defaults_for(parse_identity(*identity_text));
    apply(spec);
    const KmsReport report = run_check(spec);
    emit(g.format == "csv" ? cases_csv(report) : dump(json_io::report_to_json(report)), g, out);
    return report.verdict ? kPass : kCheckFailure;
  }

  // Full suite; per-check flags other than the global ones do not apply.
  if (cfg.size() > (cfg.contains("seed") ? 1U : 0U)) {
    throw InvalidArgument("the full suite takes only 'seed' from a config file; pass --identity");
  }
  Json checks = Json::array();
  std::string csv;
  bool ok = true;
  for (auto& entry : default_suite()) {
    entry.spec.seed = seed;
    if (g.tolerance) entry.spec.tolerance = *g.tolerance;
    if (g.jobs) entry.spec.jobs = *g.jobs;
    const KmsReport report = run_check(entry.spec);
    const bool matched = report.verdict == entry.expect_pass;
    ok = ok && matched;
    checks.push_back(Json{{"name", entry.name},
                          {"expect", entry.expect_pass ? "pass" : "fail"},
                          {"outcome", matched ? "as expected" : "unexpected"},
                          {"report", json_io::report_to_json(report)}});
    csv += "# check " + entry.name + "\n" + cases_csv(report);
  }
  const double tol = g.tolerance.value_or(1e-8);
  const Json doc{{"seed", seed}, {"tolerance", tol}, {"checks", checks}, {"verdict", ok ? "pass" : "fail"}};
  emit(g.format == "csv" ? csv : dump(doc), g, out);
  return ok ? kPass : kCheckFailure;
}

// ---------------------------------------------------------------------------
// flow

struct FlowOptions {
  std::optional<int> n;
  std::optional<std::string> theta;
  std::optional<double> t_min;
  std::optional<double> t_max;
  std::optional<int> steps;
  bool fixpoints = false;
};

inline int cmd_flow(const GlobalOptions& g, const FlowOptions& f, std::ostream& out) {
  Json cfg = load_config(g.config_path);
  json_io::reject_unknown_keys(cfg, {"n", "theta", "t_min", "t_max", "steps", "fixpoints"}, "flow config");
  int n = cfg.contains("n") ? json_io::get_as<int>(cfg["n"], "n") : 1;
  std::vector<double> thetas = cfg.contains("theta")
                                   ? json_io::get_as<std::vector<double>>(cfg["theta"], "theta")
                                   : std::vector<double>{pi / 4.0};
  double t_min = cfg.contains("t_min") ? json_io::get_as<double>(cfg["t_min"], "t_min") : -2.0;
  double t_max = cfg.contains("t_max") ? json_io::get_as<double>(cfg["t_max"], "t_max") : 2.0;
  int steps = cfg.contains("steps") ? json_io::get_as<int>(cfg["steps"], "steps") : 81;
  bool fix = cfg.contains("fixpoints") && json_io::get_as<bool>(cfg["fixpoints"], "fixpoints");
  if (f.n) n = *f.n;
  if (f.theta) thetas = parse_list(*f.theta, "--theta");
  if (f.t_min) t_min = *f.t_min;
  if (f.t_max) t_max = *f.t_max;
  if (f.steps) steps = *f.steps;
  fix = fix || f.fixpoints;
  if (n < 1) throw InvalidArgument("--n must be at least 1");
  if (steps < 1) throw InvalidArgument("--steps must be at least 1");
  if (!(t_min <= t_max)) throw InvalidArgument("--t-min must not exceed --t-max");
  if (steps == 1 && t_min != t_max) throw InvalidArgument("one step needs --t-min equal to --t-max");

  struct Row {
    double t, in, out;
  };
  std::vector<Row> rows;
  for (double th : thetas) {
    const CirclePoint p(th);
    for (int k = 0; k < steps; ++k) {
      const double t = steps == 1 ? t_min : t_min + (t_max - t_min) * k / (steps - 1);
      rows.push_back({t, p.theta(), dilation_n(n, t, p).theta()});
    }
  }
  const auto fixed = fix ? fixpoints_of_dilation_n(n) : std::vector<CirclePoint>{};

  if (g.format == "csv") {
    std::string s = "t,theta_in,theta_out\n";
    for (const auto& r : rows) s += fmt(r.t) + "," + fmt(r.in) + "," + fmt(r.out) + "\n";
    for (std::size_t k = 0; k < fixed.size(); ++k) {
      s += "# fixpoint," + std::to_string(k) + "," + fmt(fixed[k].theta()) + "\n";
    }
    emit(s, g, out);
  } else {
    Json trace = Json::array();
    for (const auto& r : rows) trace.push_back(Json{{"t", r.t}, {"theta_in", r.in}, {"theta_out", r.out}});
    Json doc{{"n", n}, {"trace", trace}};
    if (fix) {
      Json fp = Json::array();
      for (const auto& p : fixed) fp.push_back(p.theta());
      doc["fixpoints"] = fp;
    }
    emit(dump(doc), g, out);
  }
  return kPass;
}

// ---------------------------------------------------------------------------
// correlator

inline int cmd_correlator(const GlobalOptions& g, const std::string& request_path,
                          const std::string& request_inline, std::ostream& out) {
  Json req;
  if (!request_inline.empty()) {
    try {
      req = Json::parse(request_inline);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidArgument(std::string("request is not valid JSON: ") + e.what());
    }
  } else {
    req = load_config(request_path.empty() ? g.config_path : request_path);
  }
  json_io::reject_unknown_keys(req, {"state", "fields", "points", "points_bar", "min_separation"},
                               "request");
  if (!req.contains("fields") || !req.contains("points")) {
    throw InvalidArgument("request needs 'fields' and 'points'");
  }
  const StateSpec state = req.contains("state") ? json_io::state_from_json(req["state"]) : StateSpec{Vacuum{}};
  const Fields fields = json_io::fields_from_json(req["fields"]);
  const double eps = req.contains("min_separation")
                         ? json_io::get_as<double>(req["min_separation"], "min_separation")
                         : default_min_separation;
  if (!(eps > 0.0)) throw InvalidArgument("min_separation must be positive");

  // Points: a bare number is an angle on the circle, a pair is [re, im].
  const auto read_points = [](const Json& arr, const std::string& where) {
    if (!arr.is_array()) throw InvalidArgument(where + " must be an array");
    std::vector<Complex> pts;
    for (const auto& p : arr) {
      pts.push_back(p.is_number() ? CirclePoint(p.get<double>()).z()
                                  : json_io::complex_from_json(p, where));
    }
    return pts;
  };
  const std::vector<Complex> z = read_points(req["points"], "points");
  if (z.size() != field_count(fields)) {
    throw InvalidArgument("request has " + std::to_string(z.size()) + " points, fields need " +
                          std::to_string(field_count(fields)));
  }

  CorrelatorResult result;
  result.points = z;
  result.state = describe(state);
  result.fields = describe(fields);
  const auto* primary = std::get_if<PrimaryPair>(&fields);
  const bool nonchiral = primary && (std::holds_alternative<Vacuum>(state) ||
                                     std::holds_alternative<OmegaNN>(state));
  if (nonchiral) {
    std::vector<Complex> zb;
    if (req.contains("points_bar")) {
      zb = read_points(req["points_bar"], "points_bar");
      if (zb.size() != 2) throw InvalidArgument("points_bar needs two entries");
    } else {
      for (const Complex& p : z) zb.push_back(std::conj(p));
    }
    const int n = std::holds_alternative<OmegaNN>(state) ? std::get<OmegaNN>(state).n : 1;
    result.value = evaluate_nonchiral(OmegaNN{n}, primary->spec, z, zb, eps);
  } else {
    if (req.contains("points_bar")) throw InvalidArgument("points_bar applies to primary fields only");
    result.value = evaluate_chiral(state, fields, std::span<const Complex>(z), eps);
  }
  emit(dump(json_io::correlator_result_to_json(result)), g, out);
  return kPass;
}

// ---------------------------------------------------------------------------
// algebra

inline int cmd_algebra(const GlobalOptions& g, std::optional<int> n_min_flag,
                       std::optional<int> n_max_flag, const std::string& mutate_flag,
                       std::ostream& out) {
  Json cfg = load_config(g.config_path);
  json_io::reject_unknown_keys(cfg, {"n_min", "n_max", "mutate"}, "algebra config");
  int n_min = cfg.contains("n_min") ? json_io::get_as<int>(cfg["n_min"], "n_min") : 1;
  int n_max = cfg.contains("n_max") ? json_io::get_as<int>(cfg["n_max"], "n_max") : 10;
  std::string mutate = cfg.contains("mutate") ? json_io::get_as<std::string>(cfg["mutate"], "mutate") : "";
  if (n_min_flag) n_min = *n_min_flag;
  if (n_max_flag) n_max = *n_max_flag;
  if (!mutate_flag.empty()) mutate = mutate_flag;
  if (n_min < 1 || n_max < n_min) throw InvalidArgument("need 1 <= n-min <= n-max");
  if (!mutate.empty() && mutate != "drop-central") throw InvalidArgument("--mutate accepts only drop-central");

  Json results = Json::array();
  bool ok = true;
  for (int n = n_min; n <= n_max; ++n) {
    virasoro::TildeGenerators gens = virasoro::tilde_generators(n);
    if (mutate == "drop-central") gens.zero = virasoro::Element::mode(0, virasoro::Rational(1, n));
    const virasoro::Sl2Check check = virasoro::check_sl2(gens);
    Json r{{"n", n}, {"sl2", check.ok}, {"tilde_L0", gens.zero.str()}};
    if (!check.ok) {
      r["relation"] = check.relation;
      r["witness"] = check.witness.str();
    }
    ok = ok && check.ok;
    results.push_back(std::move(r));
  }
  if (g.format == "csv") {
    std::string s = "n,sl2,witness\n";
    for (const auto& r : results) {
      s += std::to_string(r["n"].get<int>()) + "," + (r["sl2"].get<bool>() ? "1" : "0") + "," +
           (r.contains("witness") ? "\"" + r["witness"].get<std::string>() + "\"" : "") + "\n";
    }
    emit(s, g, out);
  } else {
    emit(dump(Json{{"results", results}, {"verdict", ok ? "pass" : "fail"}}), g, out);
  }
  return ok ? kPass : kCheckFailure;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Modular flows, modified states and KMS checks for chiral conformal correlators",
               "chiral-modular"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON config file (flags override it)");
  app.add_option("--seed", g.seed, "Random seed (fallback: CHIRAL_MODULAR_SEED, then 42)");
  app.add_option("--tolerance", g.tolerance, "Residual tolerance (default 1e-8)");
  app.add_option("--output", g.output, "Write the result to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--jobs", g.jobs, "Worker threads for verification cases");

  VerifyOptions v;
  auto* verify = app.add_subcommand("verify", "Run KMS / invariance checks (full suite by default)");
  verify->add_option("--identity", v.identity,
                     "vacuum-kms | general-field-kms | omega-n-kms | omega-n-invariance | product-invariance");
  verify->add_option("--n", v.n, "Covering order");
  verify->add_option("--t-grid", v.t_grid, "Comma-separated flow times");
  verify->add_flag("--chiral-only", v.chiral_only, "Drop the anti-chiral factor of the primary");
  verify->add_option("--delta", v.delta, "Chiral weight of the primary");
  verify->add_option("--delta-bar", v.delta_bar, "Anti-chiral weight of the primary");
  verify->add_option("--algebra", v.algebra, "Current algebra: abelian | su2");
  verify->add_option("--level", v.level, "Current algebra level");
  verify->add_option("--colors", v.colors, "Comma-separated color indices of the currents");
  verify->add_option("--configs", v.configs, "Number of random configurations");
  verify->add_option("--continuation-steps", v.continuation_steps, "Steps along t + i s");
  verify->add_option("--min-separation", v.min_separation, "Minimum separation of insertions");

  FlowOptions f;
  auto* flow = app.add_subcommand("flow", "Trace Dil_n(t) orbits as CSV rows t,theta_in,theta_out");
  flow->add_option("--n", f.n, "Covering order");
  flow->add_option("--theta", f.theta, "Comma-separated seed angles");
  flow->add_option("--t-min", f.t_min, "First flow time");
  flow->add_option("--t-max", f.t_max, "Last flow time");
  flow->add_option("--steps", f.steps, "Number of flow times");
  flow->add_flag("--fixpoints", f.fixpoints, "Append the 2n fixpoints as comment rows");

  std::string request_path;
  std::string request_inline;
  auto* corr = app.add_subcommand("correlator", "Evaluate a correlator from a JSON request");
  corr->add_option("--request", request_path, "Request document path");
  corr->add_option("--request-json", request_inline, "Request document given inline");

  std::optional<int> n_min;
  std::optional<int> n_max;
  std::string mutate;
  auto* alg = app.add_subcommand("algebra", "Check the rescaled sl(2) relations exactly");
  alg->add_option("--n-min", n_min, "Smallest n");
  alg->add_option("--n-max", n_max, "Largest n");
  alg->add_option("--mutate", mutate, "Negative control: drop-central");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kPass;
    }
    err << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (*verify) return cmd_verify(g, v, out);
    if (*flow) return cmd_flow(g, f, out);
    if (*corr) return cmd_correlator(g, request_path, request_inline, out);
    if (*alg) return cmd_algebra(g, n_min, n_max, mutate, out);
  } catch (const InvalidArgument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const SingularConfiguration& e) {
    err << "singular configuration (points " << e.first << ", " << e.second << "): " << e.what() << "\n";
    return kCheckFailure;
  } catch (const OppositePoints& e) {
    err << "opposite points (points " << e.first << ", " << e.second << "): " << e.what() << "\n";
    return kCheckFailure;
  } catch (const LocalizationError& e) {
    err << "localization error (point " << e.point << "): " << e.what() << "\n";
    return kCheckFailure;
  } catch (const PathSingularity& e) {
    err << "path singularity at s = " << e.strip_parameter << ": " << e.what() << "\n";
    return kCheckFailure;
  } catch (const SingularPoint& e) {
    err << "singular point: " << e.what() << "\n";
    return kCheckFailure;
  }
  return kUsage;
}

}  // namespace chiral_modular::cli
