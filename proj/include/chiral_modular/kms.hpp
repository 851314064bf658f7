#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "chiral_modular/circle.hpp"
#include "chiral_modular/continuation.hpp"
#include "chiral_modular/correlators.hpp"
#include "chiral_modular/errors.hpp"
#include "chiral_modular/moebius.hpp"
#include "chiral_modular/states.hpp"

namespace chiral_modular {

enum class Identity {
  VacuumKms,
  GeneralFieldKms,
  OmegaNKms,
  OmegaNInvariance,
  ProductInvariance,
};

inline std::string identity_name(Identity id) {
  switch (id) {
    case Identity::VacuumKms: return "vacuum-kms";
    case Identity::GeneralFieldKms: return "general-field-kms";
    case Identity::OmegaNKms: return "omega-n-kms";
    case Identity::OmegaNInvariance: return "omega-n-invariance";
    case Identity::ProductInvariance: return "product-invariance";
  }
  return "unknown";
}

inline Identity parse_identity(const std::string& s) {
  for (Identity id : {Identity::VacuumKms, Identity::GeneralFieldKms, Identity::OmegaNKms,
                      Identity::OmegaNInvariance, Identity::ProductInvariance}) {
    if (identity_name(id) == s) return id;
  }
  throw InvalidArgument("unknown identity '" + s + "'");
}

inline std::vector<double> default_t_grid() { return {-2.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.0}; }

/// One point configuration: chiral angles, anti-chiral angles (empty means
/// the circle conjugates 2pi - theta) and a group element for invariance checks.
struct KmsConfiguration {
  std::vector<double> theta;
  std::vector<double> theta_bar;
  MoebiusElement g;
};

struct KmsCheckSpec {
  Identity identity = Identity::VacuumKms;
  int n = 1;
  Fields fields = PrimaryPair{PrimaryFieldSpec::scalar(0.5)};
  std::vector<double> t_grid = default_t_grid();
  /// Used as given when nonempty; otherwise `num_configurations` are drawn.
  std::vector<KmsConfiguration> configurations;
  int num_configurations = 20;
  double tolerance = 1e-8;
  int continuation_steps = 200;
  double min_separation = default_min_separation;
  std::uint64_t seed = 42;
  CircleInterval base_interval = CircleInterval::upper_semicircle();
  int jobs = 1;

  void validate() const;

  /// Defaults for an identity. Invariance checks draw the group element at
  /// random, so their flow-time grid is {0}.
  static KmsCheckSpec defaults_for(Identity id) {
    KmsCheckSpec s;
    s.identity = id;
    switch (id) {
      case Identity::VacuumKms:
      case Identity::GeneralFieldKms:
        break;
      case Identity::OmegaNKms:
        s.n = 2;
        s.fields = Currents{CurrentAlgebraSpec::abelian(), {0, 0}};
        break;
      case Identity::OmegaNInvariance:
        s.n = 2;
        s.t_grid = {0.0};
        s.num_configurations = 100;
        s.fields = Currents{CurrentAlgebraSpec::abelian(), {0, 0, 0, 0}};
        break;
      case Identity::ProductInvariance:
        s.fields = Currents{CurrentAlgebraSpec::abelian(), {0, 0, 0, 0}};
        break;
    }
    return s;
  }
};

struct ChainLink {
  std::string link;
  double residual = 0.0;
};

struct KmsCase {
  double t = 0.0;
  std::size_t config_id = 0;
  Complex lhs;
  Complex rhs;
  double residual = 0.0;
  bool pass = false;
  std::vector<ChainLink> chain;
};

struct KmsReport {
  Identity identity = Identity::VacuumKms;
  std::uint64_t seed = 0;
  double tolerance = 0.0;
  std::vector<KmsCase> cases;
  std::vector<KmsConfiguration> configurations;
  double max_residual = 0.0;
  bool verdict = true;
};

/// |lhs - rhs| / max(|lhs|, |rhs|, 1e-300).
inline double relative_residual(Complex lhs, Complex rhs) {
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

namespace detail {

inline bool integer_weights(const Fields& f) {
  if (std::holds_alternative<Currents>(f)) return true;
  const auto& s = std::get<PrimaryPair>(f).spec;
  return is_integer(s.delta);
}

inline Complex weighted(Complex derivative, double delta) { return jacobian_factor(derivative, delta); }

inline std::vector<Complex> circle_points(const std::vector<double>& theta) {
  std::vector<Complex> out;
  out.reserve(theta.size());
  for (double th : theta) out.push_back(CirclePoint(th).z());
  return out;
}

inline std::vector<double> conjugate_angles(const KmsConfiguration& c) {
  if (!c.theta_bar.empty()) return c.theta_bar;
  std::vector<double> out;
  for (double th : c.theta) out.push_back(reduce_angle(two_pi - th));
  return out;
}

/// Fields with the last insertion moved to the front.
inline Fields rotate_last_to_front(const Fields& f) {
  if (const auto* c = std::get_if<Currents>(&f)) {
    Currents r = *c;
    std::rotate(r.colors.rbegin(), r.colors.rbegin() + 1, r.colors.rend());
    return r;
  }
  return f;
}

inline ContinuationOptions continuation_options(const KmsCheckSpec& spec) {
  ContinuationOptions opt;
  opt.steps = spec.continuation_steps;
  return opt;
}

inline KmsCase finish_case(const KmsCheckSpec& spec, double t, std::size_t id, Complex lhs,
                           Complex rhs, std::vector<ChainLink> chain = {}) {
  KmsCase c;
  c.t = t;
  c.config_id = id;
  c.lhs = lhs;
  c.rhs = rhs;
  c.residual = relative_residual(lhs, rhs);
  c.chain = std::move(chain);
  c.pass = std::isfinite(c.residual) && c.residual <= spec.tolerance;
  for (const auto& l : c.chain) c.pass = c.pass && l.residual <= spec.tolerance;
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Vacuum KMS for a primary pair: chiral and anti-chiral sectors flowed by
// Dil(t) and Dil(-t). The right-hand side continues every factor along
// tau = t + i s and is read in the swapped order, which for a local pair is
// the same function; non-local weights therefore show their monodromy.

inline KmsCase vacuum_kms_primary_case(const KmsCheckSpec& spec, const KmsConfiguration& config,
                                       std::size_t id, double t) {
  const PrimaryFieldSpec& f = std::get<PrimaryPair>(spec.fields).spec;
  const std::vector<Complex> z = detail::circle_points(config.theta);
  const std::vector<Complex> zb = detail::circle_points(detail::conjugate_angles(config));
  const bool antichiral = f.delta_bar != 0.0;

  const MoebiusElement fwd = dilation(t);
  const MoebiusElement bwd = dilation(-t);
  const Complex w = act(fwd, GeneralPoint(z[1])).value();
  const Complex wb = act(bwd, GeneralPoint(zb[1])).value();
  Complex lhs = detail::weighted(derivative(fwd, z[1]), f.delta);
  if (antichiral) lhs *= detail::weighted(derivative(bwd, zb[1]), f.delta_bar);
  lhs *= primary_two_point(z[0], zb[0], w, wb, f, spec.min_separation);

  const double threshold = spec.min_separation / 10.0;
  const auto path = [&](double s) {
    const ComplexDilation d(Complex(t, s));
    const Complex den = d.b() * z[1] + d.a();
    const Complex ws = (d.a() * z[1] + d.b()) / den;
    PathSample p;
    p.bases = {1.0 / (den * den), z[0] - ws};
    p.clearance = std::min(std::abs(den), std::abs(z[0] - ws));
    if (antichiral) {
      const ComplexDilation db(Complex(-t, -s));
      const Complex denb = db.b() * zb[1] + db.a();
      const Complex wbs = (db.a() * zb[1] + db.b()) / denb;
      p.bases.push_back(1.0 / (denb * denb));
      p.bases.push_back(zb[0] - wbs);
      p.clearance = std::min({p.clearance, std::abs(denb), std::abs(zb[0] - wbs)});
    }
    return p;
  };
  const TrackedLogs logs = track_logs(path, detail::continuation_options(spec), threshold);
  std::vector<double> exponents = {f.delta, -2.0 * f.delta};
  if (antichiral) {
    exponents.push_back(f.delta_bar);
    exponents.push_back(-2.0 * f.delta_bar);
  }
  const Complex rhs = f.normalization * continued_product(logs, exponents);
  return detail::finish_case(spec, t, id, lhs, rhs);
}

/// Vacuum KMS for currents: the last current is flowed. The right-hand side
/// is evaluated at Dil(t + i) with the flowed current moved to the front; the
/// path t + i s is monitored for collisions with the other insertions.
inline KmsCase vacuum_kms_current_case(const KmsCheckSpec& spec, const KmsConfiguration& config,
                                       std::size_t id, double t) {
  const std::vector<Complex> z = detail::circle_points(config.theta);
  const std::size_t l = z.size() - 1;

  const MoebiusElement fwd = dilation(t);
  std::vector<Complex> pts = z;
  pts[l] = act(fwd, GeneralPoint(z[l])).value();
  const Complex lhs = derivative(fwd, z[l]) * vacuum_chiral(spec.fields, pts, spec.min_separation);

  const auto path = [&](double s) {
    const ComplexDilation d(Complex(t, s));
    const Complex den = d.b() * z[l] + d.a();
    const Complex ws = (d.a() * z[l] + d.b()) / den;
    PathSample p;
    p.bases = {den};
    p.clearance = std::abs(den);
    for (std::size_t k = 0; k < l; ++k) p.clearance = std::min(p.clearance, std::abs(z[k] - ws));
    return p;
  };
  track_logs(path, detail::continuation_options(spec), spec.min_separation / 10.0);

  const ComplexDilation end(Complex(t, 1.0));
  std::vector<Complex> swapped;
  swapped.push_back(complex_dilation_act(end, z[l]).value());
  for (std::size_t k = 0; k < l; ++k) swapped.push_back(z[k]);
  const Complex rhs = derivative(end, z[l]) *
                      vacuum_chiral(detail::rotate_last_to_front(spec.fields), swapped,
                                    spec.min_separation);
  return detail::finish_case(spec, t, id, lhs, rhs);
}

inline KmsCase vacuum_kms_case(const KmsCheckSpec& spec, const KmsConfiguration& config,
                               std::size_t id, double t) {
  if (std::holds_alternative<Currents>(spec.fields)) {
    return vacuum_kms_current_case(spec, config, id, t);
  }
  return vacuum_kms_primary_case(spec, config, id, t);
}

// ---------------------------------------------------------------------------
// KMS of omega_n under Dil_n, evaluated line by line:
//   A  (d Dil_n(t))^D omega_n(... phi(Dil_n(t) z_l))
//   B  omega_n unfolded through the pullback
//   C  prefactors regrouped, vacuum correlator at Dil(t) z_l^n
//   D  vacuum KMS step: Dil(t + i), flowed insertion first
//   E  (d Dil_n(t + i))^D omega_n(phi(Dil_n(t + i) z_l) ...), with the n-th
//      root continued along t + i s
// The main residual compares A with E.

inline KmsCase omega_n_kms_case(const KmsCheckSpec& spec, const KmsConfiguration& config,
                                std::size_t id, double t) {
  const int n = spec.n;
  const Fields& fields = spec.fields;
  const std::size_t l = config.theta.size() - 1;
  std::vector<CirclePoint> p;
  for (double th : config.theta) p.emplace_back(th);
  std::vector<Complex> z;
  std::vector<Complex> zn;
  for (const CirclePoint& q : p) {
    z.push_back(q.z());
    zn.push_back(CirclePoint(n * q.theta()).z());
  }
  const double eps = spec.min_separation;

  // A
  const CirclePoint r = dilation_n(n, t, p[l]);
  const Complex dn = dilation_n_derivative(n, t, p[l]);
  std::vector<CirclePoint> pa = p;
  pa[l] = r;
  const Complex line_a = dn * evaluate_chiral(OmegaN{n}, fields, std::span<const CirclePoint>(pa), eps);

  // B and C share the vacuum correlator at Dil(t) z_l^n
  const MoebiusElement dil = dilation(t);
  std::vector<Complex> vac_pts = zn;
  vac_pts[l] = act(dil, CirclePoint(n * p[l].theta())).z();
  const Complex vac = vacuum_chiral(fields, vac_pts, eps);
  Complex pre_rest(1.0, 0.0);
  for (std::size_t i = 0; i < l; ++i) pre_rest *= static_cast<double>(n) * ipow(z[i], n - 1);
  const Complex line_b = pre_rest * (dn * (static_cast<double>(n) * ipow(r.z(), n - 1))) * vac;
  const Complex pre_all = pre_rest * (static_cast<double>(n) * ipow(z[l], n - 1));
  const Complex line_c = pre_all * derivative(dil, zn[l]) * vac;

  // D: continuation of Dil(t + i s) z_l^n, monitored against the other z_k^n;
  // the logarithm of w(s) is tracked for the n-th root used in E.
  const auto path = [&](double s) {
    const ComplexDilation d(Complex(t, s));
    const Complex den = d.b() * zn[l] + d.a();
    const Complex ws = (d.a() * zn[l] + d.b()) / den;
    PathSample ps;
    ps.bases = {ws, den};
    ps.clearance = std::abs(den);
    for (std::size_t k = 0; k < l; ++k) ps.clearance = std::min(ps.clearance, std::abs(zn[k] - ws));
    return ps;
  };
  const TrackedLogs logs = track_logs(path, detail::continuation_options(spec), eps / 10.0);
  const ComplexDilation end(Complex(t, 1.0));
  const Fields swapped_fields = detail::rotate_last_to_front(fields);
  std::vector<Complex> swapped;
  swapped.push_back(complex_dilation_act(end, zn[l]).value());
  for (std::size_t k = 0; k < l; ++k) swapped.push_back(zn[k]);
  const Complex line_d = pre_all * derivative(end, zn[l]) * vacuum_chiral(swapped_fields, swapped, eps);

  // E
  const Complex root_end = r.z() * std::exp((logs.log_end[0] - logs.log_start[0]) / static_cast<double>(n));
  const Complex dn_end = covering_chain_rule(n, z[l], root_end, derivative(end, zn[l]));
  std::vector<Complex> pe;
  pe.push_back(root_end);
  for (std::size_t k = 0; k < l; ++k) pe.push_back(z[k]);
  const Complex line_e = dn_end * evaluate_chiral(OmegaN{n}, swapped_fields, std::span<const Complex>(pe), eps);

  std::vector<ChainLink> chain = {
      {"A-B", relative_residual(line_a, line_b)},
      {"B-C", relative_residual(line_b, line_c)},
      {"C-D", relative_residual(line_c, line_d)},
      {"D-E", relative_residual(line_d, line_e)},
  };
  return detail::finish_case(spec, t, id, line_a, line_e, std::move(chain));
}

// ---------------------------------------------------------------------------
// Invariance of omega_n under g_n, with g = config.g * Dil(t), checked line
// by line through the pullback and the vacuum covariance.

inline KmsCase omega_n_invariance_case(const KmsCheckSpec& spec, const KmsConfiguration& config,
                                       std::size_t id, double t) {
  const int n = spec.n;
  const Fields& fields = spec.fields;
  const double eps = spec.min_separation;
  const MoebiusElement g = t == 0.0 ? config.g : compose(config.g, dilation(t));
  const CoveringMap cover(n, g);

  const std::size_t m = config.theta.size();
  std::vector<CirclePoint> p;
  std::vector<CirclePoint> q;
  Complex jac(1.0, 0.0);
  Complex pre_q(1.0, 0.0);
  Complex inv_base(1.0, 0.0);
  std::vector<Complex> qn;
  std::vector<Complex> gzn;
  std::vector<Complex> zn;
  for (std::size_t i = 0; i < m; ++i) {
    const CirclePoint pi_(config.theta[i]);
    const CirclePoint qi = covering_transform(cover, pi_);
    const double w = chiral_weight(fields, i);
    p.push_back(pi_);
    q.push_back(qi);
    jac *= detail::weighted(derivative(cover, pi_), w);
    pre_q *= detail::weighted(static_cast<double>(n) * ipow(qi.z(), n - 1), w);
    const CirclePoint pn(n * pi_.theta());
    zn.push_back(pn.z());
    qn.push_back(CirclePoint(n * qi.theta()).z());
    gzn.push_back(act(g, pn).z());
    inv_base /= detail::weighted(derivative(g, pn.z()), w);
  }

  const Complex line1 = jac * evaluate_chiral(OmegaN{n}, fields, std::span<const CirclePoint>(q), eps);
  const Complex line2 = jac * pre_q * vacuum_chiral(fields, qn, eps);
  const Complex line3 = jac * pre_q * vacuum_chiral(fields, gzn, eps);
  const Complex line4 = jac * pre_q * inv_base * vacuum_chiral(fields, zn, eps);
  const Complex line5 = evaluate_chiral(OmegaN{n}, fields, std::span<const CirclePoint>(p), eps);

  std::vector<ChainLink> chain = {
      {"1-2", relative_residual(line1, line2)},
      {"2-3", relative_residual(line2, line3)},
      {"3-4", relative_residual(line3, line4)},
      {"4-5", relative_residual(line4, line5)},
  };
  return detail::finish_case(spec, t, id, line1, line5, std::move(chain));
}

// ---------------------------------------------------------------------------
// Product state invariance under the base-adapted Dil_2(t):
//   1  omega_2^p of the flowed insertions (with Jacobians)
//   3  omega_2(flowed W) omega_2(flowed V)
//   4  omega_2(W) omega_2(V)
//   5  omega_2^p(W V)

namespace detail {

inline Fields subfields(const Fields& f, const std::vector<std::size_t>& idx) {
  if (const auto* c = std::get_if<Currents>(&f)) {
    Currents sub{c->algebra, {}};
    for (std::size_t i : idx) sub.colors.push_back(c->colors[i]);
    return sub;
  }
  return f;
}

inline Complex omega2_group(const Fields& f, const std::vector<std::size_t>& idx,
                            const std::vector<CirclePoint>& pts, double eps) {
  if (idx.empty()) return {1.0, 0.0};
  std::vector<CirclePoint> sel;
  for (std::size_t i : idx) sel.push_back(pts[i]);
  if (std::holds_alternative<PrimaryPair>(f) && idx.size() != 2) {
    return std::get<PrimaryPair>(f).spec.delta == 0.0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  }
  return evaluate_chiral(OmegaN{2}, subfields(f, idx), std::span<const CirclePoint>(sel), eps);
}

}  // namespace detail

inline KmsCase product_invariance_case(const KmsCheckSpec& spec, const KmsConfiguration& config,
                                       std::size_t id, double t) {
  const ProductOmega2 state = ProductOmega2::from_base(spec.base_interval);
  const Fields& fields = spec.fields;
  const double eps = spec.min_separation;
  const MoebiusElement base_flow = interval_dilation(spec.base_interval, t);

  std::vector<CirclePoint> p;
  std::vector<CirclePoint> q;
  std::vector<Complex> jac;
  std::vector<std::size_t> in1;
  std::vector<std::size_t> in2;
  for (std::size_t i = 0; i < config.theta.size(); ++i) {
    const CirclePoint pi_(config.theta[i]);
    const CirclePoint qi = interval_dilation_n(spec.base_interval, 2, t, pi_);
    const bool a = state.i1.contains(pi_);
    const bool b = state.i2.contains(pi_);
    if (!a && !b) {
      throw LocalizationError("insertion point " + std::to_string(i) +
                                  " lies in neither interval of the product state",
                              i);
    }
    if ((a && !state.i1.contains(qi)) || (b && !state.i2.contains(qi))) {
      throw LocalizationError("internal geometry failure: flowed insertion " + std::to_string(i) +
                                  " left its interval",
                              i);
    }
    (a ? in1 : in2).push_back(i);
    p.push_back(pi_);
    q.push_back(qi);
    const Complex d = t == 0.0 ? Complex(1.0, 0.0)
                               : covering_chain_rule(2, pi_.z(), qi.z(),
                                                     derivative(base_flow, CirclePoint(2.0 * pi_.theta()).z()));
    jac.push_back(detail::weighted(d, chiral_weight(fields, i)));
  }
  const auto jac_of = [&](const std::vector<std::size_t>& idx) {
    Complex acc(1.0, 0.0);
    for (std::size_t i : idx) acc *= jac[i];
    return acc;
  };

  const Complex line1 = jac_of(in1) * jac_of(in2) *
                        evaluate_product(state, fields, std::span<const CirclePoint>(q), eps);
  const Complex line3 = (jac_of(in1) * detail::omega2_group(fields, in1, q, eps)) *
                        (jac_of(in2) * detail::omega2_group(fields, in2, q, eps));
  const Complex line4 =
      detail::omega2_group(fields, in1, p, eps) * detail::omega2_group(fields, in2, p, eps);
  const Complex line5 = evaluate_product(state, fields, std::span<const CirclePoint>(p), eps);

  std::vector<ChainLink> chain = {
      {"1-3", relative_residual(line1, line3)},
      {"3-4", relative_residual(line3, line4)},
      {"4-5", relative_residual(line4, line5)},
  };
  return detail::finish_case(spec, t, id, line1, line5, std::move(chain));
}

/// |omega_2^p - omega_2| / max(|.|, |.|) on one configuration: the product
/// state drops the cross-interval correlations present in omega_2.
inline double product_joint_difference(const ProductOmega2& state, const Fields& fields,
                                       std::span<const CirclePoint> points,
                                       double min_separation = default_min_separation) {
  const Complex product = evaluate_product(state, fields, points, min_separation);
  const Complex joint = evaluate_chiral(OmegaN{2}, fields, points, min_separation);
  return relative_residual(product, joint);
}

// ---------------------------------------------------------------------------
// Validation, configuration sampling, and the runner

inline void KmsCheckSpec::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (t_grid.empty()) throw InvalidArgument("t-grid must not be empty");
  for (double t : t_grid) {
    if (!std::isfinite(t)) throw InvalidArgument("t-grid values must be finite");
  }
  if (continuation_steps < 1) throw InvalidArgument("continuation_steps must be at least 1");
  if (!(min_separation > 0.0)) throw InvalidArgument("min_separation must be positive");
  if (n < 1) throw InvalidArgument("n must be at least 1");
  if (jobs < 1) throw InvalidArgument("jobs must be at least 1");
  if (configurations.empty() && num_configurations < 1) {
    throw InvalidArgument("num_configurations must be at least 1");
  }
  if (const auto* c = std::get_if<Currents>(&fields)) {
    for (int a : c->colors) {
      if (a < 0 || a >= c->algebra.dim()) throw InvalidArgument("color index out of range");
    }
  } else {
    (void)std::get<PrimaryPair>(fields).spec.validated();
  }
  const std::size_t m = field_count(fields);
  if (m < 2) throw InvalidArgument("identities need at least two insertions");
  switch (identity) {
    case Identity::VacuumKms:
    case Identity::GeneralFieldKms:
      break;
    case Identity::OmegaNKms:
      if (!std::holds_alternative<Currents>(fields)) {
        throw InvalidArgument("omega-n-kms is implemented for current correlators");
      }
      break;
    case Identity::OmegaNInvariance:
    case Identity::ProductInvariance:
      if (!detail::integer_weights(fields)) {
        throw InvalidArgument(identity_name(identity) +
                              " needs integer weights (currents or integer-weight primaries)");
      }
      break;
  }
  if (identity == Identity::GeneralFieldKms && !std::holds_alternative<PrimaryPair>(fields)) {
    throw InvalidArgument("general-field-kms takes a primary field pair");
  }
  for (std::size_t c = 0; c < configurations.size(); ++c) {
    const auto& cfg = configurations[c];
    if (cfg.theta.size() != m) {
      throw InvalidArgument("configuration " + std::to_string(c) + " has " +
                            std::to_string(cfg.theta.size()) + " points, fields need " +
                            std::to_string(m));
    }
    if (!cfg.theta_bar.empty() && cfg.theta_bar.size() != m) {
      throw InvalidArgument("configuration " + std::to_string(c) + " has mismatched theta_bar");
    }
  }
}

/// Evaluates one (configuration, t) case of the spec's identity.
inline KmsCase evaluate_case(const KmsCheckSpec& spec, const KmsConfiguration& config,
                             std::size_t id, double t) {
  switch (spec.identity) {
    case Identity::VacuumKms:
    case Identity::GeneralFieldKms:
      return vacuum_kms_case(spec, config, id, t);
    case Identity::OmegaNKms:
      if (spec.n == 1) return vacuum_kms_case(spec, config, id, t);
      return omega_n_kms_case(spec, config, id, t);
    case Identity::OmegaNInvariance:
      return omega_n_invariance_case(spec, config, id, t);
    case Identity::ProductInvariance:
      return product_invariance_case(spec, config, id, t);
  }
  throw InvalidArgument("unknown identity");
}

namespace detail {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Angle in the open arc, kept 2% of its length away from either end.
inline double angle_in(std::mt19937_64& rng, const CircleInterval& arc) {
  return reduce_angle(arc.start().theta() + arc.length() * uniform(rng, 0.02, 0.98));
}

inline MoebiusElement random_group_element(std::mt19937_64& rng, double max_rapidity = 1.5) {
  const double r = uniform(rng, 0.0, max_rapidity);
  const double phi1 = uniform(rng, 0.0, two_pi);
  const double phi2 = uniform(rng, 0.0, two_pi);
  return MoebiusElement::normalized(std::polar(std::cosh(r), phi1), std::polar(std::sinh(r), phi2));
}

inline KmsConfiguration propose(const KmsCheckSpec& spec, std::mt19937_64& rng) {
  KmsConfiguration c;
  const std::size_t m = field_count(spec.fields);
  switch (spec.identity) {
    case Identity::VacuumKms:
    case Identity::GeneralFieldKms: {
      const auto upper = CircleInterval::upper_semicircle();
      const auto lower = CircleInterval::lower_semicircle();
      for (std::size_t i = 0; i < m; ++i) c.theta.push_back(angle_in(rng, upper));
      if (std::holds_alternative<PrimaryPair>(spec.fields)) {
        for (std::size_t i = 0; i < m; ++i) c.theta_bar.push_back(angle_in(rng, lower));
      }
      break;
    }
    case Identity::OmegaNKms: {
      const auto arcs = preimage_intervals(CircleInterval::upper_semicircle(), spec.n);
      const auto k = static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(spec.n));
      for (std::size_t i = 0; i < m; ++i) c.theta.push_back(angle_in(rng, arcs[k]));
      break;
    }
    case Identity::OmegaNInvariance: {
      for (std::size_t i = 0; i < m; ++i) c.theta.push_back(uniform(rng, 0.0, two_pi));
      c.g = random_group_element(rng);
      break;
    }
    case Identity::ProductInvariance: {
      const auto state = ProductOmega2::from_base(spec.base_interval);
      const std::size_t first = (m + 1) / 2;
      for (std::size_t i = 0; i < m; ++i) {
        c.theta.push_back(angle_in(rng, i < first ? state.i1 : state.i2));
      }
      break;
    }
  }
  return c;
}

}  // namespace detail

/// Seeded configurations that keep a margin of 1e-3 between insertions (and
/// 1e-4 along the continuation path) on every t of the grid.
inline std::vector<KmsConfiguration> sample_configurations(const KmsCheckSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  KmsCheckSpec conditioning = spec;
  // Product invariance flows every insertion towards the same endpoint, so
  // only a tenfold margin over the configured separation is demanded there.
  conditioning.min_separation = spec.identity == Identity::ProductInvariance
                                    ? 10.0 * spec.min_separation
                                    : std::max(spec.min_separation, 1e-3);
  conditioning.continuation_steps = std::min(spec.continuation_steps, 64);
  std::vector<KmsConfiguration> out;
  constexpr int max_attempts = 10000;
  for (int c = 0; c < spec.num_configurations; ++c) {
    bool accepted = false;
    for (int attempt = 0; attempt < max_attempts && !accepted; ++attempt) {
      KmsConfiguration cand = detail::propose(spec, rng);
      try {
        for (double t : spec.t_grid) (void)evaluate_case(conditioning, cand, 0, t);
        accepted = true;
      } catch (const std::runtime_error&) {
        continue;
      }
      out.push_back(std::move(cand));
    }
    if (!accepted) throw InvalidArgument("could not sample a non-singular configuration");
  }
  return out;
}

/// Runs every (t, configuration) case, ordered by t-grid index then
/// configuration. With jobs > 1 cases run on worker threads; the merged
/// report is identical to a serial run.
inline KmsReport run_check(const KmsCheckSpec& spec) {
  spec.validate();
  KmsReport report;
  report.identity = spec.identity;
  report.seed = spec.seed;
  report.tolerance = spec.tolerance;
  report.configurations =
      spec.configurations.empty() ? sample_configurations(spec) : spec.configurations;

  const std::size_t nc = report.configurations.size();
  const std::size_t total = spec.t_grid.size() * nc;
  std::vector<KmsCase> cases(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      try {
        cases[k] = evaluate_case(spec, report.configurations[k % nc], k % nc, spec.t_grid[k / nc]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(spec.jobs);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < std::min(threads, total); ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  report.cases = std::move(cases);
  for (const auto& c : report.cases) {
    report.max_residual = std::max(report.max_residual, c.residual);
    for (const auto& l : c.chain) report.max_residual = std::max(report.max_residual, l.residual);
    report.verdict = report.verdict && c.pass;
  }
  return report;
}

inline KmsReport check_vacuum_kms(KmsCheckSpec spec) {
  if (spec.identity != Identity::GeneralFieldKms) spec.identity = Identity::VacuumKms;
  return run_check(spec);
}

inline KmsReport check_omega_n_kms(KmsCheckSpec spec, int n) {
  spec.identity = Identity::OmegaNKms;
  spec.n = n;
  return run_check(spec);
}

inline KmsReport check_omega_n_invariance(KmsCheckSpec spec, int n) {
  spec.identity = Identity::OmegaNInvariance;
  spec.n = n;
  return run_check(spec);
}

inline KmsReport check_product_invariance(KmsCheckSpec spec) {
  spec.identity = Identity::ProductInvariance;
  return run_check(spec);
}

}  // namespace chiral_modular
