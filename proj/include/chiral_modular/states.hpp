#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chiral_modular/circle.hpp"
#include "chiral_modular/continuation.hpp"
#include "chiral_modular/correlators.hpp"
#include "chiral_modular/errors.hpp"

namespace chiral_modular {

// ---------------------------------------------------------------------------
// Field content of a correlator

/// Currents J^{a_1} ... J^{a_m} of a Kac-Moody algebra (weight 1 each).
struct Currents {
  CurrentAlgebraSpec algebra = CurrentAlgebraSpec::abelian();
  std::vector<int> colors;
};

/// Two insertions of one primary field, as in the two-point function.
struct PrimaryPair {
  PrimaryFieldSpec spec;
};

using Fields = std::variant<Currents, PrimaryPair>;

inline std::size_t field_count(const Fields& f) {
  if (const auto* c = std::get_if<Currents>(&f)) return c->colors.size();
  return 2;
}

/// Chiral weight of insertion i.
inline double chiral_weight(const Fields& f, std::size_t /*i*/) {
  if (std::holds_alternative<Currents>(f)) return 1.0;
  return std::get<PrimaryPair>(f).spec.delta;
}

inline std::string describe(const Fields& f) {
  if (const auto* c = std::get_if<Currents>(&f)) {
    std::string s = c->algebra.is_abelian() ? "abelian" : "nonabelian";
    s += " currents, level " + std::to_string(c->algebra.level()) + ", m = " +
         std::to_string(c->colors.size());
    return s;
  }
  const auto& p = std::get<PrimaryPair>(f).spec;
  return "primary pair, delta " + std::to_string(p.delta) + ", delta_bar " +
         std::to_string(p.delta_bar);
}

/// Vacuum correlator of the chiral factors, insertions in the given order.
inline Complex vacuum_chiral(const Fields& f, std::span<const Complex> points,
                             double min_separation = default_min_separation) {
  if (points.size() != field_count(f)) {
    throw InvalidArgument("number of points (" + std::to_string(points.size()) +
                          ") does not match the fields (" + std::to_string(field_count(f)) + ")");
  }
  if (const auto* c = std::get_if<Currents>(&f)) {
    return current_npoint(c->algebra, c->colors, points, min_separation);
  }
  const auto& p = std::get<PrimaryPair>(f).spec;
  return chiral_two_point(points[0], points[1], p.delta, p.normalization, min_separation);
}

// ---------------------------------------------------------------------------
// States

struct Vacuum {};

struct OmegaN {
  int n = 1;
};

struct OmegaNN {
  int n = 1;
};

/// Product state on the two z^2-preimages I1, I2 of a base interval.
struct ProductOmega2 {
  CircleInterval i1;
  CircleInterval i2;
  CircleInterval base;

  static ProductOmega2 from_base(const CircleInterval& base) {
    const auto arcs = preimage_intervals(base, 2);
    return ProductOmega2{arcs[0], arcs[1], base};
  }

  /// Recovers the base interval from I1 and checks I2 against it.
  static ProductOmega2 from_intervals(const CircleInterval& i1, const CircleInterval& i2,
                                      double tol = 1e-12) {
    const CircleInterval base(CirclePoint(2.0 * i1.start().theta()), 2.0 * i1.length());
    ProductOmega2 p = from_base(base);
    const auto same = [tol](const CircleInterval& a, const CircleInterval& b) {
      return arc_distance(a.start(), b.start()) <= tol && std::abs(a.length() - b.length()) <= tol;
    };
    if (!(same(i1, p.i1) && same(i2, p.i2)) && !(same(i1, p.i2) && same(i2, p.i1))) {
      throw InvalidArgument("product state intervals are not the two z^2-preimages of one base");
    }
    return ProductOmega2{i1, i2, base};
  }
};

using StateSpec = std::variant<Vacuum, OmegaN, OmegaNN, ProductOmega2>;

inline void validate(const StateSpec& s) {
  if (const auto* o = std::get_if<OmegaN>(&s); o && o->n < 1) {
    throw InvalidArgument("omega_n requires n >= 1");
  }
  if (const auto* o = std::get_if<OmegaNN>(&s); o && o->n < 1) {
    throw InvalidArgument("omega_nn requires n >= 1");
  }
}

inline std::string describe(const StateSpec& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Vacuum>) return "vacuum";
        else if constexpr (std::is_same_v<T, OmegaN>) return "omega_n(" + std::to_string(v.n) + ")";
        else if constexpr (std::is_same_v<T, OmegaNN>) return "omega_nn(" + std::to_string(v.n) + ")";
        else return "product_omega2";
      },
      s);
}

namespace detail {

/// Rejects coincident points and, for n > 1, pairs with z_i^n = z_j^n.
inline void require_no_opposite(std::span<const Complex> points, std::span<const Complex> powers,
                                int n, double min_separation) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (std::abs(points[i] - points[j]) < min_separation) {
        throw SingularConfiguration("insertion points " + std::to_string(i) + " and " +
                                        std::to_string(j) + " coincide",
                                    i, j);
      }
      if (std::abs(powers[i] - powers[j]) < min_separation) {
        throw OppositePoints("insertion points " + std::to_string(i) + " and " + std::to_string(j) +
                                 " are opposite points for n = " + std::to_string(n),
                             i, j);
      }
    }
  }
}

inline Complex omega_n_chiral(int n, const Fields& f, std::span<const Complex> points,
                              std::span<const Complex> powers, double min_separation) {
  require_no_opposite(points, powers, n, min_separation);
  Complex prefactor(1.0, 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Complex dz = static_cast<double>(n) * ipow(points[i], n - 1);
    prefactor *= cpow(dz, chiral_weight(f, i));
  }
  return prefactor * vacuum_chiral(f, powers, min_separation);
}

}  // namespace detail

/// Chiral correlator in the given state. The state acts by pulling the vacuum
/// correlator back through z -> z^n with prefactors (n z^{n-1})^Delta.
/// OmegaNN contributes only its chiral sector here.
inline Complex evaluate_chiral(const StateSpec& state, const Fields& fields,
                               std::span<const Complex> points,
                               double min_separation = default_min_separation);

inline Complex evaluate_chiral(const StateSpec& state, const Fields& fields,
                               std::span<const CirclePoint> points,
                               double min_separation = default_min_separation);

/// Product state: insertions are split by interval and each group is
/// evaluated in omega_2; cross-interval correlations are absent.
inline Complex evaluate_product(const ProductOmega2& state, const Fields& fields,
                                std::span<const CirclePoint> points,
                                double min_separation = default_min_separation) {
  if (points.size() != field_count(fields)) {
    throw InvalidArgument("number of points does not match the fields");
  }
  std::vector<CirclePoint> first;
  std::vector<CirclePoint> second;
  std::vector<std::size_t> first_idx;
  std::vector<std::size_t> second_idx;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (state.i1.contains(points[i])) {
      first.push_back(points[i]);
      first_idx.push_back(i);
    } else if (state.i2.contains(points[i])) {
      second.push_back(points[i]);
      second_idx.push_back(i);
    } else {
      throw LocalizationError("insertion point " + std::to_string(i) + " (theta = " +
                                  std::to_string(points[i].theta()) +
                                  ") lies in neither interval of the product state",
                              i);
    }
  }
  const auto group = [&](const std::vector<CirclePoint>& pts,
                         const std::vector<std::size_t>& idx) -> Complex {
    if (pts.empty()) return {1.0, 0.0};
    if (const auto* c = std::get_if<Currents>(&fields)) {
      Currents sub{c->algebra, {}};
      for (std::size_t i : idx) sub.colors.push_back(c->colors[i]);
      return evaluate_chiral(OmegaN{2}, Fields{sub}, std::span<const CirclePoint>(pts),
                             min_separation);
    }
    const auto& spec = std::get<PrimaryPair>(fields).spec;
    if (pts.size() == 2) {
      return evaluate_chiral(OmegaN{2}, fields, std::span<const CirclePoint>(pts), min_separation);
    }
    // one-point function of a primary
    return spec.delta == 0.0 ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
  };
  return group(first, first_idx) * group(second, second_idx);
}

inline Complex evaluate_chiral(const StateSpec& state, const Fields& fields,
                               std::span<const Complex> points, double min_separation) {
  validate(state);
  if (points.size() != field_count(fields)) {
    throw InvalidArgument("number of points does not match the fields");
  }
  int n = 1;
  if (const auto* o = std::get_if<OmegaN>(&state)) n = o->n;
  if (const auto* o = std::get_if<OmegaNN>(&state)) n = o->n;
  if (const auto* p = std::get_if<ProductOmega2>(&state)) {
    std::vector<CirclePoint> cps;
    for (const Complex& z : points) cps.push_back(CirclePoint::from_complex(z));
    return evaluate_product(*p, fields, cps, min_separation);
  }
  if (n == 1) return vacuum_chiral(fields, points, min_separation);
  std::vector<Complex> powers;
  powers.reserve(points.size());
  for (const Complex& z : points) powers.push_back(ipow(z, n));
  return detail::omega_n_chiral(n, fields, points, powers, min_separation);
}

inline Complex evaluate_chiral(const StateSpec& state, const Fields& fields,
                               std::span<const CirclePoint> points, double min_separation) {
  validate(state);
  if (const auto* p = std::get_if<ProductOmega2>(&state)) {
    return evaluate_product(*p, fields, points, min_separation);
  }
  int n = 1;
  if (const auto* o = std::get_if<OmegaN>(&state)) n = o->n;
  if (const auto* o = std::get_if<OmegaNN>(&state)) n = o->n;
  std::vector<Complex> zs;
  std::vector<Complex> powers;
  for (const CirclePoint& p : points) {
    zs.push_back(p.z());
    powers.push_back(CirclePoint(n * p.theta()).z());
  }
  if (n == 1) return vacuum_chiral(fields, zs, min_separation);
  if (points.size() != field_count(fields)) {
    throw InvalidArgument("number of points does not match the fields");
  }
  return detail::omega_n_chiral(n, fields, zs, powers, min_separation);
}

/// omega_{n,n} two-point function of a primary: both sectors are pulled back,
///   prod (n z^{n-1})^Delta (n zb^{n-1})^Delta_bar  C (z1^n - z2^n)^{-2 Delta} (zb1^n - zb2^n)^{-2 Delta_bar}.
inline Complex evaluate_nonchiral(const OmegaNN& state, const PrimaryFieldSpec& spec,
                                  std::span<const Complex> z, std::span<const Complex> zbar,
                                  double min_separation = default_min_separation) {
  if (state.n < 1) throw InvalidArgument("omega_nn requires n >= 1");
  if (z.size() != 2 || zbar.size() != 2) {
    throw InvalidArgument("the non-chiral two-point function takes two points and two conjugates");
  }
  const int n = state.n;
  if (n == 1) return primary_two_point(z[0], zbar[0], z[1], zbar[1], spec, min_separation);
  const Complex zp[2] = {ipow(z[0], n), ipow(z[1], n)};
  const Complex zbp[2] = {ipow(zbar[0], n), ipow(zbar[1], n)};
  detail::require_no_opposite(z, zp, n, min_separation);
  if (spec.delta_bar != 0.0) detail::require_no_opposite(zbar, zbp, n, min_separation);
  Complex prefactor(1.0, 0.0);
  for (int i = 0; i < 2; ++i) {
    prefactor *= cpow(static_cast<double>(n) * ipow(z[i], n - 1), spec.delta);
    if (spec.delta_bar != 0.0) {
      prefactor *= cpow(static_cast<double>(n) * ipow(zbar[i], n - 1), spec.delta_bar);
    }
  }
  return prefactor * primary_two_point(zp[0], zbp[0], zp[1], zbp[1], spec, min_separation);
}

}  // namespace chiral_modular
