#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "chiral_modular/circle.hpp"
#include "chiral_modular/continuation.hpp"
#include "chiral_modular/errors.hpp"

namespace chiral_modular {

/// Default minimum pairwise separation of insertion points.
inline constexpr double default_min_separation = 1e-6;

/// Chiral / anti-chiral weights and two-point normalization of a primary field.
struct PrimaryFieldSpec {
  double delta = 0.0;
  double delta_bar = 0.0;
  double normalization = 1.0;

  /// Delta = Delta_bar, the sufficient condition for locality.
  static PrimaryFieldSpec scalar(double delta, double normalization = 1.0) {
    return PrimaryFieldSpec{delta, delta, normalization}.validated();
  }
  static PrimaryFieldSpec chiral(double delta, double normalization = 1.0) {
    return PrimaryFieldSpec{delta, 0.0, normalization}.validated();
  }

  bool is_local() const { return delta == delta_bar; }

  PrimaryFieldSpec validated() const {
    if (!(delta >= 0.0) || !(delta_bar >= 0.0)) {
      throw InvalidArgument("primary field weights must be non-negative");
    }
    if (!(normalization > 0.0)) throw InvalidArgument("two-point normalization must be positive");
    return *this;
  }
};

/// Structure constants f^{abc} (row-major, dim^3) and level k of a current
/// algebra [J^a, J^b] = i f^{abc} J^c delta - k delta^{ab} d delta.
class CurrentAlgebraSpec {
 public:
  CurrentAlgebraSpec(int dim, std::vector<double> structure, double level, double tol = 1e-12)
      : dim_(dim), f_(std::move(structure)), level_(level) {
    if (dim < 1) throw InvalidArgument("current algebra needs at least one current");
    if (!(level > 0.0)) throw InvalidArgument("current algebra level must be positive");
    const auto n = static_cast<std::size_t>(dim);
    if (f_.size() != n * n * n) throw InvalidArgument("structure constants must have dim^3 entries");
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        for (int c = 0; c < dim; ++c) {
          if (std::abs(f(a, b, c) + f(b, a, c)) > tol) {
            throw InvalidArgument("structure constants are not antisymmetric in (a, b)");
          }
        }
      }
    }
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        for (int c = 0; c < dim; ++c) {
          for (int d = 0; d < dim; ++d) {
            double j = 0.0;
            for (int e = 0; e < dim; ++e) {
              j += f(a, b, e) * f(e, c, d) + f(b, c, e) * f(e, a, d) + f(c, a, e) * f(e, b, d);
            }
            if (std::abs(j) > tol) throw InvalidArgument("structure constants violate Jacobi");
          }
        }
      }
    }
    for (double x : f_) abelian_ = abelian_ && x == 0.0;
  }

  /// N commuting currents.
  static CurrentAlgebraSpec abelian(int dim = 1, double level = 1.0) {
    const auto n = static_cast<std::size_t>(dim);
    return CurrentAlgebraSpec(dim, std::vector<double>(n * n * n, 0.0), level);
  }

  /// su(2) with f^{abc} = epsilon^{abc}.
  static CurrentAlgebraSpec su2(double level = 1.0) {
    std::vector<double> f(27, 0.0);
    const auto at = [](int a, int b, int c) { return static_cast<std::size_t>(9 * a + 3 * b + c); };
    f[at(0, 1, 2)] = f[at(1, 2, 0)] = f[at(2, 0, 1)] = 1.0;
    f[at(1, 0, 2)] = f[at(0, 2, 1)] = f[at(2, 1, 0)] = -1.0;
    return CurrentAlgebraSpec(3, std::move(f), level);
  }

  int dim() const { return dim_; }
  double level() const { return level_; }
  bool is_abelian() const { return abelian_; }
  double f(int a, int b, int c) const {
    return f_[static_cast<std::size_t>((a * dim_ + b) * dim_ + c)];
  }
  const std::vector<double>& structure_constants() const { return f_; }

 private:
  int dim_;
  std::vector<double> f_;
  double level_;
  bool abelian_ = true;
};

/// A correlator value with the data that produced it.
struct CorrelatorResult {
  Complex value;
  std::vector<Complex> points;
  std::string state;
  std::string fields;
};

namespace detail {

inline void require_separated(std::span<const Complex> points, double min_separation) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (std::abs(points[i] - points[j]) < min_separation) {
        throw SingularConfiguration("insertion points " + std::to_string(i) + " and " +
                                        std::to_string(j) + " coincide",
                                    i, j);
      }
    }
  }
}

}  // namespace detail

/// C (z1 - z2)^{-2 Delta} (zb1 - zb2)^{-2 Delta_bar}. The chiral and
/// anti-chiral factors are evaluated separately (principal branch for
/// non-integer exponents), never merged into a modulus.
inline Complex primary_two_point(Complex z1, Complex zb1, Complex z2, Complex zb2,
                                 const PrimaryFieldSpec& spec,
                                 double min_separation = default_min_separation) {
  if (std::abs(z1 - z2) < min_separation) {
    throw SingularConfiguration("chiral coordinates of the two insertions coincide", 0, 1);
  }
  if (spec.delta_bar != 0.0 && std::abs(zb1 - zb2) < min_separation) {
    throw SingularConfiguration("anti-chiral coordinates of the two insertions coincide", 0, 1);
  }
  Complex value = spec.normalization * cpow(z1 - z2, -2.0 * spec.delta);
  if (spec.delta_bar != 0.0) value *= cpow(zb1 - zb2, -2.0 * spec.delta_bar);
  return value;
}

/// Chiral factor only: C (z1 - z2)^{-2 Delta}.
inline Complex chiral_two_point(Complex z1, Complex z2, double delta, double normalization = 1.0,
                                double min_separation = default_min_separation) {
  if (std::abs(z1 - z2) < min_separation) {
    throw SingularConfiguration("chiral coordinates of the two insertions coincide", 0, 1);
  }
  return normalization * cpow(z1 - z2, -2.0 * delta);
}

/// Vacuum m-point function of currents J^{a_1}(z_1) ... J^{a_m}(z_m) by the
/// Ward-identity recursion peeling the first current:
///   sum_j k delta^{a_1 a_j} / (z_1 - z_j)^2 <... without 1, j ...>
/// + sum_j i f^{a_1 a_j d} / (z_1 - z_j) <... J^d(z_j) in slot j ...>.
/// Sub-correlators are memoized per call.
inline Complex current_npoint(const CurrentAlgebraSpec& algebra, std::span<const int> colors,
                              std::span<const Complex> points,
                              double min_separation = default_min_separation) {
  if (colors.size() != points.size()) {
    throw InvalidArgument("current_npoint: colors and points differ in length");
  }
  for (int a : colors) {
    if (a < 0 || a >= algebra.dim()) {
      throw InvalidArgument("current_npoint: color index " + std::to_string(a) + " out of range");
    }
  }
  detail::require_separated(points, min_separation);

  // State: (color, point index) pairs in operator order.
  using Slot = std::pair<int, int>;
  using Key = std::vector<Slot>;
  std::map<Key, Complex> memo;
  const double k = algebra.level();
  const Complex i_unit(0.0, 1.0);

  std::function<Complex(const Key&)> eval = [&](const Key& slots) -> Complex {
    if (slots.empty()) return {1.0, 0.0};
    if (slots.size() == 1) return {0.0, 0.0};
    if (auto it = memo.find(slots); it != memo.end()) return it->second;

    const auto [a1, p1] = slots.front();
    const Complex z1 = points[static_cast<std::size_t>(p1)];
    Complex total(0.0, 0.0);
    for (std::size_t j = 1; j < slots.size(); ++j) {
      const auto [aj, pj] = slots[j];
      const Complex dz = z1 - points[static_cast<std::size_t>(pj)];
      if (a1 == aj) {
        Key rest;
        rest.reserve(slots.size() - 2);
        for (std::size_t q = 1; q < slots.size(); ++q) {
          if (q != j) rest.push_back(slots[q]);
        }
        total += k / (dz * dz) * eval(rest);
      }
      if (algebra.is_abelian()) continue;
      for (int d = 0; d < algebra.dim(); ++d) {
        const double f = algebra.f(a1, aj, d);
        if (f == 0.0) continue;
        Key rest(slots.begin() + 1, slots.end());
        rest[j - 1].first = d;
        total += i_unit * f / dz * eval(rest);
      }
    }
    memo.emplace(slots, total);
    return total;
  };

  Key start;
  start.reserve(points.size());
  for (std::size_t q = 0; q < points.size(); ++q) {
    start.emplace_back(colors[q], static_cast<int>(q));
  }
  return eval(start);
}

/// Independent oracle for commuting currents of one color: the sum over
/// perfect matchings of prod k / (z_i - z_j)^2. Odd counts give 0.
inline Complex wick_oracle_abelian(double level, std::span<const Complex> points,
                                   double min_separation = default_min_separation) {
  detail::require_separated(points, min_separation);
  if (points.size() % 2 == 1) return {0.0, 0.0};
  std::vector<Complex> pts(points.begin(), points.end());
  std::function<Complex(std::vector<Complex>&)> pairings = [&](std::vector<Complex>& rest) {
    if (rest.empty()) return Complex(1.0, 0.0);
    Complex sum(0.0, 0.0);
    const Complex head = rest.front();
    for (std::size_t j = 1; j < rest.size(); ++j) {
      std::vector<Complex> sub;
      sub.reserve(rest.size() - 2);
      for (std::size_t q = 1; q < rest.size(); ++q) {
        if (q != j) sub.push_back(rest[q]);
      }
      const Complex dz = head - rest[j];
      sum += level / (dz * dz) * pairings(sub);
    }
    return sum;
  };
  return pairings(pts);
}

/// (dg)^Delta on the principal branch; exact for integer Delta.
inline Complex jacobian_factor(Complex derivative, double delta) {
  if (derivative == Complex(0.0, 0.0)) {
    throw SingularConfiguration("zero derivative in a Jacobian factor", 0, 0);
  }
  return cpow(derivative, delta);
}

/// (dg(s))^Delta continued along a parameter path s in [0, 1], starting from
/// the principal branch at s = 0 and following arg(dg) continuously.
inline Complex jacobian_factor(const std::function<Complex(double)>& derivative_path, double delta,
                               int steps = 100) {
  const Complex end = derivative_path(1.0);
  if (end == Complex(0.0, 0.0)) throw SingularConfiguration("zero derivative in a Jacobian factor", 0, 0);
  if (is_integer(delta)) return ipow(end, static_cast<long long>(delta));
  ContinuationOptions opt;
  opt.steps = steps;
  const TrackedLogs logs = track_logs(
      [&](double s) { return PathSample{{derivative_path(s)}}; }, opt, 0.0);
  return continued_product(logs, {delta});
}

}  // namespace chiral_modular
