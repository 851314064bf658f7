#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "chiral_modular/errors.hpp"

namespace chiral_modular {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Endpoints of open arcs are excluded with this slack.
inline constexpr double endpoint_tolerance = 1e-12;

/// Reduces an angle to [0, 2pi).
inline double reduce_angle(double theta) {
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

/// A point on the unit circle, stored by its angle so that |z| = 1 holds
/// exactly no matter how many maps are composed.
class CirclePoint {
 public:
  CirclePoint() = default;
  explicit CirclePoint(double theta) : theta_(reduce_angle(theta)) {}

  /// Projects a nonzero complex number radially onto the circle.
  static CirclePoint from_complex(Complex z) { return CirclePoint(std::arg(z)); }

  double theta() const { return theta_; }
  Complex z() const { return std::polar(1.0, theta_); }

  friend bool operator==(const CirclePoint&, const CirclePoint&) = default;

 private:
  double theta_ = 0.0;
};

/// Angular distance on the circle, in [0, pi].
inline double arc_distance(CirclePoint a, CirclePoint b) {
  const double d = reduce_angle(a.theta() - b.theta());
  return d > pi ? two_pi - d : d;
}

/// A point of the extended complex plane. The point at infinity is an
/// explicit tag, never a large float.
class GeneralPoint {
 public:
  GeneralPoint(Complex z) : z_(z) {}  // NOLINT(google-explicit-constructor)
  GeneralPoint(CirclePoint p) : z_(p.z()) {}  // NOLINT(google-explicit-constructor)

  static GeneralPoint infinity() {
    GeneralPoint p(Complex{});
    p.infinite_ = true;
    return p;
  }

  bool is_infinity() const { return infinite_; }

  Complex value() const {
    if (infinite_) throw InvalidArgument("value() of the point at infinity");
    return z_;
  }

 private:
  Complex z_;
  bool infinite_ = false;
};

/// The real line with a tagged point at infinity.
class ExtendedReal {
 public:
  ExtendedReal(double x) : x_(x) {}  // NOLINT(google-explicit-constructor)

  static ExtendedReal infinity() {
    ExtendedReal r(0.0);
    r.infinite_ = true;
    return r;
  }

  bool is_infinity() const { return infinite_; }

  double value() const {
    if (infinite_) throw InvalidArgument("value() of the point at infinity");
    return x_;
  }

 private:
  double x_;
  bool infinite_ = false;
};

/// Stereographic projection S^1 \ {-1} -> R, x = -i (z - 1) / (z + 1).
/// On the circle this is tan(theta / 2); z = -1 goes to infinity.
inline ExtendedReal cayley(CirclePoint p) {
  if (p.theta() == pi) return ExtendedReal::infinity();
  return std::tan(0.5 * p.theta());
}

inline GeneralPoint cayley(GeneralPoint p) {
  if (p.is_infinity()) return Complex(0.0, -1.0);
  const Complex z = p.value();
  if (z == Complex(-1.0, 0.0)) return GeneralPoint::infinity();
  return Complex(0.0, -1.0) * (z - 1.0) / (z + 1.0);
}

/// z = (1 + i x) / (1 - i x); infinity goes to -1.
inline CirclePoint inverse_cayley(ExtendedReal x) {
  if (x.is_infinity()) return CirclePoint(pi);
  return CirclePoint(2.0 * std::atan(x.value()));
}

/// Open counterclockwise arc (start, start + length) with 0 < length < 2pi.
class CircleInterval {
 public:
  CircleInterval(CirclePoint start, double length) : start_(start), length_(length) {
    if (!(length > 0.0 && length < two_pi)) {
      throw InvalidArgument("interval length must lie in (0, 2pi), got " + std::to_string(length));
    }
  }

  /// Counterclockwise arc from theta_start to theta_end.
  static CircleInterval from_endpoints(double theta_start, double theta_end) {
    const double len = reduce_angle(theta_end - theta_start);
    return CircleInterval(CirclePoint(theta_start), len);
  }

  static CircleInterval upper_semicircle() { return CircleInterval(CirclePoint(0.0), pi); }
  static CircleInterval lower_semicircle() { return CircleInterval(CirclePoint(pi), pi); }

  CirclePoint start() const { return start_; }
  CirclePoint end() const { return CirclePoint(start_.theta() + length_); }
  CirclePoint midpoint() const { return CirclePoint(start_.theta() + 0.5 * length_); }
  double length() const { return length_; }

  /// Counterclockwise offset of p from the start, in [0, 2pi).
  double offset(CirclePoint p) const { return reduce_angle(p.theta() - start_.theta()); }

  /// Point at arc parameter u in (0, length).
  CirclePoint at(double u) const { return CirclePoint(start_.theta() + u); }

  bool contains(CirclePoint p, double tol = endpoint_tolerance) const {
    const double u = offset(p);
    return u > tol && u < length_ - tol;
  }

 private:
  CirclePoint start_;
  double length_;
};

/// Index k of the fundamental sector [2pi k / n, 2pi (k+1) / n) containing p.
inline int sector_index(CirclePoint p, int n) {
  if (n < 1) throw InvalidArgument("covering order must be positive");
  auto k = static_cast<int>(std::floor(p.theta() * n / two_pi));
  if (k >= n) k = n - 1;
  if (k < 0) k = 0;
  return k;
}

/// The n arcs mapped bijectively onto I by z -> z^n, ordered by start angle.
inline std::vector<CircleInterval> preimage_intervals(const CircleInterval& interval, int n) {
  if (n < 1) throw InvalidArgument("preimage_intervals: n must be positive");
  std::vector<CircleInterval> arcs;
  arcs.reserve(static_cast<std::size_t>(n));
  const double len = interval.length() / n;
  for (int k = 0; k < n; ++k) {
    arcs.emplace_back(CirclePoint((interval.start().theta() + two_pi * k) / n), len);
  }
  return arcs;
}

/// True iff I holds two distinct points whose arguments agree mod 2pi / n.
/// Two points of an open arc can be separated by any arc length below the
/// arc's own length, so this is a length test against the period 2pi / n.
inline bool has_opposite_points(const CircleInterval& interval, int n) {
  if (n < 1) throw InvalidArgument("has_opposite_points: n must be positive");
  if (n == 1) return false;
  return interval.length() > two_pi / n + 2.0 * endpoint_tolerance;
}

/// z -> -conj(z), i.e. theta -> pi - theta. Involutive.
inline CirclePoint rotated_tcp(CirclePoint p) {
  double theta = pi - p.theta();
  if (theta < 0.0) theta += two_pi;
  return CirclePoint(theta);
}

/// Image arc under rotated_tcp (orientation reversal swaps the endpoints).
inline CircleInterval rotated_tcp(const CircleInterval& interval) {
  return CircleInterval(rotated_tcp(interval.end()), interval.length());
}

/// Quarter circle i in {1, 2, 3, 4}: theta in ((i-1) pi/2, i pi/2).
inline CircleInterval quarter_circle(int i) {
  if (i < 1 || i > 4) throw InvalidArgument("quarter_circle index must be in 1..4");
  return CircleInterval(CirclePoint((i - 1) * pi / 2.0), pi / 2.0);
}

}  // namespace chiral_modular
