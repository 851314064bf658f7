#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "chiral_modular/circle.hpp"
#include "chiral_modular/errors.hpp"

namespace chiral_modular {

/// Element of SU(1,1), [[alpha, beta], [conj(beta), conj(alpha)]] with
/// |alpha|^2 - |beta|^2 = 1, read as an element of PSU(1,1) = SU(1,1)/{+-1}.
class MoebiusElement {
 public:
  MoebiusElement() = default;

  /// Validates the SU(1,1) constraint to a relative tolerance.
  MoebiusElement(Complex alpha, Complex beta, double tol = 1e-12) : alpha_(alpha), beta_(beta) {
    const double a2 = std::norm(alpha);
    const double b2 = std::norm(beta);
    if (std::abs(a2 - b2 - 1.0) > tol * (a2 + b2)) {
      throw InvalidArgument("MoebiusElement: |alpha|^2 - |beta|^2 = " + std::to_string(a2 - b2) +
                            ", expected 1");
    }
  }

  /// Rescales (alpha, beta) onto the constraint surface; requires |alpha| > |beta|.
  static MoebiusElement normalized(Complex alpha, Complex beta) {
    const double det = std::norm(alpha) - std::norm(beta);
    if (!(det > 0.0)) throw InvalidArgument("MoebiusElement: |alpha| must exceed |beta|");
    const double s = 1.0 / std::sqrt(det);
    return MoebiusElement(alpha * s, beta * s);
  }

  static MoebiusElement identity() { return {}; }

  Complex alpha() const { return alpha_; }
  Complex beta() const { return beta_; }

  bool is_identity() const {
    return beta_ == Complex(0.0, 0.0) &&
           (alpha_ == Complex(1.0, 0.0) || alpha_ == Complex(-1.0, 0.0));
  }

  /// Equality in PSU(1,1), i.e. up to overall sign.
  bool approx_equal(const MoebiusElement& other, double tol) const {
    const auto close = [tol](Complex a, Complex b) { return std::abs(a - b) <= tol; };
    return (close(alpha_, other.alpha_) && close(beta_, other.beta_)) ||
           (close(alpha_, -other.alpha_) && close(beta_, -other.beta_));
  }

 private:
  Complex alpha_{1.0, 0.0};
  Complex beta_{0.0, 0.0};
};

/// Matrix product g * h.
inline MoebiusElement compose(const MoebiusElement& g, const MoebiusElement& h) {
  const Complex a = g.alpha() * h.alpha() + g.beta() * std::conj(h.beta());
  const Complex b = g.alpha() * h.beta() + g.beta() * std::conj(h.alpha());
  return MoebiusElement::normalized(a, b);
}

inline MoebiusElement inverse(const MoebiusElement& g) {
  return MoebiusElement(std::conj(g.alpha()), -g.beta());
}

/// z -> (alpha z + beta) / (conj(beta) z + conj(alpha)) on the Riemann sphere.
inline GeneralPoint act(const MoebiusElement& g, GeneralPoint p) {
  const Complex a = g.alpha();
  const Complex b = g.beta();
  if (p.is_infinity()) {
    if (b == Complex(0.0, 0.0)) return GeneralPoint::infinity();
    return a / std::conj(b);
  }
  const Complex z = p.value();
  const Complex den = std::conj(b) * z + std::conj(a);
  if (den == Complex(0.0, 0.0)) return GeneralPoint::infinity();
  return (a * z + b) / den;
}

inline CirclePoint act(const MoebiusElement& g, CirclePoint p) {
  if (g.is_identity()) return p;
  return CirclePoint::from_complex(act(g, GeneralPoint(p)).value());
}

/// Dil(t): alpha = cosh(pi t), beta = sinh(pi t). Fixes +-1 and preserves
/// both semicircles.
inline MoebiusElement dilation(double t) {
  if (t == 0.0) return MoebiusElement::identity();
  return MoebiusElement(std::cosh(pi * t), std::sinh(pi * t));
}

/// Dil(t) on angles. In the Cayley coordinate x = tan(theta/2) the dilation is
/// x -> exp(-2 pi t) x, evaluated here through atan2 so that both fixpoints
/// are reproduced without cancellation.
inline double dilation_angle(double t, double theta) {
  const double h = 0.5 * reduce_angle(theta);
  const double out = std::atan2(std::exp(-pi * t) * std::sin(h), std::exp(pi * t) * std::cos(h));
  return reduce_angle(2.0 * out);
}

/// Three-point normalized adapter: start(I) -> 1, midpoint(I) -> i, end(I) -> -1,
/// so the image of I is the upper semicircle.
inline MoebiusElement interval_adapter(const CircleInterval& interval) {
  // Cross-ratio maps sending (p1, p2, p3) -> (0, 1, inf), as 2x2 matrices.
  struct Mat {
    Complex a, b, c, d;
  };
  const auto to_standard = [](Complex p1, Complex p2, Complex p3) {
    return Mat{p2 - p3, -p1 * (p2 - p3), p2 - p1, -p3 * (p2 - p1)};
  };
  const Mat f = to_standard(interval.start().z(), interval.midpoint().z(), interval.end().z());
  const Mat h = to_standard(Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(-1.0, 0.0));
  // adj(h) * f
  const Mat g{h.d * f.a - h.b * f.c, h.d * f.b - h.b * f.d, -h.c * f.a + h.a * f.c,
              -h.c * f.b + h.a * f.d};
  const Complex root = std::sqrt(g.a * g.d - g.b * g.c);
  return MoebiusElement::normalized(g.a / root, g.b / root);
}

/// Dil_I(t) = g_I^{-1} Dil(t) g_I, mapping I onto itself.
inline MoebiusElement interval_dilation(const CircleInterval& interval, double t) {
  if (t == 0.0) return MoebiusElement::identity();
  const MoebiusElement g = interval_adapter(interval);
  return compose(inverse(g), compose(dilation(t), g));
}

/// Complexified flow time tau = t + i s. Kept apart from MoebiusElement:
/// for s not an integer the coefficients leave SU(1,1).
class ComplexDilation {
 public:
  explicit ComplexDilation(Complex tau) : tau_(tau) {
    const double x = pi * tau.real();
    const double c = cos_pi(tau.imag());
    const double s = sin_pi(tau.imag());
    a_ = Complex(std::cosh(x) * c, std::sinh(x) * s);
    b_ = Complex(std::sinh(x) * c, std::cosh(x) * s);
  }

  Complex tau() const { return tau_; }
  /// cosh(pi tau)
  Complex a() const { return a_; }
  /// sinh(pi tau)
  Complex b() const { return b_; }

 private:
  // cos(pi s), sin(pi s) with exact values on the half-integers, so that
  // tau = t + i gives exactly (-cosh, -sinh).
  static double cos_pi(double s) {
    const double r = std::fmod(std::abs(s), 2.0);
    if (r == 0.0) return 1.0;
    if (r == 0.5 || r == 1.5) return 0.0;
    if (r == 1.0) return -1.0;
    return std::cos(pi * s);
  }
  static double sin_pi(double s) {
    const double r = std::fmod(s, 2.0);
    const double m = r < 0.0 ? r + 2.0 : r;
    if (m == 0.0 || m == 1.0) return 0.0;
    if (m == 0.5) return 1.0;
    if (m == 1.5) return -1.0;
    return std::sin(pi * s);
  }

  Complex tau_;
  Complex a_;
  Complex b_;
};

/// (cosh(pi tau) z + sinh(pi tau)) / (sinh(pi tau) z + cosh(pi tau)).
inline GeneralPoint complex_dilation_act(const ComplexDilation& d, GeneralPoint p) {
  if (p.is_infinity()) {
    if (d.b() == Complex(0.0, 0.0)) return GeneralPoint::infinity();
    return d.a() / d.b();
  }
  const Complex z = p.value();
  const Complex den = d.b() * z + d.a();
  if (den == Complex(0.0, 0.0)) return GeneralPoint::infinity();
  return (d.a() * z + d.b()) / den;
}

/// n-fold covering transformation g_n(z) = (g(z^n))^{1/n}.
struct CoveringMap {
  CoveringMap(int order, MoebiusElement g) : n(order), base(g) {
    if (order < 1) throw InvalidArgument("CoveringMap: order must be positive");
  }
  int n;
  MoebiusElement base;
};

/// g_n(z) with the root taken in the fundamental sector of z.
inline CirclePoint covering_transform(const CoveringMap& c, CirclePoint p) {
  if (c.base.is_identity()) return p;
  if (c.n == 1) return act(c.base, p);
  const int k = sector_index(p, c.n);
  const CirclePoint image = act(c.base, CirclePoint(c.n * p.theta()));
  return CirclePoint((image.theta() + two_pi * k) / c.n);
}

namespace detail {

// Angles within a few ulps of a fixpoint of the n-fold flow are fixpoints:
// the flow is expanding there and would otherwise amplify rounding of the
// input angle into a visible displacement.
inline bool near_angle(double phi, double target, int n) {
  const double tol = 8.0 * n * two_pi * std::numeric_limits<double>::epsilon();
  return arc_distance(CirclePoint(phi), CirclePoint(target)) <= tol;
}

}  // namespace detail

/// Dil_n(t) z = (Dil(t) z^n)^{1/n}, sector-preserving branch. The 2n points
/// with z^n = +-1 are fixed.
inline CirclePoint dilation_n(int n, double t, CirclePoint p) {
  if (n < 1) throw InvalidArgument("dilation_n: n must be positive");
  if (t == 0.0) return p;
  const double phi = reduce_angle(n * p.theta());
  if (detail::near_angle(phi, 0.0, n) || detail::near_angle(phi, pi, n)) return p;
  const int k = sector_index(p, n);
  return CirclePoint((dilation_angle(t, phi) + two_pi * k) / n);
}

/// (Dil_I(t) z^n)^{1/n}, mapping each z^n-preimage arc of I, and of its
/// complement, onto itself. Sectors are measured from start(I) / n so that
/// no preimage arc straddles a sector boundary; for the upper semicircle this
/// coincides with dilation_n.
inline CirclePoint interval_dilation_n(const CircleInterval& interval, int n, double t,
                                       CirclePoint p) {
  if (n < 1) throw InvalidArgument("interval_dilation_n: n must be positive");
  if (t == 0.0) return p;
  const double origin = interval.start().theta();
  const double phi = reduce_angle(n * p.theta());
  if (detail::near_angle(phi, origin, n) || detail::near_angle(phi, origin + interval.length(), n)) {
    return p;
  }
  const double u = reduce_angle(p.theta() - origin / n);
  int k = static_cast<int>(std::floor(u * n / two_pi));
  if (k >= n) k = n - 1;
  const CirclePoint image = act(interval_dilation(interval, t), CirclePoint(phi));
  return CirclePoint((origin + reduce_angle(image.theta() - origin) + two_pi * k) / n);
}

/// The 2n fixpoints of Dil_n: theta = k pi / n, k = 0 .. 2n-1.
inline std::vector<CirclePoint> fixpoints_of_dilation_n(int n) {
  if (n < 1) throw InvalidArgument("fixpoints_of_dilation_n: n must be positive");
  std::vector<CirclePoint> points;
  points.reserve(static_cast<std::size_t>(2 * n));
  for (int k = 0; k < 2 * n; ++k) points.emplace_back(k * pi / n);
  return points;
}

// ---------------------------------------------------------------------------
// Derivatives (closed forms; det = 1 so g'(z) = 1 / (conj(beta) z + conj(alpha))^2)

inline Complex derivative(const MoebiusElement& g, GeneralPoint p) {
  if (p.is_infinity()) throw SingularPoint("derivative at the point at infinity");
  const Complex den = std::conj(g.beta()) * p.value() + std::conj(g.alpha());
  if (den == Complex(0.0, 0.0)) throw SingularPoint("derivative at the pole of a Moebius map");
  return 1.0 / (den * den);
}

inline Complex derivative(const ComplexDilation& d, GeneralPoint p) {
  if (p.is_infinity()) throw SingularPoint("derivative at the point at infinity");
  const Complex den = d.b() * p.value() + d.a();
  if (den == Complex(0.0, 0.0)) throw SingularPoint("derivative at the pole of a dilation");
  return 1.0 / (den * den);
}

/// Chain rule through z^n and the chosen root r = g_n(z):
/// d/dz (g(z^n))^{1/n} = r^{1-n} g'(z^n) z^{n-1}.
inline Complex covering_chain_rule(int n, Complex z, Complex root, Complex base_derivative) {
  if (root == Complex(0.0, 0.0) || !std::isfinite(std::abs(root))) {
    throw SingularPoint("derivative at a branch point of the n-th root");
  }
  if (n == 1) return base_derivative;
  return std::pow(root, 1 - n) * base_derivative * std::pow(z, n - 1);
}

inline Complex derivative(const CoveringMap& c, CirclePoint p) {
  if (c.base.is_identity()) return {1.0, 0.0};
  const Complex z = p.z();
  const Complex zn = CirclePoint(c.n * p.theta()).z();
  const Complex root = covering_transform(c, p).z();
  return covering_chain_rule(c.n, z, root, derivative(c.base, zn));
}

/// Derivative of z -> Dil_n(t) z.
inline Complex dilation_n_derivative(int n, double t, CirclePoint p) {
  const Complex z = p.z();
  const Complex zn = CirclePoint(n * p.theta()).z();
  const Complex root = dilation_n(n, t, p).z();
  return covering_chain_rule(n, z, root, derivative(dilation(t), zn));
}

}  // namespace chiral_modular
