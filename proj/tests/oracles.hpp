#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library code they are compared against.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracles {

using Complex = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double wrap(double theta) {
  double r = std::fmod(theta, two_pi);
  return r < 0.0 ? r + two_pi : r;
}

inline double angle_gap(double a, double b) {
  const double d = wrap(a - b);
  return std::min(d, two_pi - d);
}

/// The Moebius map sending (p1, p2, p3) to (q1, q2, q3), evaluated at z by
/// solving the cross-ratio equation for w.
inline Complex three_point_map(Complex p1, Complex p2, Complex p3, Complex q1, Complex q2,
                               Complex q3, Complex z) {
  const Complex x = (z - p1) * (p2 - p3) / ((z - p3) * (p2 - p1));
  return (q1 * (q2 - q3) - x * q3 * (q2 - q1)) / ((q2 - q3) - x * (q2 - q1));
}

/// 2x2 complex matrix acting by fractional-linear maps.
struct Mat2 {
  Complex a, b, c, d;
  Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
};

inline Mat2 su11(Complex alpha, Complex beta) { return {alpha, beta, std::conj(beta), std::conj(alpha)}; }

/// Does a sampled open arc hold two points whose angles agree mod 2pi/n?
/// Scans all 200 x 200 sample pairs; a pair counts when its separation is
/// within half a grid spacing of a nonzero multiple of 2pi/n.
inline bool opposite_points_grid(double start, double length, int n, int samples = 200) {
  if (n == 1) return false;
  const double h = length / (samples + 1);
  const double period = two_pi / n;
  for (int i = 1; i <= samples; ++i) {
    for (int j = i + 1; j <= samples; ++j) {
      const double d = (j - i) * h;
      const double k = std::round(d / period);
      if (k >= 1.0 && std::abs(d - k * period) <= 0.5 * h) return true;
    }
  }
  (void)start;
  return false;
}

/// Sum over perfect matchings of prod k / (z_i - z_j)^2, by explicit
/// enumeration of matchings as index lists.
inline Complex wick_pairings(double k, const std::vector<Complex>& z) {
  if (z.size() % 2) return 0.0;
  std::vector<int> free_idx(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) free_idx[i] = static_cast<int>(i);
  std::function<Complex(std::vector<int>)> rec = [&](std::vector<int> rest) -> Complex {
    if (rest.empty()) return 1.0;
    Complex sum = 0.0;
    const int a = rest[0];
    for (std::size_t j = 1; j < rest.size(); ++j) {
      std::vector<int> sub;
      for (std::size_t q = 1; q < rest.size(); ++q) {
        if (q != j) sub.push_back(rest[q]);
      }
      const Complex d = z[static_cast<std::size_t>(a)] - z[static_cast<std::size_t>(rest[j])];
      sum += k / (d * d) * rec(sub);
    }
    return sum;
  };
  return rec(free_idx);
}

/// The omega_n current recurrence written directly: peel J^{a_1}(z_1) with
/// the (n z^{n-1}) prefactors and the n-th-power denominators. f is dim^3.
inline Complex omega_n_recurrence(int n, double k, int dim, const std::vector<double>& f,
                                  std::vector<int> colors, std::vector<Complex> z) {
  if (colors.empty()) return 1.0;
  if (colors.size() == 1) return 0.0;
  const auto fabc = [&](int a, int b, int c) {
    return f[static_cast<std::size_t>((a * dim + b) * dim + c)];
  };
  const Complex i_unit(0.0, 1.0);
  const Complex z1 = z[0];
  const Complex pre1 = static_cast<double>(n) * std::pow(z1, n - 1);
  Complex total = 0.0;
  for (std::size_t j = 1; j < z.size(); ++j) {
    const Complex prej = static_cast<double>(n) * std::pow(z[j], n - 1);
    const Complex den = std::pow(z1, n) - std::pow(z[j], n);
    if (colors[0] == colors[j]) {
      std::vector<int> c2;
      std::vector<Complex> z2;
      for (std::size_t q = 1; q < z.size(); ++q) {
        if (q != j) {
          c2.push_back(colors[q]);
          z2.push_back(z[q]);
        }
      }
      total += pre1 * prej * k / (den * den) * omega_n_recurrence(n, k, dim, f, c2, z2);
    }
    for (int d = 0; d < dim; ++d) {
      const double fv = fabc(colors[0], colors[j], d);
      if (fv == 0.0) continue;
      std::vector<int> c2(colors.begin() + 1, colors.end());
      std::vector<Complex> z2(z.begin() + 1, z.end());
      c2[j - 1] = d;
      // The inserted J^d(z_j) carries its own prefactor inside the reduced
      // function, so the j-th prefactor does not appear here.
      total += pre1 * i_unit * fv / den * omega_n_recurrence(n, k, dim, f, c2, z2);
    }
  }
  return total;
}

}  // namespace oracles
