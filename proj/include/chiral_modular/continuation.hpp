#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "chiral_modular/circle.hpp"
#include "chiral_modular/errors.hpp"

namespace chiral_modular {

/// True when x is an integer (exactly, as a double).
inline bool is_integer(double x) { return std::isfinite(x) && x == std::round(x); }

/// z^k by repeated squaring; negative k inverts.
inline Complex ipow(Complex z, long long k) {
  if (k < 0) return 1.0 / ipow(z, -k);
  Complex result(1.0, 0.0);
  while (k > 0) {
    if (k & 1) result *= z;
    z *= z;
    k >>= 1;
  }
  return result;
}

/// z^p: exact integer power when p is an integer, principal branch otherwise.
inline Complex cpow(Complex z, double p) {
  if (is_integer(p)) return ipow(z, static_cast<long long>(p));
  if (z == Complex(0.0, 0.0)) return p > 0.0 ? Complex(0.0, 0.0) : Complex(HUGE_VAL, 0.0);
  return std::exp(p * std::log(z));
}

/// Parameters of a continuation along s in [0, 1].
struct ContinuationOptions {
  int steps = 200;
  /// A step is bisected while any tracked base turns by more than this angle.
  double max_turn = 0.25;
  int max_depth = 48;
};

/// A sample of the path: the bases whose arguments are tracked and the
/// distance to the nearest singularity the caller monitors (infinity if none).
struct PathSample {
  std::vector<Complex> bases;
  double clearance = std::numeric_limits<double>::infinity();
};

/// Continuously tracked logarithms of a family of nonvanishing bases.
/// `log_start[k]` is the principal log at s = 0, `log_end[k]` its
/// continuation to s = 1 (real part log|b|, imaginary part the tracked arg).
struct TrackedLogs {
  std::vector<Complex> log_start;
  std::vector<Complex> log_end;
  std::size_t evaluations = 0;
  double min_clearance = std::numeric_limits<double>::infinity();
};

/// Follows arg(b_k(s)) from s = 0 to s = 1 in `steps` uniform steps, bisecting
/// any step where a base turns faster than `max_turn`. A clearance below
/// `singular_threshold` raises PathSingularity at the offending s.
template <class Path>
TrackedLogs track_logs(Path&& path, const ContinuationOptions& opt, double singular_threshold) {
  if (opt.steps < 1) throw InvalidArgument("continuation needs at least one step");
  TrackedLogs out;
  const auto sample = [&](double s) {
    PathSample p = path(s);
    ++out.evaluations;
    if (p.clearance < out.min_clearance) out.min_clearance = p.clearance;
    if (p.clearance < singular_threshold) {
      throw PathSingularity("continuation path meets a singularity at s = " + std::to_string(s), s);
    }
    for (const Complex& b : p.bases) {
      if (b == Complex(0.0, 0.0) || !std::isfinite(std::abs(b))) {
        throw PathSingularity("tracked base vanishes or diverges at s = " + std::to_string(s), s);
      }
    }
    return p;
  };

  PathSample first = sample(0.0);
  const std::size_t nb = first.bases.size();
  std::vector<double> args(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    out.log_start.push_back(std::log(first.bases[k]));
    args[k] = std::arg(first.bases[k]);
  }

  std::function<void(double, double, const PathSample&, PathSample&, int)> advance;
  advance = [&](double s0, double s1, const PathSample& p0, PathSample& p1, int depth) {
    double worst = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      worst = std::max(worst, std::abs(std::arg(p1.bases[k] / p0.bases[k])));
    }
    if (worst <= opt.max_turn) {
      for (std::size_t k = 0; k < nb; ++k) args[k] += std::arg(p1.bases[k] / p0.bases[k]);
      return;
    }
    if (depth >= opt.max_depth) {
      throw PathSingularity("continuation cannot resolve a branch near s = " + std::to_string(s0),
                            s0);
    }
    const double mid = 0.5 * (s0 + s1);
    PathSample pm = sample(mid);
    advance(s0, mid, p0, pm, depth + 1);
    advance(mid, s1, pm, p1, depth + 1);
  };

  PathSample prev = first;
  for (int i = 1; i <= opt.steps; ++i) {
    const double s = static_cast<double>(i) / opt.steps;
    PathSample cur = sample(s);
    if (cur.bases.size() != nb) throw InvalidArgument("path changed its number of bases");
    advance(static_cast<double>(i - 1) / opt.steps, s, prev, cur, 0);
    prev = std::move(cur);
  }
  for (std::size_t k = 0; k < nb; ++k) {
    out.log_end.emplace_back(std::log(std::abs(prev.bases[k])), args[k]);
  }
  return out;
}

/// exp(sum_k p_k log b_k) at the end of the path.
inline Complex continued_product(const TrackedLogs& logs, const std::vector<double>& exponents) {
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k < exponents.size(); ++k) acc += exponents[k] * logs.log_end[k];
  return std::exp(acc);
}

/// Same product at the start of the path (principal branches).
inline Complex principal_product(const TrackedLogs& logs, const std::vector<double>& exponents) {
  Complex acc(0.0, 0.0);
  for (std::size_t k = 0; k < exponents.size(); ++k) acc += exponents[k] * logs.log_start[k];
  return std::exp(acc);
}

}  // namespace chiral_modular
