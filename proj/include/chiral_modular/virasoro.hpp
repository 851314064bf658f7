#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "chiral_modular/errors.hpp"

namespace chiral_modular::virasoro {

using Rational = boost::multiprecision::cpp_rational;

/// Central term a * c + b, with the central charge c kept symbolic.
struct CentralTerm {
  Rational c_coeff{0};
  Rational constant{0};

  bool is_zero() const { return c_coeff == 0 && constant == 0; }

  CentralTerm& operator+=(const CentralTerm& o) {
    c_coeff += o.c_coeff;
    constant += o.constant;
    return *this;
  }
  friend CentralTerm operator*(const Rational& s, CentralTerm t) {
    t.c_coeff *= s;
    t.constant *= s;
    return t;
  }
  friend bool operator==(const CentralTerm&, const CentralTerm&) = default;
};

/// Finite combination sum_k x_k L_k + (a c + b) * 1.
class Element {
 public:
  Element() = default;

  /// The single mode coeff * L_k.
  static Element mode(std::int64_t k, const Rational& coeff = 1) {
    Element e;
    e.add_mode(k, coeff);
    return e;
  }

  /// (a c + b) * 1.
  static Element central(const Rational& c_coeff, const Rational& constant = 0) {
    Element e;
    e.central_ = CentralTerm{c_coeff, constant};
    return e;
  }

  void add_mode(std::int64_t k, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = modes_.try_emplace(k, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) modes_.erase(it);
    }
  }

  const std::map<std::int64_t, Rational>& modes() const { return modes_; }
  const CentralTerm& central_term() const { return central_; }

  Rational coefficient(std::int64_t k) const {
    const auto it = modes_.find(k);
    return it == modes_.end() ? Rational{0} : it->second;
  }

  bool is_zero() const { return modes_.empty() && central_.is_zero(); }

  Element& operator+=(const Element& o) {
    for (const auto& [k, x] : o.modes_) add_mode(k, x);
    central_ += o.central_;
    return *this;
  }
  Element& operator-=(const Element& o) { return *this += Rational{-1} * o; }

  friend Element operator+(Element a, const Element& b) { return a += b; }
  friend Element operator-(Element a, const Element& b) { return a -= b; }
  friend Element operator*(const Rational& s, const Element& e) {
    Element out;
    if (s == 0) return out;
    for (const auto& [k, x] : e.modes_) out.modes_.emplace(k, s * x);
    out.central_ = s * e.central_;
    return out;
  }

  friend bool operator==(const Element&, const Element&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Element& e) {
    bool first = true;
    for (const auto& [k, x] : e.modes_) {
      os << (first ? "" : " + ") << "(" << x << ")L[" << k << "]";
      first = false;
    }
    if (!e.central_.is_zero()) {
      os << (first ? "" : " + ") << "(" << e.central_.c_coeff << ")c + (" << e.central_.constant
         << ")";
      first = false;
    }
    if (first) os << "0";
    return os;
  }

  std::string str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

 private:
  std::map<std::int64_t, Rational> modes_;
  CentralTerm central_;
};

/// [L_n, L_m] = (n - m) L_{n+m} + c/12 (n^3 - n) delta_{n+m,0}, extended
/// bilinearly; the central term commutes with everything.
inline Element commutator(const Element& x, const Element& y) {
  Element out;
  for (const auto& [n, xn] : x.modes()) {
    for (const auto& [m, ym] : y.modes()) {
      const Rational w = xn * ym;
      out.add_mode(n + m, w * Rational(n - m));
      if (n + m == 0) {
        out += Element::central(w * Rational(n * n * n - n, 12));
      }
    }
  }
  return out;
}

/// Rescaled generators (L~_{-n}, L~_0, L~_{+n}):
/// L~_{+-n} = L_{+-n} / n, L~_0 = L_0 / n + c (n^2 - 1) / (24 n).
struct TildeGenerators {
  Element minus;
  Element zero;
  Element plus;
};

inline TildeGenerators tilde_generators(std::int64_t n) {
  if (n < 1) throw InvalidArgument("tilde_generators: n must be positive");
  const Rational inv(1, n);
  TildeGenerators g;
  g.minus = Element::mode(-n, inv);
  g.plus = Element::mode(n, inv);
  g.zero = Element::mode(0, inv) + Element::central(Rational(n * n - 1, 24 * n));
  return g;
}

/// Outcome of the sl(2) closure test. On failure `witness` holds the first
/// nonzero difference (lhs - rhs) and `relation` names it.
struct Sl2Check {
  bool ok = true;
  std::string relation;
  Element witness;
};

/// Checks [L~_+, L~_-] = 2 L~_0 and [L~_{+-}, L~_0] = +-L~_{+-} exactly.
inline Sl2Check check_sl2(const TildeGenerators& g) {
  const struct {
    const char* name;
    Element diff;
  } relations[] = {
      {"[L+, L-] - 2 L0", commutator(g.plus, g.minus) - Rational{2} * g.zero},
      {"[L+, L0] - L+", commutator(g.plus, g.zero) - g.plus},
      {"[L-, L0] + L-", commutator(g.minus, g.zero) + g.minus},
  };
  for (const auto& r : relations) {
    if (!r.diff.is_zero()) return Sl2Check{false, r.name, r.diff};
  }
  return {};
}

inline Sl2Check check_sl2(std::int64_t n) { return check_sl2(tilde_generators(n)); }

}  // namespace chiral_modular::virasoro
