#include <catch_amalgamated.hpp>

#include <random>

#include "chiral_modular/moebius.hpp"
#include "oracles.hpp"

using namespace chiral_modular;
using Catch::Matchers::WithinAbs;

namespace {

MoebiusElement random_element(std::mt19937_64& rng) {
  const double r = oracles::uniform(rng, 0.0, 1.5);
  const double a = oracles::uniform(rng, 0.0, two_pi);
  const double b = oracles::uniform(rng, 0.0, two_pi);
  return MoebiusElement(std::polar(std::cosh(r), a), std::polar(std::sinh(r), b));
}

oracles::Mat2 as_mat(const MoebiusElement& g) { return oracles::su11(g.alpha(), g.beta()); }

double gap(Complex a, Complex b) { return std::abs(a - b); }

}  // namespace

TEST_CASE("MoebiusElement validates the SU(1,1) constraint", "[moebius]") {
  CHECK_NOTHROW(MoebiusElement(Complex(std::cosh(0.3), 0.0), Complex(std::sinh(0.3), 0.0)));
  CHECK_THROWS_AS(MoebiusElement(Complex(1.0, 0.0), Complex(1.0, 0.0)), InvalidArgument);
  CHECK_THROWS_AS(MoebiusElement::normalized(Complex(0.5, 0.0), Complex(1.0, 0.0)), InvalidArgument);
  const auto g = MoebiusElement::normalized(Complex(2.0, 0.0), Complex(0.0, 1.0));
  CHECK_THAT(std::norm(g.alpha()) - std::norm(g.beta()), WithinAbs(1.0, 1e-14));
}

TEST_CASE("compose and inverse agree with 2x2 matrix arithmetic", "[moebius][property]") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const auto g = random_element(rng);
    const auto h = random_element(rng);
    const auto gh = compose(g, h);
    const oracles::Mat2 m = as_mat(g) * as_mat(h);
    CHECK(gap(gh.alpha(), m.a) <= 1e-12 * std::abs(m.a));
    CHECK(gap(gh.beta(), m.b) <= 1e-12 * std::abs(m.a));
    CHECK(compose(g, inverse(g)).approx_equal(MoebiusElement::identity(), 1e-10));
    CHECK(compose(inverse(g), g).approx_equal(MoebiusElement::identity(), 1e-10));
  }
}

TEST_CASE("group axioms", "[moebius][property]") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    const auto f = random_element(rng);
    const auto g = random_element(rng);
    const auto h = random_element(rng);
    const double scale = std::abs(f.alpha()) * std::abs(g.alpha()) * std::abs(h.alpha());
    CHECK(compose(compose(f, g), h).approx_equal(compose(f, compose(g, h)), 1e-12 * scale));
    CHECK(compose(MoebiusElement::identity(), g).approx_equal(g, 1e-14 * std::abs(g.alpha())));
    CHECK(compose(g, MoebiusElement::identity()).approx_equal(g, 1e-14 * std::abs(g.alpha())));
    // action is a homomorphism
    const CirclePoint p(oracles::uniform(rng, 0.0, two_pi));
    CHECK(arc_distance(act(compose(g, h), p), act(g, act(h, p))) <= 1e-11);
  }
}

TEST_CASE("action preserves the circle", "[moebius][property]") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 10000; ++i) {
    const auto g = random_element(rng);
    const Complex z = std::polar(1.0, oracles::uniform(rng, 0.0, two_pi));
    const GeneralPoint w = act(g, GeneralPoint(z));
    REQUIRE_FALSE(w.is_infinity());
    CHECK_THAT(std::abs(w.value()), WithinAbs(1.0, 1e-12));
    CHECK(gap(w.value(), as_mat(g)(z)) <= 1e-12);
  }
}

TEST_CASE("action at infinity and at the pole", "[moebius]") {
  const auto g = dilation(0.4);
  const GeneralPoint at_inf = act(g, GeneralPoint::infinity());
  CHECK(gap(at_inf.value(), g.alpha() / std::conj(g.beta())) == 0.0);
  // beta = 1/2 makes the pole -2 alpha exactly representable
  const MoebiusElement h(std::sqrt(1.25), 0.5);
  CHECK(act(h, GeneralPoint(-2.0 * h.alpha())).is_infinity());
  CHECK(act(MoebiusElement::identity(), GeneralPoint::infinity()).is_infinity());
}

TEST_CASE("Dil(t) examples", "[moebius]") {
  CHECK(dilation(0.0).is_identity());
  const auto d = dilation(0.2);
  CHECK_THAT(d.alpha().real(), WithinAbs(std::cosh(0.2 * pi), 1e-15));
  CHECK_THAT(d.beta().real(), WithinAbs(std::sinh(0.2 * pi), 1e-15));
  // Dil(0.2) i = (cosh i + sinh) / (sinh i + cosh)
  const Complex c = std::cosh(0.2 * pi);
  const Complex s = std::sinh(0.2 * pi);
  const Complex i(0.0, 1.0);
  const Complex expected = (c * i + s) / (s * i + c);
  CHECK(gap(act(d, GeneralPoint(i)).value(), expected) <= 1e-15);
  CHECK(gap(act(d, CirclePoint(pi / 2)).z(), expected) <= 1e-15);

  // fixes +-1 and the semicircles
  CHECK(act(d, CirclePoint(0.0)).theta() == 0.0);
  CHECK_THAT(act(d, CirclePoint(pi)).theta(), WithinAbs(pi, 1e-15));
  std::mt19937_64 rng(14);
  for (int k = 0; k < 1000; ++k) {
    const double t = oracles::uniform(rng, -2.0, 2.0);
    const double th = oracles::uniform(rng, 1e-3, pi - 1e-3);
    CHECK(CircleInterval::upper_semicircle().contains(act(dilation(t), CirclePoint(th)), 0.0));
    CHECK(arc_distance(CirclePoint(dilation_angle(t, th)), act(dilation(t), CirclePoint(th))) <=
          1e-12);
  }
}

TEST_CASE("Dil is a one-parameter group", "[moebius][property]") {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 500; ++k) {
    const double s = oracles::uniform(rng, -1.0, 1.0);
    const double t = oracles::uniform(rng, -1.0, 1.0);
    CHECK(compose(dilation(s), dilation(t)).approx_equal(dilation(s + t), 1e-11 * std::cosh(pi * (std::abs(s) + std::abs(t)))));
  }
}

TEST_CASE("interval_adapter examples", "[moebius]") {
  const auto up = interval_adapter(CircleInterval::upper_semicircle());
  CHECK(up.approx_equal(MoebiusElement::identity(), 1e-12));

  // lower semicircle goes to the upper one by z -> -z
  const auto low = interval_adapter(CircleInterval::lower_semicircle());
  for (double th : {3.5, 4.0, 5.5}) {
    CHECK(gap(act(low, CirclePoint(th)).z(), -CirclePoint(th).z()) <= 1e-12);
  }

  std::mt19937_64 rng(16);
  for (int k = 0; k < 200; ++k) {
    const CircleInterval iv(CirclePoint(oracles::uniform(rng, 0.0, two_pi)),
                            oracles::uniform(rng, 0.05, two_pi - 0.05));
    const auto g = interval_adapter(iv);
    CHECK(gap(act(g, iv.start()).z(), Complex(1.0, 0.0)) <= 1e-10);
    CHECK(gap(act(g, iv.midpoint()).z(), Complex(0.0, 1.0)) <= 1e-10);
    CHECK(gap(act(g, iv.end()).z(), Complex(-1.0, 0.0)) <= 1e-10);
    const CirclePoint p = iv.at(oracles::uniform(rng, 0.0, iv.length()));
    const Complex oracle = oracles::three_point_map(iv.start().z(), iv.midpoint().z(), iv.end().z(),
                                                    1.0, Complex(0.0, 1.0), -1.0, p.z());
    CHECK(gap(act(g, p).z(), oracle) <= 1e-9);
  }
}

TEST_CASE("modular group of an interval does not depend on the adapter", "[moebius][property]") {
  // Any other adapter onto the upper semicircle is Dil(s) g_I; the
  // conjugated flows agree.
  std::mt19937_64 rng(17);
  for (int k = 0; k < 200; ++k) {
    const CircleInterval iv(CirclePoint(oracles::uniform(rng, 0.0, two_pi)),
                            oracles::uniform(rng, 0.1, two_pi - 0.1));
    const double s = oracles::uniform(rng, -1.0, 1.0);
    const double t = oracles::uniform(rng, -1.5, 1.5);
    const auto g = interval_adapter(iv);
    const auto g2 = compose(dilation(s), g);
    const auto flow2 = compose(inverse(g2), compose(dilation(t), g2));
    const CirclePoint p(oracles::uniform(rng, 0.0, two_pi));
    CHECK(arc_distance(act(interval_dilation(iv, t), p), act(flow2, p)) <= 1e-9);
  }
}

TEST_CASE("interval_dilation preserves I and its complement bijectively", "[moebius][property]") {
  std::mt19937_64 rng(18);
  for (int k = 0; k < 50; ++k) {
    const CircleInterval iv(CirclePoint(oracles::uniform(rng, 0.0, two_pi)),
                            oracles::uniform(rng, 0.1, two_pi - 0.1));
    const double t = oracles::uniform(rng, -1.0, 1.0);
    const auto flow = interval_dilation(iv, t);
    const auto back = interval_dilation(iv, -t);
    double last = -1.0;
    for (int j = 1; j < 1000; ++j) {
      const CirclePoint p = iv.at(iv.length() * j / 1000.0);
      const CirclePoint q = act(flow, p);
      CHECK(iv.contains(q, 0.0));
      // orientation preserving, hence injective on the arc
      const double u = iv.offset(q);
      CHECK(u > last);
      last = u;
      CHECK(arc_distance(act(back, q), p) <= 1e-9);
    }
    const CirclePoint outside = iv.at(iv.length() + 0.5 * (two_pi - iv.length()));
    CHECK_FALSE(iv.contains(act(flow, outside)));
  }
}

TEST_CASE("covering_transform examples", "[moebius]") {
  const CirclePoint p(0.4);
  CHECK(covering_transform(CoveringMap(3, MoebiusElement::identity()), p) == p);
  const auto g = dilation(0.3);
  CHECK(covering_transform(CoveringMap(1, g), p) == act(g, p));
  // root stays in the sector of p
  const CirclePoint q(pi + 0.2);
  const CirclePoint image = covering_transform(CoveringMap(2, g), q);
  CHECK(sector_index(image, 2) == 1);
  CHECK(gap(image.z() * image.z(), act(g, CirclePoint(2 * q.theta())).z()) <= 1e-12);
  CHECK_THROWS_AS(CoveringMap(0, g), InvalidArgument);
}

TEST_CASE("dilation_n examples", "[moebius]") {
  CHECK(dilation_n(2, 0.0, CirclePoint(0.7)) == CirclePoint(0.7));
  const CirclePoint z(pi / 4);
  const CirclePoint out = dilation_n(2, 0.5, z);
  // z^2 = i, Dil(0.5) i, then the root in the first quadrant
  const Complex w = act(dilation(0.5), GeneralPoint(Complex(0.0, 1.0))).value();
  CHECK(gap(out.z(), std::sqrt(w)) <= 1e-14);
  CHECK(dilation_n(1, 0.5, z) == CirclePoint(dilation_angle(0.5, pi / 4)));
  CHECK_THROWS_AS(dilation_n(0, 0.5, z), InvalidArgument);
}

TEST_CASE("dilation_n is a flow preserving sectors", "[moebius][property]") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 2000; ++k) {
    const int n = 1 + static_cast<int>(rng() % 6);
    const double s = oracles::uniform(rng, -1.0, 1.0);
    const double t = oracles::uniform(rng, -1.0, 1.0);
    const CirclePoint p(oracles::uniform(rng, 0.0, two_pi));
    const CirclePoint a = dilation_n(n, s, dilation_n(n, t, p));
    const CirclePoint b = dilation_n(n, s + t, p);
    CHECK(arc_distance(a, b) <= 1e-10);
    // each of the 2n arcs between fixpoints is invariant
    const auto arc = [n](CirclePoint x) {
      return static_cast<int>(std::floor(x.theta() * n / pi));
    };
    if (std::fmod(p.theta() * n, pi) > 1e-6 && std::fmod(p.theta() * n, pi) < pi - 1e-6) {
      CHECK(arc(dilation_n(n, t, p)) == arc(p));
    }
  }
}

TEST_CASE("dilation_n fixes exactly the 2n points with z^n = +-1", "[moebius]") {
  for (int n = 1; n <= 6; ++n) {
    const auto fix = fixpoints_of_dilation_n(n);
    REQUIRE(fix.size() == static_cast<std::size_t>(2 * n));
    for (double t : {-1.0, -0.3, 0.7, 2.0}) {
      for (const auto& p : fix) CHECK(arc_distance(dilation_n(n, t, p), p) <= 1e-10);
      // midpoints between fixpoints move
      for (int k = 0; k < 2 * n; ++k) {
        const CirclePoint mid((k + 0.5) * pi / n);
        CHECK(arc_distance(dilation_n(n, t, mid), mid) > 1e-3);
      }
    }
  }
  CHECK_THROWS_AS(fixpoints_of_dilation_n(0), InvalidArgument);
}

TEST_CASE("interval_dilation_n reduces to dilation_n on the upper semicircle", "[moebius]") {
  std::mt19937_64 rng(20);
  for (int k = 0; k < 1000; ++k) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const double t = oracles::uniform(rng, -1.0, 1.0);
    const CirclePoint p(oracles::uniform(rng, 0.0, two_pi));
    CHECK(arc_distance(interval_dilation_n(CircleInterval::upper_semicircle(), n, t, p),
                       dilation_n(n, t, p)) <= 1e-12);
  }
}

TEST_CASE("interval_dilation_n preserves every preimage arc", "[moebius][property]") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const CircleInterval iv(CirclePoint(oracles::uniform(rng, 0.0, two_pi)),
                            oracles::uniform(rng, 0.2, two_pi - 0.2));
    const double t = oracles::uniform(rng, -1.5, 1.5);
    for (const auto& arc : preimage_intervals(iv, n)) {
      const CirclePoint p = arc.at(oracles::uniform(rng, 0.0, arc.length()));
      const CirclePoint q = interval_dilation_n(iv, n, t, p);
      CHECK(arc.contains(q, 0.0));
      CHECK(arc_distance(interval_dilation_n(iv, n, -t, q), p) <= 1e-9);
    }
  }
}

TEST_CASE("ComplexDilation on the real axis and at tau + i", "[moebius]") {
  std::mt19937_64 rng(22);
  for (int k = 0; k < 200; ++k) {
    const double t = oracles::uniform(rng, -2.0, 2.0);
    const ComplexDilation d(Complex(t, 0.0));
    const auto g = dilation(t);
    const Complex z = std::polar(1.0, oracles::uniform(rng, 0.0, two_pi));
    CHECK(gap(complex_dilation_act(d, z).value(), act(g, GeneralPoint(z)).value()) <= 1e-12);
    // Dil(t + i) = -Dil(t) as a matrix, exactly
    const ComplexDilation di(Complex(t, 1.0));
    CHECK(di.a().imag() == 0.0);
    CHECK(di.b().imag() == 0.0);
    CHECK(di.a().real() == -std::cosh(pi * t));
    CHECK(di.b().real() == -std::sinh(pi * t));
  }
  const ComplexDilation half(Complex(0.0, 0.5));
  CHECK(half.a() == Complex(0.0, 0.0));
  CHECK(half.b() == Complex(0.0, 1.0));
  // tau = i/2: z -> i / (i z) = 1/z
  CHECK(gap(complex_dilation_act(half, Complex(0.3, 0.2)).value(), 1.0 / Complex(0.3, 0.2)) <=
        1e-15);
  CHECK(complex_dilation_act(half, Complex(0.0, 0.0)).is_infinity());
}

TEST_CASE("Moebius derivative against finite differences", "[moebius][property]") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 500; ++k) {
    const auto g = random_element(rng);
    const Complex z = std::polar(oracles::uniform(rng, 0.5, 1.5), oracles::uniform(rng, 0.0, two_pi));
    const double h = 1e-6;
    const auto f = [&](Complex x) { return as_mat(g)(x); };
    const Complex fd = (f(z + h) - f(z - h)) / (2.0 * h);
    const Complex d = derivative(g, z);
    CHECK(gap(d, fd) <= 1e-6 * std::max(1.0, std::abs(d)));
  }
  const MoebiusElement g(std::sqrt(1.25), 0.5);
  CHECK_THROWS_AS(derivative(g, -2.0 * g.alpha()), SingularPoint);
  CHECK_THROWS_AS(derivative(g, GeneralPoint::infinity()), SingularPoint);
}

TEST_CASE("covering derivatives against angle finite differences", "[moebius][property]") {
  // On the circle g(e^{i theta}) = e^{i phi(theta)} gives g' = e^{i phi} phi' / z.
  std::mt19937_64 rng(24);
  for (int k = 0; k < 500; ++k) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const double t = oracles::uniform(rng, -1.0, 1.0);
    const double th = oracles::uniform(rng, 0.0, two_pi);
    if (std::fmod(th * n, pi) < 1e-3 || std::fmod(th * n, pi) > pi - 1e-3) continue;
    const double h = 1e-7;
    const auto phi = [&](double x) { return dilation_n(n, t, CirclePoint(x)).theta(); };
    double dphi = phi(th + h) - phi(th - h);
    if (dphi > pi) dphi -= two_pi;
    if (dphi < -pi) dphi += two_pi;
    dphi /= 2.0 * h;
    const CirclePoint p(th);
    const Complex expected = std::polar(1.0, phi(th)) * dphi / p.z();
    const Complex d = dilation_n_derivative(n, t, p);
    CHECK(gap(d, expected) <= 1e-5 * std::max(1.0, std::abs(d)));

    const auto g = random_element(rng);
    const CoveringMap c(n, g);
    const auto psi = [&](double x) { return covering_transform(c, CirclePoint(x)).theta(); };
    if (sector_index(CirclePoint(th - h), n) != sector_index(CirclePoint(th + h), n)) continue;
    double dpsi = psi(th + h) - psi(th - h);
    // the root jumps by 2pi/n where g(z^n) crosses the branch cut
    if (std::abs(dpsi) > 0.1) continue;
    dpsi /= 2.0 * h;
    const Complex expected_c = std::polar(1.0, psi(th)) * dpsi / p.z();
    const Complex dc = derivative(c, p);
    CHECK(gap(dc, expected_c) <= 1e-4 * std::max(1.0, std::abs(dc)));
  }
}

TEST_CASE("ComplexDilation derivative", "[moebius]") {
  const ComplexDilation d(Complex(0.3, 0.25));
  const Complex z(0.2, 0.7);
  const double h = 1e-6;
  const auto f = [&](Complex x) { return complex_dilation_act(d, x).value(); };
  const Complex fd = (f(z + h) - f(z - h)) / (2.0 * h);
  CHECK(gap(derivative(d, z), fd) <= 1e-6 * std::abs(fd));
  const ComplexDilation half(Complex(0.0, 0.5));
  CHECK_THROWS_AS(derivative(half, Complex(0.0, 0.0)), SingularPoint);
}
