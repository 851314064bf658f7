#include <catch_amalgamated.hpp>

#include <random>

#include "chiral_modular/continuation.hpp"
#include "oracles.hpp"

using namespace chiral_modular;
using Catch::Matchers::WithinAbs;

TEST_CASE("ipow and cpow", "[continuation]") {
  const Complex z(0.3, -1.2);
  CHECK(ipow(z, 0) == Complex(1.0, 0.0));
  CHECK(ipow(z, 1) == z);
  CHECK(std::abs(ipow(z, 5) - z * z * z * z * z) <= 1e-14);
  CHECK(std::abs(ipow(z, -3) - 1.0 / (z * z * z)) <= 1e-14);
  CHECK(cpow(z, 2.0) == ipow(z, 2));
  CHECK(std::abs(cpow(Complex(-1.0, 0.0), 0.5) - Complex(0.0, 1.0)) <= 1e-15);
  // principal branch just below the negative axis
  CHECK(std::abs(cpow(Complex(-1.0, -0.0), 0.5) - Complex(0.0, -1.0)) <= 1e-15);
  CHECK(cpow(Complex(0.0, 0.0), 0.5) == Complex(0.0, 0.0));
  CHECK(is_integer(3.0));
  CHECK_FALSE(is_integer(0.5));
  CHECK_FALSE(is_integer(std::numeric_limits<double>::infinity()));
}

TEST_CASE("track_logs follows a full winding", "[continuation]") {
  const auto loop = [](double s) {
    return PathSample{{std::polar(2.0, oracles::two_pi * s)}};
  };
  const auto logs = track_logs(loop, ContinuationOptions{}, 0.0);
  REQUIRE(logs.log_end.size() == 1);
  CHECK_THAT(logs.log_end[0].imag() - logs.log_start[0].imag(), WithinAbs(oracles::two_pi, 1e-12));
  CHECK_THAT(logs.log_end[0].real(), WithinAbs(std::log(2.0), 1e-14));
  // z^(1/2) around the loop flips sign
  CHECK(std::abs(continued_product(logs, {0.5}) + std::sqrt(2.0)) <= 1e-12);
  CHECK(std::abs(principal_product(logs, {0.5}) - std::sqrt(2.0)) <= 1e-12);
}

TEST_CASE("track_logs refines fast turns", "[continuation]") {
  // ten windings with only four coarse steps
  const auto loop = [](double s) {
    return PathSample{{std::polar(1.0, 10.0 * oracles::two_pi * s)}};
  };
  ContinuationOptions opt;
  opt.steps = 4;
  const auto logs = track_logs(loop, opt, 0.0);
  CHECK_THAT(logs.log_end[0].imag(), WithinAbs(10.0 * oracles::two_pi, 1e-10));
  CHECK(logs.evaluations > 5);
}

TEST_CASE("continuation from i to -i through -1", "[continuation]") {
  // z(s) = exp(i pi (1/2 + s)); z^(1/2) ends at exp(i 3 pi / 4), not at the
  // principal root of -i.
  const auto path = [](double s) {
    return PathSample{{std::polar(1.0, oracles::pi * (0.5 + s))}};
  };
  const auto logs = track_logs(path, ContinuationOptions{}, 0.0);
  const Complex expected = std::polar(1.0, 3.0 * oracles::pi / 4.0);
  CHECK(std::abs(continued_product(logs, {0.5}) - expected) <= 1e-13);
  CHECK(std::abs(cpow(Complex(0.0, -1.0), 0.5) - expected) > 1.0);
}

TEST_CASE("track_logs reports singular paths", "[continuation]") {
  const auto through_zero = [](double s) { return PathSample{{Complex(s - 0.5, 0.0)}}; };
  CHECK_THROWS_AS(track_logs(through_zero, ContinuationOptions{}, 0.0), PathSingularity);

  const auto near = [](double s) {
    return PathSample{{Complex(1.0, 0.0)}, std::abs(s - 0.25)};
  };
  try {
    (void)track_logs(near, ContinuationOptions{}, 1e-9);
    FAIL("expected PathSingularity");
  } catch (const PathSingularity& e) {
    CHECK_THAT(e.strip_parameter, WithinAbs(0.25, 1e-12));
  }

  ContinuationOptions opt;
  opt.steps = 0;
  CHECK_THROWS_AS(track_logs(through_zero, opt, 0.0), InvalidArgument);
}

TEST_CASE("continued products are independent of the step count", "[continuation][property]") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 50; ++k) {
    const double r = oracles::uniform(rng, 0.2, 0.9);
    const double p = oracles::uniform(rng, -2.0, 2.0);
    const auto path = [r](double s) {
      const Complex z = std::polar(1.0, oracles::two_pi * s);
      return PathSample{{z - r, z + r}};
    };
    ContinuationOptions coarse;
    coarse.steps = 50;
    ContinuationOptions fine;
    fine.steps = 400;
    const Complex a = continued_product(track_logs(path, coarse, 0.0), {p, -p});
    const Complex b = continued_product(track_logs(path, fine, 0.0), {p, -p});
    CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
    // both bases wind once, so the ratio returns to its start
    CHECK(std::abs(a - std::pow((1.0 - r) / (1.0 + r), p)) <= 1e-12 * std::abs(a));
  }
}
