#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tailwave/quadrature.hpp"
#include "test_oracles.hpp"

using tailwave::integrate_compact;

TEST_CASE("polynomial integrals hit closed forms") {
  CHECK(integrate_compact([](double x) { return x * x; }, -1.0, 1.0, 1e-12) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(std::abs(integrate_compact([](double x) { return x; }, -1.0, 1.0, 1e-12)) <
        1e-12);
  const double quartic = integrate_compact(
      [](double x) { return std::pow(1.0 - x * x, 4); }, -1.0, 1.0, 1e-12);
  CHECK(quartic == doctest::Approx(256.0 / 315.0).epsilon(1e-12));
  CHECK(256.0 / 315.0 == doctest::Approx(oracles::bump_integral(4)).epsilon(1e-15));
}

TEST_CASE("tolerance is honored on a smooth transcendental integrand") {
  const double value = integrate_compact([](double x) { return std::exp(x); },
                                         0.0, 1.0, 1e-12);
  CHECK(std::abs(value - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("reversed limits flip the sign") {
  const double forward = integrate_compact([](double x) { return x * x; }, 0.0, 2.0, 1e-12);
  const double backward = integrate_compact([](double x) { return x * x; }, 2.0, 0.0, 1e-12);
  CHECK(forward == doctest::Approx(-backward).epsilon(1e-14));
}

TEST_CASE("non-smooth integrand exhausts the refinement depth") {
  const auto step = [](double x) { return x > 0.31830988618 ? 1.0 : 0.0; };
  CHECK_THROWS_AS(integrate_compact(step, -1.0, 1.0, 1e-13, 18),
                  tailwave::QuadratureError);
}

TEST_CASE("invalid tolerance is rejected") {
  CHECK_THROWS_AS(integrate_compact([](double x) { return x; }, 0.0, 1.0, 0.0),
                  tailwave::ConfigError);
}
