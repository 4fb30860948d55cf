#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "tailwave/analysis.hpp"

using namespace tailwave;

namespace {

Series synth(double r_obs, double t_lo, double t_hi, double dt,
             const std::function<double(double)>& fn) {
  Series s;
  s.r_obs = r_obs;
  for (double t = t_lo; t <= t_hi + 1e-12; t += dt) {
    s.t.push_back(t);
    s.u.push_back(fn(t));
  }
  return s;
}

}  // namespace

TEST_CASE("local exponent is exact on pure power laws") {
  for (double sigma : {-1.0, -2.0, -3.0, -4.0}) {
    for (double c : {0.7, -1.3}) {
      const Series s = synth(0.0, 5.0, 100.0, 0.02,
                             [&](double t) { return c * std::pow(t, sigma); });
      const ExponentTrace trace = local_exponent(s, Window{10.0, 90.0});
      CHECK(std::abs(trace.plateau - sigma) < 1e-3);
    }
  }
}

TEST_CASE("local exponent on closed-form tails") {
  const Series leading = synth(1.0, 5.0, 110.0, 0.02,
                               [](double t) { return 1.0 / (t * t - 1.0); });
  CHECK(std::abs(local_exponent(leading, Window{20.0, 100.0}).plateau + 2.0) < 0.01);

  const Series sub = synth(1.0, 5.0, 110.0, 0.02, [](double t) {
    const double s = t * t - 1.0;
    return t / (s * s);
  });
  CHECK(std::abs(local_exponent(sub, Window{20.0, 100.0}).plateau + 3.0) < 0.02);
}

TEST_CASE("sign changes inside the window are rejected") {
  const Series s = synth(0.0, 5.0, 100.0, 0.05,
                         [](double t) { return std::sin(t) / (t * t); });
  CHECK_THROWS_AS(local_exponent(s, Window{10.0, 90.0}), FitError);
}

TEST_CASE("tail fit recovers exact basis coefficients") {
  TailExpansion exact;
  exact.p = 3;
  exact.A = {1.0, 2.0, 3.0};
  const Series s = synth(0.5, 8.0, 100.0, 0.05,
                         [&](double t) { return tail_eval(exact, t, 0.5); });
  const FitReport fit = fit_tail(s, 3, 2, Window{10.0, 100.0});
  CHECK(fit.values[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(fit.values[1] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(fit.values[2] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.residual_norm < 1e-12);
  CHECK(!fit.ill_conditioned);
}

TEST_CASE("tail fit of the attractor finds A0 = sqrt(2)/b") {
  const AttractorParams params{1.0, 1.0};
  const Series s = synth(0.0, 900.0, 10000.0, 5.0,
                         [&](double t) { return attractor_eval(params, t, 0.0); });
  const FitReport fit = fit_tail(s, 3, 2, Window{1000.0, 10000.0});
  CHECK(fit.values[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("degenerate window flags ill conditioning") {
  const Series s = synth(0.0, 1000.0, 1000.05, 0.004,
                         [](double t) { return 1.0 / (t * t); });
  const FitReport fit = fit_tail(s, 3, 2, Window{1000.0, 1000.05});
  CHECK(fit.ill_conditioned);
}

TEST_CASE("attractor fit round-trips its own samples") {
  const AttractorParams truth{0.7, 1.3};
  const Series s = synth(1.0, 5.0, 200.0, 0.1,
                         [&](double t) { return attractor_eval(truth, t, 1.0); });
  const FitReport fit = fit_attractor(s, Window{6.0, 200.0}, AttractorParams{0.0, 1.0});
  REQUIRE(fit.converged);
  CHECK(fit.values[0] == doctest::Approx(0.7).epsilon(1e-8));
  CHECK(fit.values[1] == doctest::Approx(1.3).epsilon(1e-8));
}

TEST_CASE("attractor fit bias from a perturbation shrinks for later windows") {
  const AttractorParams truth{0.5, 0.9};
  const auto series_fn = [&](double t) {
    const double s = t * t - 1.0;
    return attractor_eval(truth, t, 1.0) + 0.05 * (3.0 * t * t + 1.0) / (s * s * s);
  };
  const Series s = synth(1.0, 5.0, 400.0, 0.1, series_fn);
  const FitReport early = fit_attractor(s, Window{6.0, 60.0}, truth);
  const FitReport late = fit_attractor(s, Window{60.0, 400.0}, truth);
  const double err_early = std::hypot(early.values[0] - truth.a, early.values[1] - truth.b);
  const double err_late = std::hypot(late.values[0] - truth.a, late.values[1] - truth.b);
  CHECK(err_late < err_early);
  CHECK(err_late < 2e-3);
}

TEST_CASE("approach rate: degenerate on itself, -4 on the third-order term") {
  const AttractorParams params{1.0, 1.0};
  const Series self = synth(1.0, 10.0, 300.0, 0.1,
                            [&](double t) { return attractor_eval(params, t, 1.0); });
  CHECK(approach_rate(self, params, Window{12.0, 280.0}).degenerate);

  const Series perturbed = synth(1.0, 10.0, 300.0, 0.1, [&](double t) {
    const double s = t * t - 1.0;
    return attractor_eval(params, t, 1.0) + (3.0 * t * t + 1.0) / (s * s * s);
  });
  const ExponentTrace rate = approach_rate(perturbed, params, Window{12.0, 280.0});
  CHECK(!rate.degenerate);
  CHECK(std::abs(rate.plateau + 4.0) < 0.05);
}

TEST_CASE("suboptimal attractor parameters plateau shallower") {
  // Series with exactly matched (A0, A1) content for params and an extra
  // third-order term; doubling b breaks the leading match.
  const AttractorParams params{0.3, 1.1};
  const Series s = synth(1.0, 10.0, 500.0, 0.1, [&](double t) {
    const double sq = t * t - 1.0;
    return attractor_eval(params, t, 1.0) + 0.5 * (3.0 * t * t + 1.0) / (sq * sq * sq);
  });
  const Window window{15.0, 480.0};
  const ExponentTrace good = approach_rate(s, params, window);
  const ExponentTrace bad = approach_rate(s, AttractorParams{params.a, 2.0 * params.b}, window);
  CHECK(std::abs(good.plateau + 4.0) < 0.05);
  CHECK(bad.plateau > -2.2);
  CHECK(bad.plateau > good.plateau + 1.0);
}

TEST_CASE("epsilon scaling measures the cubic power and linearity") {
  TailExpansion shape;
  shape.p = 3;
  shape.A = {1.0, 0.5, 0.2};
  const auto tail_at = [&](double amp) {
    return synth(1.0, 10.0, 100.0, 0.05, [&](double t) {
      return amp * tail_eval(shape, t, 1.0);
    });
  };
  const Window window{12.0, 95.0};
  const EpsilonScalingReport cubic =
      epsilon_scaling(tail_at(1e-3), tail_at(8e-3), 2.0, window);
  CHECK(cubic.power == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(!cubic.below_noise);

  const EpsilonScalingReport linear =
      epsilon_scaling(tail_at(0.1), tail_at(0.2), 2.0, window);
  CHECK(linear.power == doctest::Approx(1.0).epsilon(1e-12));

  const EpsilonScalingReport quiet =
      epsilon_scaling(tail_at(1e-16), tail_at(8e-16), 2.0, window);
  CHECK(quiet.below_noise);
}

TEST_CASE("scaled remainder: truncation order and epsilon trend") {
  TailExpansion pred;
  pred.p = 3;
  pred.B = {0.8, -0.3, 0.1};

  // Synthetic w with the exact first two scaled terms plus a known
  // second-order contamination; deviations must shrink with n and epsilon.
  const auto w_series = [&](double eps) {
    const double b_scale = 5.0;  // p + a(p-1) at a = 1
    return synth(1.0, 2.0, 400.0, 0.2, [&](double t) {
      const double ts = eps * t;
      const double rs = eps * 1.0;
      if (ts <= rs) return 0.0;
      double w_scaled = wk_eval(3, 0, pred.B[0], ts, rs) +
                        eps * wk_eval(3, 1, pred.B[1], ts, rs) +
                        eps * eps * wk_eval(3, 2, pred.B[2], ts, rs);
      return std::pow(eps, b_scale) * w_scaled;
    });
  };

  std::vector<double> deviations;
  for (double eps : {0.2, 0.1, 0.05}) {
    const ScaledRemainderReport n1 =
        scaled_remainder(w_series(eps), eps, 1.0, 1, pred);
    const ScaledRemainderReport n0 =
        scaled_remainder(w_series(eps), eps, 1.0, 0, pred);
    REQUIRE(!n1.excluded);
    CHECK(n1.max_deviation <= n0.max_deviation);
    deviations.push_back(n1.max_deviation);
  }
  CHECK(deviations[0] > deviations[1]);
  CHECK(deviations[1] > deviations[2]);

  // Observers whose samples never reach the valid scaled region are excluded.
  const ScaledRemainderReport excluded =
      scaled_remainder(synth(1.0, 2.0, 5.0, 0.5, [](double) { return 0.0; }),
                       0.05, 1.0, 1, pred);
  CHECK(excluded.excluded);
}

TEST_CASE("window construction enforces the late-time rule") {
  const Window w = make_window(1.0, 1.0, 100.0);
  CHECK(w.t_lo == 10.0);
  CHECK(w.t_hi == 100.0);
  CHECK_THROWS_AS(make_window(1.0, 1.0, 100.0, 2.0), ConfigError);
  CHECK_THROWS_AS(make_window(1.0, 30.0, 100.0, 5.0), ConfigError);
}
