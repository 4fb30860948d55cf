#include "tailwave/asymptotics.hpp"

#include <cmath>

#include "tailwave/errors.hpp"

namespace tailwave {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

double ipow(double x, int n) {
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= x;
  return result;
}

}  // namespace

double moment_of(const std::function<double(double)>& h, double support_radius,
                 int q, int i, double tol) {
  if (q < 1) throw ConfigError("moment power q must be >= 1");
  if (i < 0) throw ConfigError("moment index i must be >= 0");
  const double R = support_radius;
  return integrate_compact(
      [&](double x) { return ipow(x, i) * ipow(h(x), q); }, -R, R, tol);
}

double moment(const HFunction& h, int q, int i, double tol) {
  return moment_of([&h](double x) { return h(x); }, h.support_radius(), q, i, tol);
}

MomentTable build_moments(const HFunction& h, int q, int n, double tol) {
  MomentTable table;
  table.q = q;
  table.entries.reserve(n + 1);
  for (int i = 0; i <= n; ++i) table.entries.push_back(moment(h, q, i, tol));
  return table;
}

double b_coefficient(int p, int k, double C) {
  if (p < 3) throw ConfigError("b_coefficient requires p >= 3");
  if (k < 0) throw ConfigError("b_coefficient requires k >= 0");
  return std::ldexp(C, p + k - 3) / (p + k - 2);
}

double wk_eval(int p, int k, double B, double t, double r) {
  if (r < 0.0) throw DomainError("wk_eval: negative radius");
  const int m = p + k - 2;
  if (t <= r) {
    if (t == r && t > 0.0) throw DomainError("wk_eval: evaluation on the light cone t = r");
    return 0.0;
  }
  // Even continuation through r = 0: the bracket is odd in r, so the quotient
  // has the finite limit 2 m B / t^{m+1}. Switch before cancellation bites.
  if (r < 1e-7 * t) {
    return 2.0 * m * B / ipow(t, m + 1);
  }
  const double lower = 1.0 / ipow(t - r, m);
  const double upper = 1.0 / ipow(t + r, m);
  return B / r * (lower - upper);
}

double tail_eval(const TailExpansion& exp, double t, double r) {
  if (!(t > r) || r < 0.0) throw DomainError("tail_eval requires t > r >= 0");
  const double s = t * t - r * r;
  double value = 0.0;
  const int terms = static_cast<int>(exp.A.size());
  if (terms > 0) value += exp.A[0] / s;
  if (terms > 1) value += exp.A[1] * t / (s * s);
  if (terms > 2) value += exp.A[2] * (3.0 * t * t + r * r) / (s * s * s);
  return value;
}

double attractor_eval(const AttractorParams& params, double t, double r) {
  const double tau = t + params.a;
  const double denom = tau + params.b * (tau * tau - r * r);
  if (!(denom > 0.0)) {
    throw DomainError("attractor_eval: nonpositive denominator");
  }
  return kSqrt2 / denom;
}

AttractorExpansion attractor_expand(const AttractorParams& params, int /*n*/) {
  const double a = params.a;
  const double b = params.b;
  if (b == 0.0) throw DomainError("attractor_expand requires b != 0");
  AttractorExpansion e;
  e.A0 = kSqrt2 / b;
  e.A1 = -kSqrt2 * (1.0 + 2.0 * a * b) / (b * b);
  e.c_basis2 = 0.0;
  const double q = 2.0 * a * b - 1.0;
  e.c_t2 = kSqrt2 * q * q / (b * b * b);
  return e;
}

AttractorParams match_attractor(double A0, double A1) {
  if (A0 == 0.0) {
    throw NonGenericError("match_attractor: A0 = 0, non-generic data decays faster "
                          "than the attractor family");
  }
  if (A0 < 0.0) {
    throw DomainError("match_attractor: A0 < 0 gives b < 0 and the attractor "
                      "denominator loses positivity at late times");
  }
  AttractorParams params;
  params.b = kSqrt2 / A0;
  params.a = -kSqrt2 * A0 / 4.0 - A1 / (2.0 * A0);
  return params;
}

TailExpansion predict_tail(const RadialProfile& f, const RadialProfile& g, int p,
                           double epsilon, int n, double tol) {
  if (p < 3) throw ConfigError("predict_tail requires integer p >= 3");
  if (n < 0) throw ConfigError("predict_tail requires n >= 0");
  if (!(epsilon > 0.0)) throw ConfigError("predict_tail requires epsilon > 0");

  const HFunction h = build_h(f, g);
  TailExpansion exp;
  exp.p = p;
  exp.epsilon = epsilon;
  exp.n = n;
  MomentTable table = build_moments(h, p, n, tol);
  exp.C = table.entries;
  exp.B.reserve(n + 1);
  for (int k = 0; k <= n; ++k) exp.B.push_back(b_coefficient(p, k, exp.C[k]));

  if (p == 3) {
    // Bracket-expansion factors onto the {1/s, t/s^2, (3t^2+r^2)/s^3} basis.
    static constexpr double kFactors[3] = {2.0, 4.0, 2.0};
    const double eps_p = ipow(epsilon, p);
    const int terms = std::min(n, 2) + 1;
    exp.A.reserve(terms);
    for (int k = 0; k < terms; ++k) exp.A.push_back(kFactors[k] * eps_p * exp.B[k]);
  }

  // Non-generic when the leading moment vanishes relative to the natural
  // scale ||h||_inf^p * 2R of the integral.
  double h_scale = 0.0;
  const double R = h.support_radius();
  for (int i = 0; i <= 64; ++i) {
    h_scale = std::max(h_scale, std::abs(h(-R + (2.0 * R * i) / 64.0)));
  }
  const double c0_scale = ipow(h_scale, p) * 2.0 * R;
  exp.non_generic = std::abs(exp.C[0]) <= 1e-9 * std::max(c0_scale, 1e-300);
  return exp;
}

ScalingParams scaling_params(int p, double a_scale) {
  ScalingParams s;
  s.p = p;
  s.a_scale = a_scale;
  s.b_scale = p + a_scale * (p - 1);
  s.lambda0 = (p - 1) * (1.0 - a_scale) +
              a_scale * ((p - 1) * (p - 1) - 2.0) / p;
  s.valid = a_scale > 0.0 && a_scale < static_cast<double>(p) * (p - 1) / (p + 1);
  return s;
}

double attractor_discrete_residual(const AttractorParams& params, double h) {
  if (!(h > 0.0)) throw ConfigError("attractor_discrete_residual requires h > 0");
  // v = r u satisfies v_tt = v_rr + v^3/r^2 with v odd in r. The residual of
  // the 5-point stencils on the exact attractor isolates scheme truncation.
  const auto v = [&](double t, double r) {
    const double sign = r < 0.0 ? -1.0 : 1.0;
    const double ra = std::abs(r);
    return sign * ra * attractor_eval(params, t, ra);
  };
  const double inv12h2 = 1.0 / (12.0 * h * h);
  double max_residual = 0.0;
  for (double t = 1.0; t <= 5.0 + 1e-12; t += h) {
    const double r_hi = t - 0.2;
    for (double r = h; r <= r_hi + 1e-12; r += h) {
      const double vc = v(t, r);
      const double d2t = (-v(t - 2 * h, r) + 16.0 * v(t - h, r) - 30.0 * vc +
                          16.0 * v(t + h, r) - v(t + 2 * h, r)) * inv12h2;
      const double d2r = (-v(t, r - 2 * h) + 16.0 * v(t, r - h) - 30.0 * vc +
                          16.0 * v(t, r + h) - v(t, r + 2 * h)) * inv12h2;
      const double nonlinear = vc * vc * vc / (r * r);
      const double residual = d2t - d2r - nonlinear;
      max_residual = std::max(max_residual, std::abs(residual));
    }
  }
  return max_residual;
}

}  // namespace tailwave
