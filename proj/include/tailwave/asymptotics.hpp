#pragma once

#include <functional>
#include <vector>

#include "tailwave/profiles.hpp"

namespace tailwave {

/// Moments C[q][i] = integral x^i h(x)^q dx of one profile function h.
struct MomentTable {
  int q = 0;
  std::vector<double> entries;  // entries[i] = C_{q,i}, i = 0..n
};

/// Truncated late-time expansion. B[k] are the rescaled moments entering the
/// k-th term of the outgoing expansion for exponent p; for p = 3 the A[k] are
/// the coefficients of the basis {1/s, t/s^2, (3t^2+r^2)/s^3}, s = t^2 - r^2,
/// obtained from B[k] through the algebraic factors {2, 4, 2} of the bracket
///   [1/(t-r)^{k+1} - 1/(t+r)^{k+1}] / r.
struct TailExpansion {
  int p = 3;
  double epsilon = 0.0;
  int n = 2;
  std::vector<double> C;  // moments C_{p,k}
  std::vector<double> B;  // B_{p,k}
  std::vector<double> A;  // populated for p == 3 only, k <= 2
  bool non_generic = false;
};

struct AttractorParams {
  double a = 0.0;
  double b = 0.0;
};

/// Coefficients of the attractor's own large-(t^2-r^2) expansion in the basis
/// {1/s, t/s^2, (3t^2+r^2)/s^3, t^2/s^3}. The attractor depends on r only
/// through s, so it carries no independent (3t^2+r^2)/s^3 content: c_basis2
/// is identically zero and the third-order content sits in c_t2.
struct AttractorExpansion {
  double A0 = 0.0;
  double A1 = 0.0;
  double c_basis2 = 0.0;
  double c_t2 = 0.0;
};

struct ScalingParams {
  int p = 3;
  double a_scale = 1.0;
  double b_scale = 0.0;   // p + a(p-1)
  double lambda0 = 0.0;   // (p-1)(1-a) + a[(p-1)^2 - 2]/p
  bool valid = false;     // 0 < a < p(p-1)/(p+1)
};

/// C_{q,i} = integral x^i h^q over the support of h.
double moment(const HFunction& h, int q, int i, double tol = kDefaultQuadTol);
/// Same moment for an arbitrary evaluator with known support radius.
double moment_of(const std::function<double(double)>& h, double support_radius,
                 int q, int i, double tol = kDefaultQuadTol);

MomentTable build_moments(const HFunction& h, int q, int n,
                          double tol = kDefaultQuadTol);

/// B_{p,k} = 2^{p+k-3} C / (p+k-2).
double b_coefficient(int p, int k, double C);

/// k-th term of the outgoing expansion,
///   W_k(t,r) = B * Theta(t-r)/r * [1/(t-r)^{p+k-2} - 1/(t+r)^{p+k-2}],
/// continued evenly through r = 0 with the limit 2(p+k-2) B / t^{p+k-1}.
/// Evaluation exactly on the light cone t = r > 0 is rejected.
double wk_eval(int p, int k, double B, double t, double r);

/// Generic late-time form A0/s + A1 t/s^2 + A2 (3t^2+r^2)/s^3, s = t^2 - r^2.
double tail_eval(const TailExpansion& exp, double t, double r);

/// u_{a,b}(t,r) = sqrt(2) / (t + a + b[(t+a)^2 - r^2]).
double attractor_eval(const AttractorParams& params, double t, double r);

/// Series division of the attractor denominator:
///   A0 = sqrt(2)/b, A1 = -sqrt(2)(1+2ab)/b^2, c_t2 = sqrt(2)(2ab-1)^2/b^3.
AttractorExpansion attractor_expand(const AttractorParams& params, int n = 2);

/// Closed-form inversion of attractor_expand:
///   b = sqrt(2)/A0,  a = -sqrt(2) A0/4 - A1/(2 A0).
/// Requires A0 > 0 (A0 = 0 is the non-generic branch; A0 < 0 gives b < 0 and
/// the denominator loses positivity at late times).
AttractorParams match_attractor(double A0, double A1);

/// Full predictor: data (f, g) -> h -> moments -> B_{p,k} -> A_k (p = 3).
TailExpansion predict_tail(const RadialProfile& f, const RadialProfile& g, int p,
                           double epsilon, int n, double tol = kDefaultQuadTol);

ScalingParams scaling_params(int p, double a_scale);

/// Max |box u_{a,b} - u_{a,b}^3| over t in [1,5], r in [0, t-0.2], with the
/// d'Alembertian discretized in v = r u by 5-point centered stencils of
/// spacing h in both t and r. Used to verify the attractor is an exact
/// solution: the residual is pure scheme truncation and must shrink at the
/// stencil order under refinement.
double attractor_discrete_residual(const AttractorParams& params, double h);

}  // namespace tailwave
