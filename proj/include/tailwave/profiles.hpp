#pragma once

#include <string>

#include "tailwave/quadrature.hpp"

namespace tailwave {

enum class ProfileFamily { zero, poly_bump };

/// Compactly supported smooth radial function, even in r.
/// poly_bump(r) = amplitude * (1 - r^2/R^2)^m for |r| < R, zero otherwise;
/// the function is C^{m-1} at the support edge.
struct RadialProfile {
  ProfileFamily family = ProfileFamily::zero;
  double amplitude = 0.0;
  double radius = 1.0;
  int smoothness = 4;

  double operator()(double r) const;
  bool is_zero() const;
  void validate() const;
};

RadialProfile poly_bump(double amplitude, double radius, int m);
RadialProfile zero_profile();

std::string to_string(ProfileFamily family);
ProfileFamily profile_family_from_string(const std::string& name);

/// d'Alembert profile of the free radial wave with data (f, g):
///   u0(t, r) = [h(t-r) - h(t+r)] / r,
///   h(x) = -(x/2) f(x) + (1/2) * integral_x^inf y g(y) dy,
/// with f, g continued evenly to negative argument. h vanishes for |x| >= R:
/// on the left because the full integral of the odd integrand y*g(y) is zero.
///
/// The closed antiderivative of y*(1 - y^2/R^2)^m makes operator() exact for
/// the poly_bump family; from_quadrature() evaluates the integral term
/// numerically and exists to cross-check the closed form.
class HFunction {
 public:
  HFunction(RadialProfile f, RadialProfile g);

  double operator()(double x) const;
  double from_quadrature(double x, double tol = kDefaultQuadTol) const;

  double support_radius() const { return support_radius_; }
  const RadialProfile& f() const { return f_; }
  const RadialProfile& g() const { return g_; }

 private:
  double g_integral_term(double x) const;

  RadialProfile f_;
  RadialProfile g_;
  double support_radius_;
};

inline HFunction build_h(RadialProfile f, RadialProfile g) {
  return HFunction(std::move(f), std::move(g));
}

}  // namespace tailwave
