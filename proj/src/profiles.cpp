#include "tailwave/profiles.hpp"

#include <algorithm>
#include <cmath>

namespace tailwave {

namespace {

// Integer power by repeated multiplication; exact operation ordering keeps
// results bit-reproducible across platforms.
double ipow(double x, int n) {
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= x;
  return result;
}

}  // namespace

double RadialProfile::operator()(double r) const {
  if (family == ProfileFamily::zero) return 0.0;
  const double a = std::abs(r);
  if (a >= radius) return 0.0;
  const double s = 1.0 - (r / radius) * (r / radius);
  return amplitude * ipow(s, smoothness);
}

bool RadialProfile::is_zero() const {
  return family == ProfileFamily::zero || amplitude == 0.0;
}

void RadialProfile::validate() const {
  if (!(radius > 0.0)) throw ConfigError("profile radius must be > 0");
  if (family == ProfileFamily::poly_bump && smoothness < 2) {
    throw ConfigError("poly_bump smoothness exponent m must be >= 2");
  }
  if (!std::isfinite(amplitude)) throw ConfigError("profile amplitude must be finite");
}

RadialProfile poly_bump(double amplitude, double radius, int m) {
  RadialProfile p{ProfileFamily::poly_bump, amplitude, radius, m};
  p.validate();
  return p;
}

RadialProfile zero_profile() { return RadialProfile{}; }

std::string to_string(ProfileFamily family) {
  switch (family) {
    case ProfileFamily::zero: return "zero";
    case ProfileFamily::poly_bump: return "poly_bump";
  }
  return "unknown";
}

ProfileFamily profile_family_from_string(const std::string& name) {
  if (name == "zero") return ProfileFamily::zero;
  if (name == "poly_bump") return ProfileFamily::poly_bump;
  throw ConfigError("unknown profile family: " + name);
}

HFunction::HFunction(RadialProfile f, RadialProfile g) : f_(std::move(f)), g_(std::move(g)) {
  f_.validate();
  g_.validate();
  const double rf = f_.is_zero() ? 0.0 : f_.radius;
  const double rg = g_.is_zero() ? 0.0 : g_.radius;
  support_radius_ = std::max(rf, rg);
  if (support_radius_ == 0.0) support_radius_ = std::max(f_.radius, g_.radius);
}

// integral_x^inf y g(y) dy for the poly_bump family:
//   R^2 amp (1 - x^2/R^2)^{m+1} / (2(m+1))   for |x| < R, 0 for x >= R,
// and 0 for x <= -R because the integrand is odd. The expression is even in x,
// which covers -R < x < 0 as well.
double HFunction::g_integral_term(double x) const {
  if (g_.is_zero()) return 0.0;
  const double R = g_.radius;
  if (std::abs(x) >= R) return 0.0;
  const double s = 1.0 - (x / R) * (x / R);
  double result = g_.amplitude * R * R / (2.0 * (g_.smoothness + 1));
  for (int i = 0; i <= g_.smoothness; ++i) result *= s;
  return result;
}

double HFunction::operator()(double x) const {
  return -0.5 * x * f_(x) + 0.5 * g_integral_term(x);
}

double HFunction::from_quadrature(double x, double tol) const {
  double integral = 0.0;
  if (!g_.is_zero()) {
    const double R = g_.radius;
    const double lo = std::min(x, R);
    integral = integrate_compact([this](double y) { return y * g_(y); }, lo, R, tol);
  }
  return -0.5 * x * f_(x) + 0.5 * integral;
}

}  // namespace tailwave
