#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailwave/asymptotics.hpp"

namespace tailwave {

/// Time series of one field observable at a fixed radius.
struct Series {
  std::vector<double> t;
  std::vector<double> u;
  double r_obs = 0.0;
};

/// Late-time analysis window. The default rule places t_lo past the
/// ringdown/backscatter transient: t_lo = w_factor * (R_support + r_obs).
struct Window {
  double t_lo = 0.0;
  double t_hi = 0.0;
};

Window make_window(double support_radius, double r_obs, double t_final,
                   double w_factor = 5.0);

struct ExponentTrace {
  std::vector<double> t;
  std::vector<double> sigma;  // d ln|u| / d ln t
  double plateau = 0.0;       // median of sigma over the last third of the window
  bool degenerate = false;    // series below noise floor, no exponent to measure
};

/// Local logarithmic decay exponent on log-log resampled data. The series must
/// be sign-definite inside the window (a sign change means the window starts
/// before the ringdown has finished).
ExponentTrace local_exponent(const Series& series, const Window& window,
                             int n_resample = 200);

struct FitReport {
  std::string kind;
  std::vector<double> values;
  double residual_norm = 0.0;
  double condition = 0.0;
  bool ill_conditioned = false;
  bool converged = true;
  int iterations = 0;
  Window window;
};

inline constexpr double kIllConditionedThreshold = 1e8;

/// Linear fit of the basis {1/s, t/s^2, (3t^2+r^2)/s^3}, s = t^2 - r_obs^2,
/// over the window; n <= 2 terms beyond the leading one.
FitReport fit_tail(const Series& series, int p, int n, const Window& window);

/// Two-parameter Gauss-Newton fit of the attractor with step halving.
FitReport fit_attractor(const Series& series, const Window& window,
                        const AttractorParams& init);

/// Local exponent of u - u_{a,b}; the t^-4 approach-rate diagnostic.
ExponentTrace approach_rate(const Series& series, const AttractorParams& params,
                            const Window& window);

struct EpsilonScalingReport {
  double power = 0.0;        // log(amplitude ratio) / log(epsilon ratio)
  double amp_lo = 0.0;
  double amp_hi = 0.0;
  bool below_noise = false;  // amplitudes at or under the solver noise floor
};

/// Measured epsilon-power of the late-window amplitude, from two series of the
/// same observable at epsilon and ratio*epsilon.
EpsilonScalingReport epsilon_scaling(const Series& series_lo, const Series& series_hi,
                                     double eps_ratio, const Window& window,
                                     double noise_floor = 1e-14);

struct ScaledRemainderReport {
  double epsilon = 0.0;
  double a_scale = 0.0;
  int n = 0;
  double max_deviation = 0.0;
  int n_points = 0;
  bool excluded = false;  // observer has no samples in the valid scaled region
};

/// Compare the scaled remainder W_eps(t,r) = eps^{-b} w(eps^{-a} t, eps^{-a} r)
/// against sum_k eps^{ka} W_k over the region t - r > t_scaled_min (scaled
/// units). w_series must hold w = u - eps u0 at a fixed physical radius.
ScaledRemainderReport scaled_remainder(const Series& w_series, double epsilon,
                                       double a_scale, int n,
                                       const TailExpansion& prediction,
                                       double t_scaled_min = 1.0);

}  // namespace tailwave
