#include "tailwave/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "tailwave/errors.hpp"
#include "tailwave/leastsq.hpp"

namespace tailwave {

namespace {

struct WindowView {
  std::vector<double> t;
  std::vector<double> u;
};

WindowView slice(const Series& series, const Window& window) {
  if (series.t.size() != series.u.size()) throw FitError("series t/u length mismatch");
  WindowView view;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    if (series.t[i] >= window.t_lo && series.t[i] <= window.t_hi) {
      view.t.push_back(series.t[i]);
      view.u.push_back(series.u[i]);
    }
  }
  return view;
}

double median(std::vector<double> values) {
  if (values.empty()) throw FitError("median of empty range");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  double hi = values[mid];
  if (values.size() % 2 == 0) {
    std::nth_element(values.begin(), values.begin() + mid - 1, values.end());
    return 0.5 * (values[mid - 1] + hi);
  }
  return hi;
}

// Piecewise-linear interpolation of ln|u| against ln t. Exact on pure power
// laws, which is what the exponent estimator is calibrated against.
double interp_loglog(const WindowView& view, double log_t) {
  const std::size_t n = view.t.size();
  std::vector<double>::const_iterator it =
      std::lower_bound(view.t.begin(), view.t.end(), std::exp(log_t));
  std::size_t j = static_cast<std::size_t>(it - view.t.begin());
  if (j == 0) j = 1;
  if (j >= n) j = n - 1;
  const double x0 = std::log(view.t[j - 1]);
  const double x1 = std::log(view.t[j]);
  const double y0 = std::log(std::abs(view.u[j - 1]));
  const double y1 = std::log(std::abs(view.u[j]));
  const double w = (log_t - x0) / (x1 - x0);
  return y0 + w * (y1 - y0);
}

}  // namespace

Window make_window(double support_radius, double r_obs, double t_final,
                   double w_factor) {
  if (w_factor < 3.0) throw ConfigError("window factor must be >= 3");
  Window window;
  window.t_lo = w_factor * (support_radius + r_obs);
  window.t_hi = t_final;
  if (!(window.t_lo < window.t_hi)) {
    throw ConfigError("analysis window is empty: run too short for this observer");
  }
  return window;
}

ExponentTrace local_exponent(const Series& series, const Window& window,
                             int n_resample) {
  WindowView view = slice(series, window);
  if (view.t.size() < 8) throw FitError("local_exponent: too few samples in window");

  bool positive = false;
  bool negative = false;
  for (double value : view.u) {
    if (value > 0.0) positive = true;
    if (value < 0.0) negative = true;
    if (value == 0.0) { positive = true; negative = true; }
  }
  if (positive && negative) {
    throw FitError("local_exponent: sign change inside window; tail not yet "
                   "sign-definite (window too early)");
  }

  const double log_lo = std::log(view.t.front());
  const double log_hi = std::log(view.t.back());
  const int m = std::max(n_resample, 16);
  const double dlog = (log_hi - log_lo) / (m - 1);

  ExponentTrace trace;
  trace.t.reserve(m - 2);
  trace.sigma.reserve(m - 2);
  for (int i = 1; i + 1 < m; ++i) {
    const double xm = log_lo + (i - 1) * dlog;
    const double xp = log_lo + (i + 1) * dlog;
    const double sigma = (interp_loglog(view, xp) - interp_loglog(view, xm)) / (xp - xm);
    trace.t.push_back(std::exp(log_lo + i * dlog));
    trace.sigma.push_back(sigma);
  }

  const std::size_t start = trace.sigma.size() - trace.sigma.size() / 3;
  trace.plateau = median({trace.sigma.begin() + start, trace.sigma.end()});
  return trace;
}

FitReport fit_tail(const Series& series, int /*p*/, int n, const Window& window) {
  if (n < 0 || n > 2) throw ConfigError("fit_tail supports 0 <= n <= 2 basis terms");
  WindowView view = slice(series, window);
  const int rows = static_cast<int>(view.t.size());
  const int cols = n + 1;
  if (rows < 3 * cols) throw FitError("fit_tail: window too short for requested basis");

  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd rhs(rows);
  const double r = series.r_obs;
  for (int i = 0; i < rows; ++i) {
    const double t = view.t[i];
    const double s = t * t - r * r;
    design(i, 0) = 1.0 / s;
    if (cols > 1) design(i, 1) = t / (s * s);
    if (cols > 2) design(i, 2) = (3.0 * t * t + r * r) / (s * s * s);
    rhs[i] = view.u[i];
  }

  LstsqResult solution = lstsq(design, rhs);
  FitReport report;
  report.kind = "tail";
  report.values.assign(solution.coeff.data(), solution.coeff.data() + cols);
  report.residual_norm = solution.residual_norm;
  report.condition = solution.condition;
  report.ill_conditioned = solution.condition > kIllConditionedThreshold;
  report.window = window;
  return report;
}

FitReport fit_attractor(const Series& series, const Window& window,
                        const AttractorParams& init) {
  WindowView view = slice(series, window);
  const int rows = static_cast<int>(view.t.size());
  if (rows < 8) throw FitError("fit_attractor: too few samples in window");

  const auto denom = [&](double a, double b, double t) {
    const double tau = t + a;
    return tau + b * (tau * tau - series.r_obs * series.r_obs);
  };
  const auto residual_norm2 = [&](double a, double b, Eigen::VectorXd* out) -> double {
    double norm2 = 0.0;
    for (int i = 0; i < rows; ++i) {
      const double d = denom(a, b, view.t[i]);
      if (!(d > 0.0)) return -1.0;  // invalid parameter point
      const double e = view.u[i] - std::sqrt(2.0) / d;
      if (out) (*out)[i] = e;
      norm2 += e * e;
    }
    return norm2;
  };

  double a = init.a;
  double b = init.b;
  Eigen::VectorXd errs(rows);
  double norm2 = residual_norm2(a, b, &errs);
  if (norm2 < 0.0) throw FitError("fit_attractor: initial parameters outside domain");

  FitReport report;
  report.kind = "attractor";
  report.window = window;
  report.converged = false;

  const int max_iter = 100;
  int iter = 0;
  double condition = 0.0;
  for (; iter < max_iter; ++iter) {
    Eigen::MatrixXd jac(rows, 2);
    for (int i = 0; i < rows; ++i) {
      const double t = view.t[i];
      const double d = denom(a, b, t);
      const double tau = t + a;
      const double inv_d2 = std::sqrt(2.0) / (d * d);
      // e_i = u_i - sqrt(2)/d  =>  de/da = sqrt(2) dD/da / d^2, same for b.
      jac(i, 0) = inv_d2 * (1.0 + 2.0 * b * tau);
      jac(i, 1) = inv_d2 * (tau * tau - series.r_obs * series.r_obs);
    }
    LstsqResult step = lstsq(jac, -errs);
    condition = step.condition;
    double da = step.coeff[0];
    double db = step.coeff[1];

    double scale = 1.0;
    double next_norm2 = -1.0;
    Eigen::VectorXd next_errs(rows);
    for (int halvings = 0; halvings < 40; ++halvings) {
      next_norm2 = residual_norm2(a + scale * da, b + scale * db, &next_errs);
      if (next_norm2 >= 0.0 && next_norm2 <= norm2) break;
      scale *= 0.5;
      next_norm2 = -1.0;
    }
    if (next_norm2 < 0.0) break;  // no usable step

    a += scale * da;
    b += scale * db;
    errs.swap(next_errs);
    norm2 = next_norm2;

    const double step_rel = std::hypot(scale * da, scale * db) /
                            std::max(std::hypot(a, b), 1e-300);
    if (step_rel < 1e-10) {
      report.converged = true;
      ++iter;
      break;
    }
  }

  report.values = {a, b};
  report.residual_norm = std::sqrt(std::max(norm2, 0.0));
  report.condition = condition;
  report.ill_conditioned = condition > kIllConditionedThreshold;
  report.iterations = iter;
  return report;
}

ExponentTrace approach_rate(const Series& series, const AttractorParams& params,
                            const Window& window) {
  // The attractor denominator can be negative at early times for extreme
  // parameters; build the difference on the window only.
  Series difference;
  difference.r_obs = series.r_obs;
  double max_u = 0.0;
  double max_d = 0.0;
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    if (series.t[i] < window.t_lo || series.t[i] > window.t_hi) continue;
    const double model = attractor_eval(params, series.t[i], series.r_obs);
    difference.t.push_back(series.t[i]);
    difference.u.push_back(series.u[i] - model);
    max_u = std::max(max_u, std::abs(series.u[i]));
    max_d = std::max(max_d, std::abs(difference.u.back()));
  }
  // Residual indistinguishable from the series' own roundoff: report
  // degenerate rather than measuring an exponent of noise.
  if (max_d <= 1e-13 * max_u) {
    ExponentTrace trace;
    trace.degenerate = true;
    return trace;
  }
  return local_exponent(difference, window);
}

EpsilonScalingReport epsilon_scaling(const Series& series_lo, const Series& series_hi,
                                     double eps_ratio, const Window& window,
                                     double noise_floor) {
  if (!(eps_ratio > 0.0) || eps_ratio == 1.0) {
    throw ConfigError("epsilon_scaling requires an epsilon ratio != 1");
  }
  WindowView lo = slice(series_lo, window);
  WindowView hi = slice(series_hi, window);
  if (lo.t.size() < 4 || hi.t.size() < 4) {
    throw FitError("epsilon_scaling: too few samples in window");
  }
  std::vector<double> abs_lo(lo.u.size());
  std::vector<double> abs_hi(hi.u.size());
  std::transform(lo.u.begin(), lo.u.end(), abs_lo.begin(),
                 [](double x) { return std::abs(x); });
  std::transform(hi.u.begin(), hi.u.end(), abs_hi.begin(),
                 [](double x) { return std::abs(x); });

  EpsilonScalingReport report;
  report.amp_lo = median(abs_lo);
  report.amp_hi = median(abs_hi);
  report.below_noise = report.amp_lo <= noise_floor || report.amp_hi <= noise_floor;
  if (report.amp_lo > 0.0 && report.amp_hi > 0.0) {
    report.power = std::log(report.amp_hi / report.amp_lo) / std::log(eps_ratio);
  }
  return report;
}

ScaledRemainderReport scaled_remainder(const Series& w_series, double epsilon,
                                       double a_scale, int n,
                                       const TailExpansion& prediction,
                                       double t_scaled_min) {
  ScalingParams scaling = scaling_params(prediction.p, a_scale);
  if (!scaling.valid) throw ConfigError("scaled_remainder: a_scale outside valid range");
  if (n < 0 || n >= static_cast<int>(prediction.B.size())) {
    throw ConfigError("scaled_remainder: truncation order exceeds prediction");
  }

  const double lam = std::pow(epsilon, a_scale);       // scaled = lam * physical
  const double amp = std::pow(epsilon, scaling.b_scale);
  const double r_scaled = lam * w_series.r_obs;

  ScaledRemainderReport report;
  report.epsilon = epsilon;
  report.a_scale = a_scale;
  report.n = n;
  for (std::size_t i = 0; i < w_series.t.size(); ++i) {
    const double t_scaled = lam * w_series.t[i];
    if (t_scaled - r_scaled <= t_scaled_min) continue;
    const double w_eps = w_series.u[i] / amp;
    double model = 0.0;
    for (int k = 0; k <= n; ++k) {
      model += std::pow(epsilon, k * a_scale) *
               wk_eval(prediction.p, k, prediction.B[k], t_scaled, r_scaled);
    }
    report.max_deviation = std::max(report.max_deviation, std::abs(w_eps - model));
    ++report.n_points;
  }
  report.excluded = report.n_points == 0;
  return report;
}

}  // namespace tailwave
