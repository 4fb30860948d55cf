#include "tailwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailwave/errors.hpp"

namespace tailwave {

namespace {

double ipow(double x, int n) {
  double result = 1.0;
  for (int i = 0; i < n; ++i) result *= x;
  return result;
}

// Cubic Lagrange interpolation of v at an off-node radius. Exact at nodes.
double interp_v(const std::vector<double>& v, const Grid& grid, double r) {
  const double x = r / grid.dr();
  int j0 = static_cast<int>(std::floor(x)) - 1;
  j0 = std::clamp(j0, 0, grid.n_cells - 3);
  double value = 0.0;
  for (int k = 0; k < 4; ++k) {
    double weight = 1.0;
    for (int l = 0; l < 4; ++l) {
      if (l == k) continue;
      weight *= (x - (j0 + l)) / static_cast<double>(k - l);
    }
    value += weight * v[j0 + k];
  }
  return value;
}

// One-sided fourth-order first derivative at the origin node.
double deriv_at_origin(const std::vector<double>& v, double dr) {
  return (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) /
         (12.0 * dr);
}

double observe(const std::vector<double>& v, const Grid& grid, double r_obs) {
  if (r_obs == 0.0) return deriv_at_origin(v, grid.dr());
  return interp_v(v, grid, r_obs) / r_obs;
}

}  // namespace

void Grid::validate() const {
  if (!(r_max > 0.0)) throw ConfigError("grid r_max must be > 0");
  if (n_cells < 16) throw ConfigError("grid needs at least 16 cells");
}

void validate_causality(const SolverOptions& options) {
  const double support = std::max(options.f.is_zero() ? 0.0 : options.f.radius,
                                  options.g.is_zero() ? 0.0 : options.g.radius);
  double max_obs = 0.0;
  for (double r : options.observers) {
    if (r < 0.0) throw ConfigError("observer radius must be >= 0");
    max_obs = std::max(max_obs, r);
  }
  if (max_obs >= options.grid.r_max) {
    throw ConfigError("observer outside the grid");
  }
  if (!(options.t_final < options.grid.r_max - max_obs - support)) {
    throw ConfigError(
        "causality: need t_final < r_max - max(observers) - R_support so the "
        "outer boundary stays causally disconnected");
  }
}

void reduce_rhs(const std::vector<double>& v, const std::vector<double>& pi,
                const Grid& grid, int p, bool nonlinear,
                std::vector<double>& dv, std::vector<double>& dpi) {
  const int n = grid.n_cells;
  const double inv12h2 = 1.0 / (12.0 * grid.dr() * grid.dr());
  dv.resize(n + 1);
  dpi.resize(n + 1);

  dv = pi;
  dv[0] = 0.0;  // origin pinned
  dpi[0] = 0.0;

  // j = 1 uses the odd continuation v[-1] = -v[1]: the -v[j-2] term becomes +v[1].
  dpi[1] = (v[1] + 16.0 * v[0] - 30.0 * v[1] + 16.0 * v[2] - v[3]) * inv12h2;
  for (int j = 2; j <= n - 2; ++j) {
    dpi[j] = (-v[j - 2] + 16.0 * v[j - 1] - 30.0 * v[j] + 16.0 * v[j + 1] -
              v[j + 2]) * inv12h2;
  }
  // Outer nodes: field is identically zero near the causally oversized
  // boundary, so zero ghosts are exact.
  if (n >= 3) {
    dpi[n - 1] = (-v[n - 3] + 16.0 * v[n - 2] - 30.0 * v[n - 1] + 16.0 * v[n]) *
                 inv12h2;
    dpi[n] = (-v[n - 2] + 16.0 * v[n - 1] - 30.0 * v[n]) * inv12h2;
  }

  if (nonlinear) {
    for (int j = 1; j <= n; ++j) {
      // v^p / r^{p-1} = v (v/r)^{p-1}; vanishes at the origin since v ~ r u.
      dpi[j] += v[j] * ipow(v[j] / grid.node(j), p - 1);
    }
  }
}

double field_energy(const FieldState& state, const Grid& grid, int p,
                    bool nonlinear) {
  const int n = grid.n_cells;
  const double dr = grid.dr();
  const double inv12h = 1.0 / (12.0 * dr);

  double sum = 0.0;  // trapezoid; integrand vanishes at r = 0 and r = r_max
  for (int j = 1; j < n - 1; ++j) {
    const double r = grid.node(j);
    const double u = state.v[j] / r;
    const double ut = state.pi[j] / r;
    double vr;
    if (j == 1) {
      // centered stencil with the odd ghost v[-1] = -v[1]
      vr = (-state.v[1] - 8.0 * state.v[0] + 8.0 * state.v[2] - state.v[3]) * inv12h;
    } else {
      vr = (state.v[j - 2] - 8.0 * state.v[j - 1] + 8.0 * state.v[j + 1] -
            state.v[j + 2]) * inv12h;
    }
    const double ur = (vr - u) / r;
    double density = 0.5 * ut * ut + 0.5 * ur * ur;
    if (nonlinear) density -= ipow(u, p + 1) / (p + 1);
    sum += density * r * r;
  }
  return sum * dr;
}

EvolutionRun evolve(const SolverOptions& options) {
  options.f.validate();
  options.g.validate();
  options.grid.validate();
  if (!(options.cfl > 0.0) || options.cfl > 0.5 + 1e-12) {
    throw ConfigError("CFL must lie in (0, 0.5]");
  }
  if (!(options.t_final > 0.0)) throw ConfigError("t_final must be > 0");
  if (options.p < 3) throw ConfigError("solver requires integer p >= 3");
  validate_causality(options);

  const Grid& grid = options.grid;
  const int n = grid.n_cells;
  const double dr = grid.dr();
  const double dt = options.cfl * dr;
  const int steps = static_cast<int>(std::ceil(options.t_final / dt - 1e-9));
  const double support = std::max(options.f.is_zero() ? 0.0 : options.f.radius,
                                  options.g.is_zero() ? 0.0 : options.g.radius);

  EvolutionRun run;
  run.dr = dr;
  run.dt = dt;
  run.steps = steps;
  run.support_radius = support;
  run.epsilon_warning = options.epsilon > options.epsilon_warn_threshold;

  FieldState state;
  state.v.assign(n + 1, 0.0);
  state.pi.assign(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) {
    const double r = grid.node(j);
    state.v[j] = options.epsilon * r * options.f(r);
    state.pi[j] = options.epsilon * r * options.g(r);
  }

  run.observer_series.resize(options.observers.size());
  for (std::size_t i = 0; i < options.observers.size(); ++i) {
    run.observer_series[i].r_obs = options.observers[i];
    run.observer_series[i].t.reserve(steps + 1);
    run.observer_series[i].u.reserve(steps + 1);
  }

  const auto record_observers = [&]() {
    for (std::size_t i = 0; i < options.observers.size(); ++i) {
      run.observer_series[i].t.push_back(state.t);
      run.observer_series[i].u.push_back(observe(state.v, grid, options.observers[i]));
    }
  };
  const auto record_energy = [&]() {
    run.energy_t.push_back(state.t);
    run.energy.push_back(field_energy(state, grid, options.p, options.nonlinear));
  };
  const auto check_health = [&]() {
    double max_u = std::abs(deriv_at_origin(state.v, dr));
    for (int j = 1; j <= n; ++j) {
      max_u = std::max(max_u, std::abs(state.v[j] / grid.node(j)));
    }
    if (!std::isfinite(max_u) || max_u > options.blowup_threshold) {
      throw BlowupError("field exceeded blow-up guard (|u| > " +
                            std::to_string(options.blowup_threshold) + ") at t = " +
                            std::to_string(state.t),
                        state.t);
    }
    // Finite speed of propagation: numerically nothing may leak past the
    // causal envelope plus the stencil-reach margin.
    const int j_env = static_cast<int>(std::ceil((support + state.t) / dr)) +
                      options.speed_check_margin_cells;
    for (int j = j_env + 1; j <= n; ++j) {
      run.max_speed_violation = std::max(run.max_speed_violation, std::abs(state.v[j]));
    }
  };

  record_observers();
  record_energy();
  check_health();

  std::vector<double> k1v, k1p, k2v, k2p, k3v, k3p, k4v, k4p;
  std::vector<double> tmp_v(n + 1), tmp_p(n + 1);
  const auto add_scaled = [n](const std::vector<double>& base,
                              const std::vector<double>& incr, double factor,
                              std::vector<double>& out) {
    for (int j = 0; j <= n; ++j) out[j] = base[j] + factor * incr[j];
    out[0] = 0.0;
  };

  for (int step = 1; step <= steps; ++step) {
    reduce_rhs(state.v, state.pi, grid, options.p, options.nonlinear, k1v, k1p);
    add_scaled(state.v, k1v, 0.5 * dt, tmp_v);
    add_scaled(state.pi, k1p, 0.5 * dt, tmp_p);
    reduce_rhs(tmp_v, tmp_p, grid, options.p, options.nonlinear, k2v, k2p);
    add_scaled(state.v, k2v, 0.5 * dt, tmp_v);
    add_scaled(state.pi, k2p, 0.5 * dt, tmp_p);
    reduce_rhs(tmp_v, tmp_p, grid, options.p, options.nonlinear, k3v, k3p);
    add_scaled(state.v, k3v, dt, tmp_v);
    add_scaled(state.pi, k3p, dt, tmp_p);
    reduce_rhs(tmp_v, tmp_p, grid, options.p, options.nonlinear, k4v, k4p);

    const double w = dt / 6.0;
    for (int j = 1; j <= n; ++j) {
      state.v[j] += w * (k1v[j] + 2.0 * k2v[j] + 2.0 * k3v[j] + k4v[j]);
      state.pi[j] += w * (k1p[j] + 2.0 * k2p[j] + 2.0 * k3p[j] + k4p[j]);
    }
    state.v[0] = 0.0;
    state.pi[0] = 0.0;
    state.t = step * dt;

    record_observers();
    if (step % options.energy_stride == 0 || step == steps) record_energy();
    check_health();
  }

  return run;
}

double linear_solution(const HFunction& h, double t, double r) {
  if (t < 0.0) throw DomainError("linear_solution requires t >= 0");
  const double R = h.support_radius();
  if (r < 1e-6 * R) {
    const double delta = 1e-6 * R;
    return -(h(t + delta) - h(t - delta)) / delta;
  }
  return (h(t - r) - h(t + r)) / r;
}

double linear_solution(const RadialProfile& f, const RadialProfile& g, double t,
                       double r) {
  return linear_solution(build_h(f, g), t, r);
}

}  // namespace tailwave
