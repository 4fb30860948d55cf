#pragma once

#include <cmath>
#include <utility>

#include "tailwave/errors.hpp"

namespace tailwave {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr int kDefaultQuadDepth = 48;

namespace detail {

inline double simpson_panel(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson(F&& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_panel(a, m, fa, flm, fm);
  const double right = simpson_panel(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  // Interval-halving estimate: |S(h/2) - S(h)| / 15 bounds the error of the
  // refined value for smooth integrands.
  if (std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  if (depth <= 0) {
    throw QuadratureError("adaptive quadrature did not converge: non-smooth "
                          "integrand or tolerance too tight");
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Integrate a smooth function over the compact interval [a, b] to absolute
/// tolerance tol. The interval is seeded with several panels so that odd or
/// symmetric integrands cannot fool the first convergence check.
template <class F>
double integrate_compact(F&& f, double a, double b, double tol = kDefaultQuadTol,
                         int max_depth = kDefaultQuadDepth) {
  if (!(tol > 0.0)) throw ConfigError("quadrature tolerance must be > 0");
  if (a == b) return 0.0;
  if (b < a) return -integrate_compact(std::forward<F>(f), b, a, tol, max_depth);

  constexpr int kSeedPanels = 8;
  const double h = (b - a) / kSeedPanels;
  double total = 0.0;
  for (int i = 0; i < kSeedPanels; ++i) {
    const double pa = a + i * h;
    const double pb = (i + 1 == kSeedPanels) ? b : a + (i + 1) * h;
    const double pm = 0.5 * (pa + pb);
    const double fa = f(pa);
    const double fm = f(pm);
    const double fb = f(pb);
    const double whole = detail::simpson_panel(pa, pb, fa, fm, fb);
    // The halving estimate is heuristic; the extra factor keeps the summed
    // error of all panels safely under the requested tolerance.
    total += detail::adaptive_simpson(f, pa, pb, fa, fm, fb, whole,
                                      tol / (4 * kSeedPanels), max_depth);
  }
  return total;
}

}  // namespace tailwave
