#pragma once

#include <filesystem>

#include "tailwave/config.hpp"
#include "tailwave/io.hpp"

namespace tailwave {

/// Acceptance thresholds used by the verify pipeline. Values are fixed by the
/// verification plan; they are members (not constants) so tests can probe the
/// sensitivity of a check without redefining it.
struct VerifyThresholds {
  double generic_exponent = -2.0;
  double generic_exponent_tol = 0.1;
  double non_generic_exponent = -3.0;
  double non_generic_exponent_tol = 0.15;
  double non_generic_a0_fraction = 0.05;
  double a0_rel_tol = 0.10;
  double eps_power_tol = 0.15;
  double eps_ratio_rel_tol = 0.15;
  double approach_exponent = -4.0;
  double approach_tol = 0.4;
  double mismatch_min_plateau = -2.2;
  double b_crosscheck_rel_tol = 0.05;
  double energy_drift_max = 1e-6;
  double speed_violation_max = 1e-12;
  double huygens_max = 1e-10;
  double huygens_margin = 2.0;
};

/// Single-epsilon prediction report: moments, B and A coefficients, scaling
/// exponents and the admissible scaling range.
json predict_report(const Config& config, double epsilon);

/// w = u - eps*u0 per observer from a nonlinear run and a unit-amplitude
/// linear companion on the same grid; the shared linear truncation error
/// cancels in the subtraction.
std::vector<Series> subtract_linear(const std::vector<Series>& nonlinear,
                                    const std::vector<Series>& linear_unit,
                                    double epsilon);

json cmd_predict(const Config& config, const std::filesystem::path& out);
json cmd_evolve(const Config& config, const std::filesystem::path& out,
                int resolution_factor = 1);
json cmd_analyze(const Config& config, const std::filesystem::path& out);
json cmd_verify(const Config& config, const std::filesystem::path& out,
                const VerifyThresholds& thresholds = {});
json cmd_sweep(const Config& config, const std::filesystem::path& out,
               int resolution_factor = 1);

/// Worker cap: TAILWAVE_THREADS env var, else hardware concurrency.
int worker_count(int jobs);

}  // namespace tailwave
