#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "tailwave/profiles.hpp"
#include "tailwave/solver.hpp"

namespace tailwave {

using json = nlohmann::json;

struct GridConfig {
  std::optional<double> r_max;  // auto-sized from causality when omitted
  int n_cells = 8000;
  double cfl = 0.5;
  double margin = 4.0;
};

struct AnalysisConfig {
  double w_factor = 5.0;
  int n_terms = 2;
  double a_scale = 1.0;
  std::optional<double> t_hi;  // analysis window cap; defaults to t_final
};

struct Config {
  int p = 3;
  std::vector<double> epsilons = {0.05};
  RadialProfile f;
  RadialProfile g;
  GridConfig grid;
  double t_final = 100.0;
  std::vector<double> observers = {0.5, 1.0, 2.0};
  AnalysisConfig analysis;
  bool nonlinear = true;
  bool linear_companion = false;

  double support_radius() const;
  double max_observer() const;
  /// r_max from config, or R + t_final + max(observers) + margin.
  double resolved_r_max() const;
  Grid make_grid(int resolution_factor = 1) const;
  SolverOptions solver_options(double epsilon, int resolution_factor = 1) const;
};

json profile_to_json(const RadialProfile& profile);
RadialProfile profile_from_json(const json& j);

json config_to_json(const Config& config);
Config config_from_json(const json& j);
Config load_config(const std::filesystem::path& path);

}  // namespace tailwave
