#include "tailwave/config.hpp"

#include <algorithm>
#include <fstream>

#include "tailwave/errors.hpp"

namespace tailwave {

namespace {

void require_keys(const json& j, std::initializer_list<const char*> known,
                  const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return item.key() == k;
        }) == known.end()) {
      throw ConfigError("unknown key '" + item.key() + "' in " + where);
    }
  }
}

double number_at(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError("missing or non-numeric '" + std::string(key) + "' in " + where);
  }
  return j.at(key).get<double>();
}

}  // namespace

double Config::support_radius() const {
  return std::max(f.is_zero() ? 0.0 : f.radius, g.is_zero() ? 0.0 : g.radius);
}

double Config::max_observer() const {
  double m = 0.0;
  for (double r : observers) m = std::max(m, r);
  return m;
}

double Config::resolved_r_max() const {
  if (grid.r_max) return *grid.r_max;
  return support_radius() + t_final + max_observer() + grid.margin;
}

Grid Config::make_grid(int resolution_factor) const {
  if (resolution_factor < 1) throw ConfigError("resolution factor must be >= 1");
  Grid g{resolved_r_max(), grid.n_cells * resolution_factor};
  g.validate();
  return g;
}

SolverOptions Config::solver_options(double epsilon, int resolution_factor) const {
  SolverOptions opts;
  opts.p = p;
  opts.epsilon = epsilon;
  opts.f = f;
  opts.g = g;
  opts.grid = make_grid(resolution_factor);
  opts.cfl = grid.cfl;
  opts.t_final = t_final;
  opts.observers = observers;
  opts.nonlinear = nonlinear;
  return opts;
}

json profile_to_json(const RadialProfile& profile) {
  return json{{"family", to_string(profile.family)},
              {"amplitude", profile.amplitude},
              {"radius", profile.radius},
              {"m", profile.smoothness}};
}

RadialProfile profile_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("profile must be an object");
  require_keys(j, {"family", "amplitude", "radius", "m"}, "profile");
  if (!j.contains("family")) throw ConfigError("profile missing 'family'");
  RadialProfile profile;
  profile.family = profile_family_from_string(j.at("family").get<std::string>());
  if (profile.family == ProfileFamily::zero) {
    profile.amplitude = 0.0;
    if (j.contains("radius")) profile.radius = number_at(j, "radius", "profile");
    if (j.contains("m")) profile.smoothness = j.at("m").get<int>();
  } else {
    profile.amplitude = number_at(j, "amplitude", "profile");
    profile.radius = number_at(j, "radius", "profile");
    if (!j.contains("m") || !j.at("m").is_number_integer()) {
      throw ConfigError("poly_bump profile requires integer 'm'");
    }
    profile.smoothness = j.at("m").get<int>();
  }
  profile.validate();
  return profile;
}

json config_to_json(const Config& config) {
  json grid{{"N", config.grid.n_cells}, {"cfl", config.grid.cfl},
            {"margin", config.grid.margin}};
  if (config.grid.r_max) grid["r_max"] = *config.grid.r_max;
  json analysis{{"w_factor", config.analysis.w_factor},
                {"n_terms", config.analysis.n_terms},
                {"a_scale", config.analysis.a_scale}};
  if (config.analysis.t_hi) analysis["t_hi"] = *config.analysis.t_hi;
  return json{{"p", config.p},
              {"epsilon", config.epsilons.size() == 1 ? json(config.epsilons[0])
                                                      : json(config.epsilons)},
              {"profiles", {{"f", profile_to_json(config.f)},
                            {"g", profile_to_json(config.g)}}},
              {"grid", grid},
              {"t_final", config.t_final},
              {"observers", config.observers},
              {"analysis", analysis},
              {"nonlinear", config.nonlinear},
              {"linear_companion", config.linear_companion}};
}

Config config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  require_keys(j,
               {"p", "epsilon", "profiles", "grid", "t_final", "observers",
                "analysis", "nonlinear", "linear_companion"},
               "config");

  Config config;
  if (j.contains("p")) {
    if (!j.at("p").is_number_integer()) throw ConfigError("'p' must be an integer");
    config.p = j.at("p").get<int>();
    if (config.p < 3) throw ConfigError("'p' must be >= 3");
  }

  if (j.contains("epsilon")) {
    const json& eps = j.at("epsilon");
    config.epsilons.clear();
    if (eps.is_number()) {
      config.epsilons.push_back(eps.get<double>());
    } else if (eps.is_array() && !eps.empty()) {
      for (const auto& e : eps) {
        if (!e.is_number()) throw ConfigError("'epsilon' entries must be numbers");
        config.epsilons.push_back(e.get<double>());
      }
    } else {
      throw ConfigError("'epsilon' must be a number or a non-empty array");
    }
    for (double e : config.epsilons) {
      if (!(e >= 0.0)) throw ConfigError("'epsilon' must be >= 0");
    }
  }

  if (j.contains("profiles")) {
    const json& profiles = j.at("profiles");
    require_keys(profiles, {"f", "g"}, "profiles");
    if (profiles.contains("f")) config.f = profile_from_json(profiles.at("f"));
    if (profiles.contains("g")) config.g = profile_from_json(profiles.at("g"));
  }

  if (j.contains("grid")) {
    const json& grid = j.at("grid");
    require_keys(grid, {"N", "cfl", "r_max", "margin"}, "grid");
    if (grid.contains("N")) {
      if (!grid.at("N").is_number_integer()) throw ConfigError("grid 'N' must be an integer");
      config.grid.n_cells = grid.at("N").get<int>();
      if (config.grid.n_cells < 16) throw ConfigError("grid 'N' must be >= 16");
    }
    if (grid.contains("cfl")) {
      config.grid.cfl = number_at(grid, "cfl", "grid");
      if (!(config.grid.cfl > 0.0) || config.grid.cfl > 0.5) {
        throw ConfigError("grid 'cfl' must lie in (0, 0.5]");
      }
    }
    if (grid.contains("r_max")) config.grid.r_max = number_at(grid, "r_max", "grid");
    if (grid.contains("margin")) config.grid.margin = number_at(grid, "margin", "grid");
  }

  if (j.contains("t_final")) {
    config.t_final = number_at(j, "t_final", "config");
    if (!(config.t_final > 0.0)) throw ConfigError("'t_final' must be > 0");
  }

  if (j.contains("observers")) {
    if (!j.at("observers").is_array() || j.at("observers").empty()) {
      throw ConfigError("'observers' must be a non-empty array");
    }
    config.observers.clear();
    for (const auto& r : j.at("observers")) {
      if (!r.is_number()) throw ConfigError("'observers' entries must be numbers");
      config.observers.push_back(r.get<double>());
      if (config.observers.back() < 0.0) throw ConfigError("observer radius must be >= 0");
    }
  }

  if (j.contains("analysis")) {
    const json& analysis = j.at("analysis");
    require_keys(analysis, {"w_factor", "n_terms", "a_scale", "t_hi"}, "analysis");
    if (analysis.contains("w_factor")) {
      config.analysis.w_factor = number_at(analysis, "w_factor", "analysis");
      if (config.analysis.w_factor < 3.0) throw ConfigError("'w_factor' must be >= 3");
    }
    if (analysis.contains("n_terms")) {
      config.analysis.n_terms = analysis.at("n_terms").get<int>();
      if (config.analysis.n_terms < 0 || config.analysis.n_terms > 2) {
        throw ConfigError("'n_terms' must lie in [0, 2]");
      }
    }
    if (analysis.contains("a_scale")) {
      config.analysis.a_scale = number_at(analysis, "a_scale", "analysis");
    }
    if (analysis.contains("t_hi")) {
      config.analysis.t_hi = number_at(analysis, "t_hi", "analysis");
    }
  }

  if (j.contains("nonlinear")) config.nonlinear = j.at("nonlinear").get<bool>();
  if (j.contains("linear_companion")) {
    config.linear_companion = j.at("linear_companion").get<bool>();
  }

  // Causality check with the resolved outer boundary.
  const double r_max = config.resolved_r_max();
  if (!(config.t_final < r_max - config.max_observer() - config.support_radius())) {
    throw ConfigError("causality: t_final must be < r_max - max(observers) - R_support");
  }
  return config;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(j);
}

}  // namespace tailwave
