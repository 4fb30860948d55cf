#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailwave/analysis.hpp"
#include "tailwave/solver.hpp"

namespace tailwave {

/// Observer CSV file name: obs_r<value>.csv with %g-formatted radius.
std::string observer_filename(double r_obs);

/// Write header "t,u" and one %.17g row per sample; bit-exact round trip.
void write_series_csv(const std::filesystem::path& path, const Series& series);
Series read_series_csv(const std::filesystem::path& path, double r_obs);

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Write obs_r*.csv, energy.csv and run_meta.json for one evolution.
void write_run(const std::filesystem::path& dir, const EvolutionRun& run,
               const nlohmann::json& metadata);
std::vector<Series> read_run_series(const std::filesystem::path& dir,
                                    const std::vector<double>& observers);

}  // namespace tailwave
