#include "tailwave/io.hpp"

#include <cstdio>
#include <fstream>

#include "tailwave/errors.hpp"

namespace tailwave {

std::string observer_filename(double r_obs) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "obs_r%g.csv", r_obs);
  return buf;
}

void write_series_csv(const std::filesystem::path& path, const Series& series) {
  std::FILE* out = std::fopen(path.string().c_str(), "w");
  if (!out) throw Error("cannot open for writing: " + path.string());
  std::fputs("t,u\n", out);
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    std::fprintf(out, "%.17g,%.17g\n", series.t[i], series.u[i]);
  }
  std::fclose(out);
}

Series read_series_csv(const std::filesystem::path& path, double r_obs) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open series file: " + path.string());
  Series series;
  series.r_obs = r_obs;
  std::string line;
  if (!std::getline(in, line) || line != "t,u") {
    throw Error("bad series header in " + path.string());
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double t = 0.0;
    double u = 0.0;
    if (std::sscanf(line.c_str(), "%lg,%lg", &t, &u) != 2) {
      throw Error("bad series row in " + path.string() + ": " + line);
    }
    series.t.push_back(t);
    series.u.push_back(u);
  }
  return series;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open JSON file: " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

void write_run(const std::filesystem::path& dir, const EvolutionRun& run,
               const nlohmann::json& metadata) {
  std::filesystem::create_directories(dir);
  for (const Series& series : run.observer_series) {
    write_series_csv(dir / observer_filename(series.r_obs), series);
  }
  Series energy;
  energy.t = run.energy_t;
  energy.u = run.energy;
  std::FILE* out = std::fopen((dir / "energy.csv").string().c_str(), "w");
  if (!out) throw Error("cannot open for writing: " + (dir / "energy.csv").string());
  std::fputs("t,E\n", out);
  for (std::size_t i = 0; i < energy.t.size(); ++i) {
    std::fprintf(out, "%.17g,%.17g\n", energy.t[i], energy.u[i]);
  }
  std::fclose(out);
  write_json_file(dir / "run_meta.json", metadata);
}

std::vector<Series> read_run_series(const std::filesystem::path& dir,
                                    const std::vector<double>& observers) {
  std::vector<Series> result;
  result.reserve(observers.size());
  for (double r : observers) {
    result.push_back(read_series_csv(dir / observer_filename(r), r));
  }
  return result;
}

}  // namespace tailwave
