#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <cmath>
#include <sstream>

#include "tailwave/config.hpp"
#include "tailwave/io.hpp"
#include "tailwave/pipeline.hpp"

using namespace tailwave;
namespace fs = std::filesystem;

namespace {

json sample_config_json() {
  return json::parse(R"({
    "p": 3,
    "epsilon": 0.05,
    "profiles": {
      "f": {"family": "zero"},
      "g": {"family": "poly_bump", "amplitude": 1.0, "radius": 1.0, "m": 3}
    },
    "grid": {"N": 8000, "cfl": 0.5},
    "t_final": 100.0,
    "observers": [0.5, 1.0, 2.0],
    "analysis": {"w_factor": 5.0, "n_terms": 2, "a_scale": 1.0}
  })");
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("tailwave_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing and defaults") {
  const Config config = config_from_json(sample_config_json());
  CHECK(config.p == 3);
  CHECK(config.epsilons == std::vector<double>{0.05});
  CHECK(config.f.is_zero());
  CHECK(config.g.family == ProfileFamily::poly_bump);
  CHECK(config.g.smoothness == 3);
  CHECK(config.grid.n_cells == 8000);
  CHECK(config.t_final == 100.0);
  CHECK(config.resolved_r_max() == doctest::Approx(1.0 + 100.0 + 2.0 + 4.0));
  CHECK(config.support_radius() == 1.0);
}

TEST_CASE("config round trip through JSON") {
  Config config = config_from_json(sample_config_json());
  config.epsilons = {0.05, 0.1, 0.2};
  config.linear_companion = true;
  const Config redone = config_from_json(config_to_json(config));
  CHECK(redone.p == config.p);
  CHECK(redone.epsilons == config.epsilons);
  CHECK(redone.g.amplitude == config.g.amplitude);
  CHECK(redone.g.radius == config.g.radius);
  CHECK(redone.g.smoothness == config.g.smoothness);
  CHECK(redone.grid.n_cells == config.grid.n_cells);
  CHECK(redone.grid.cfl == config.grid.cfl);
  CHECK(redone.t_final == config.t_final);
  CHECK(redone.observers == config.observers);
  CHECK(redone.analysis.w_factor == config.analysis.w_factor);
  CHECK(redone.analysis.n_terms == config.analysis.n_terms);
  CHECK(redone.analysis.a_scale == config.analysis.a_scale);
  CHECK(redone.nonlinear == config.nonlinear);
  CHECK(redone.linear_companion == config.linear_companion);
  CHECK(config_to_json(redone) == config_to_json(config));
}

TEST_CASE("invalid configs are rejected") {
  json bad = sample_config_json();
  bad["p"] = 2;
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);

  bad = sample_config_json();
  bad["grid"]["cfl"] = 0.9;
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);

  bad = sample_config_json();
  bad["observers"] = json::array();
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);

  bad = sample_config_json();
  bad["grid"]["r_max"] = 20.0;  // violates causality for t_final = 100
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);

  bad = sample_config_json();
  bad["unknown_key"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);

  bad = sample_config_json();
  bad["profiles"]["g"]["m"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
}

TEST_CASE("series CSV round trip is bit exact") {
  const fs::path dir = temp_dir("csv");
  Series series;
  series.r_obs = 0.5;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    series.t.push_back(i * 0.01);
    series.u.push_back(dist(rng) * std::pow(10.0, i % 17 - 8));
  }
  const fs::path path = dir / observer_filename(series.r_obs);
  CHECK(path.filename() == "obs_r0.5.csv");
  write_series_csv(path, series);
  const Series redone = read_series_csv(path, series.r_obs);
  REQUIRE(redone.t.size() == series.t.size());
  for (std::size_t i = 0; i < series.t.size(); ++i) {
    CHECK(redone.t[i] == series.t[i]);
    CHECK(redone.u[i] == series.u[i]);
  }
}

TEST_CASE("observer filenames use %g formatting") {
  CHECK(observer_filename(1.0) == "obs_r1.csv");
  CHECK(observer_filename(2.0) == "obs_r2.csv");
  CHECK(observer_filename(0.25) == "obs_r0.25.csv");
}

TEST_CASE("evolve output is deterministic byte for byte") {
  json j = sample_config_json();
  j["grid"]["N"] = 400;
  j["t_final"] = 8.0;
  j["grid"]["r_max"] = 12.0;
  j["observers"] = {0.5, 1.0};
  const Config config = config_from_json(j);

  const fs::path dir1 = temp_dir("det1");
  const fs::path dir2 = temp_dir("det2");
  cmd_evolve(config, dir1);
  cmd_evolve(config, dir2);
  for (const char* name : {"obs_r0.5.csv", "obs_r1.csv", "energy.csv"}) {
    CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    CHECK(!slurp(dir1 / name).empty());
  }
}

TEST_CASE("evolve rejects epsilon lists") {
  json j = sample_config_json();
  j["epsilon"] = {0.05, 0.1};
  const Config config = config_from_json(j);
  CHECK_THROWS_AS(cmd_evolve(config, temp_dir("list")), ConfigError);
}

TEST_CASE("predict report matches the committed golden file") {
  const Config config = config_from_json(sample_config_json());
  const fs::path dir = temp_dir("predict");
  const json report = cmd_predict(config, dir);
  const json golden = read_json_file(fs::path(TAILWAVE_TEST_DIR) / "golden" /
                                     "predict_reference.json");
  const json& got = report.at("predictions")[0];
  const json& want = golden.at("predictions")[0];
  CHECK(got.at("p") == want.at("p"));
  CHECK(got.at("epsilon").get<double>() == want.at("epsilon").get<double>());
  CHECK(got.at("nonGeneric") == want.at("nonGeneric"));
  CHECK(got.at("lambda0").get<double>() ==
        doctest::Approx(want.at("lambda0").get<double>()).epsilon(1e-12));
  // C and B carry the quadrature's absolute tolerance; A inherits it scaled
  // by the small prefactor 2 eps^3 * factor.
  for (const char* key : {"C", "B", "A"}) {
    const double abs_tol = std::string(key) == "A" ? 1e-12 : 5e-10;
    REQUIRE(got.at(key).size() == want.at(key).size());
    for (std::size_t i = 0; i < got.at(key).size(); ++i) {
      const double g = got.at(key)[i].get<double>();
      const double w = want.at(key)[i].get<double>();
      CHECK(std::abs(g - w) < abs_tol);
    }
  }
}

TEST_CASE("predict flags the non-generic branch for time-symmetric data") {
  json j = sample_config_json();
  j["profiles"]["f"] = {{"family", "poly_bump"}, {"amplitude", 1.0},
                        {"radius", 1.0}, {"m", 4}};
  j["profiles"]["g"] = {{"family", "zero"}};
  const Config config = config_from_json(j);
  const json report = cmd_predict(config, temp_dir("nongen"));
  const json& pred = report.at("predictions")[0];
  CHECK(pred.at("nonGeneric").get<bool>());
  CHECK(std::abs(pred.at("A")[0].get<double>()) < 1e-15);
}

TEST_CASE("doubling epsilon scales A by 8") {
  json j = sample_config_json();
  j["epsilon"] = {0.05, 0.1};
  const Config config = config_from_json(j);
  const json report = cmd_predict(config, temp_dir("eps8"));
  const json& lo = report.at("predictions")[0];
  const json& hi = report.at("predictions")[1];
  for (std::size_t k = 0; k < lo.at("A").size(); ++k) {
    CHECK(hi.at("A")[k].get<double>() == 8.0 * lo.at("A")[k].get<double>());
  }
}

TEST_CASE("resolution factors give fourth-order Richardson consistency") {
  json j = sample_config_json();
  j["grid"]["N"] = 300;
  j["grid"]["r_max"] = 12.0;
  j["t_final"] = 8.0;
  j["observers"] = {1.0};
  j["nonlinear"] = false;
  j["profiles"]["g"]["m"] = 6;
  const Config config = config_from_json(j);

  // Halving dr halves dt, so coarse sample times appear in every finer run.
  std::vector<Series> series;
  for (int factor : {1, 2, 4}) {
    const fs::path dir = temp_dir("rf" + std::to_string(factor));
    cmd_evolve(config, dir, factor);
    series.push_back(read_series_csv(dir / "obs_r1.csv", 1.0));
  }
  double d12 = 0.0;
  double d24 = 0.0;
  for (std::size_t i = 0; i < series[0].t.size(); ++i) {
    CHECK(series[1].t[2 * i] == series[0].t[i]);
    d12 = std::max(d12, std::abs(series[0].u[i] - series[1].u[2 * i]));
    d24 = std::max(d24, std::abs(series[1].u[2 * i] - series[2].u[4 * i]));
  }
  const double order = std::log2(d12 / d24);
  CHECK(std::abs(order - 4.0) < 0.5);
}

TEST_CASE("sweep runs every epsilon into its own directory") {
  json j = sample_config_json();
  j["epsilon"] = {0.1, 0.2};
  j["grid"]["N"] = 300;
  j["grid"]["r_max"] = 12.0;
  j["t_final"] = 8.0;
  j["observers"] = {1.0};
  const Config config = config_from_json(j);
  const fs::path dir = temp_dir("sweep");
  setenv("TAILWAVE_THREADS", "2", 1);
  const json report = cmd_sweep(config, dir);
  unsetenv("TAILWAVE_THREADS");
  CHECK(report.at("runs").size() == 2);
  CHECK(fs::exists(dir / "eps_0.1" / "obs_r1.csv"));
  CHECK(fs::exists(dir / "eps_0.2" / "obs_r1.csv"));
  CHECK(fs::exists(dir / "sweep.json"));
}

TEST_CASE("analyze and verify are p = 3 specific") {
  json j = sample_config_json();
  j["p"] = 5;
  const Config config = config_from_json(j);
  CHECK_THROWS_AS(cmd_verify(config, temp_dir("p5")), ConfigError);
  CHECK_THROWS_AS(cmd_analyze(config, temp_dir("p5a")), ConfigError);
}

TEST_CASE("worker count respects the environment cap") {
  setenv("TAILWAVE_THREADS", "2", 1);
  CHECK(worker_count(8) == 2);
  CHECK(worker_count(1) == 1);
  unsetenv("TAILWAVE_THREADS");
}
