#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "tailwave/errors.hpp"
#include "tailwave/pipeline.hpp"

namespace {

// Exit-code contract: 0 ok, 1 verification failure, 2 config error,
// 3 numeric/quadrature failure, 4 blow-up.
constexpr int kExitOk = 0;
constexpr int kExitFailedChecks = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitBlowup = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tailwave: late-time tails of the semilinear wave equation "
               "box u = u^p in spherical symmetry"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  int resolution_factor = 1;

  const auto add_common = [&](CLI::App* cmd, bool with_factor) {
    cmd->add_option("--config", config_path, "JSON configuration file")->required();
    cmd->add_option("--out", out_dir, "output directory");
    if (with_factor) {
      cmd->add_option("--resolution-factor", resolution_factor,
                      "refine the grid by this integer factor")
          ->check(CLI::PositiveNumber);
    }
  };

  CLI::App* predict = app.add_subcommand("predict", "tail coefficients from the initial data");
  add_common(predict, false);
  CLI::App* evolve = app.add_subcommand("evolve", "evolve the field and record observers");
  add_common(evolve, true);
  CLI::App* analyze = app.add_subcommand("analyze", "fit exponents and coefficients of a stored run");
  add_common(analyze, false);
  CLI::App* verify = app.add_subcommand("verify", "predict + evolve + analyze, with pass/fail table");
  add_common(verify, false);
  CLI::App* sweep = app.add_subcommand("sweep", "independent runs over the epsilon list");
  add_common(sweep, true);

  CLI11_PARSE(app, argc, argv);

  try {
    const tailwave::Config config = tailwave::load_config(config_path);
    const std::filesystem::path out(out_dir);
    if (predict->parsed()) {
      tailwave::cmd_predict(config, out);
      std::printf("prediction written to %s\n", (out / "predict.json").c_str());
    } else if (evolve->parsed()) {
      tailwave::json meta = tailwave::cmd_evolve(config, out, resolution_factor);
      if (meta.at("epsilon_warning").get<bool>()) {
        std::fprintf(stderr, "warning: epsilon above the small-data threshold; "
                             "the tail expansion may not apply\n");
      }
      std::printf("run written to %s (%d steps, dr=%g, dt=%g)\n", out.c_str(),
                  meta.at("steps").get<int>(), meta.at("dr").get<double>(),
                  meta.at("dt").get<double>());
    } else if (analyze->parsed()) {
      tailwave::cmd_analyze(config, out);
      std::printf("analysis written to %s\n", (out / "analysis.json").c_str());
    } else if (verify->parsed()) {
      tailwave::json report = tailwave::cmd_verify(config, out);
      std::printf("%s", [&] {
        std::ifstream txt(out / "verify_report.txt");
        return std::string(std::istreambuf_iterator<char>(txt), {});
      }().c_str());
      if (!report.at("all_pass").get<bool>()) return kExitFailedChecks;
    } else if (sweep->parsed()) {
      tailwave::json report = tailwave::cmd_sweep(config, out, resolution_factor);
      std::printf("sweep finished: %zu runs, %d workers\n",
                  report.at("runs").size(), report.at("workers").get<int>());
    }
  } catch (const tailwave::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const tailwave::BlowupError& e) {
    std::fprintf(stderr, "blow-up detected at t = %g: %s\n", e.time, e.what());
    return kExitBlowup;
  } catch (const tailwave::QuadratureError& e) {
    std::fprintf(stderr, "quadrature error: %s\n", e.what());
    return kExitNumeric;
  } catch (const tailwave::DomainError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const tailwave::FitError& e) {
    std::fprintf(stderr, "fit error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailedChecks;
  }
  return kExitOk;
}
