// invscat: forward scattering data, Marchenko inversion and round trips for
// s-wave potentials.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "invscat/app/commands.hpp"
#include "invscat/errors.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct Overrides {
  std::optional<std::string> config;
  std::optional<std::string> h, range, q_edge, q_points, window, out;
  std::optional<std::string> potential, depth, rate, radius, cutoff, table, forward_step;
};

invscat::app::RunConfig resolve(const Overrides& o) {
  invscat::app::RunConfig config;
  if (o.config) config = invscat::app::read_config_file(*o.config);
  const std::pair<const char*, const std::optional<std::string>*> keys[] = {
      {"h", &o.h},           {"R", &o.range},         {"q_edge", &o.q_edge},
      {"q_points", &o.q_points}, {"window", &o.window}, {"out", &o.out},
      {"potential", &o.potential}, {"depth", &o.depth}, {"rate", &o.rate},
      {"radius", &o.radius}, {"cutoff", &o.cutoff},   {"table", &o.table},
      {"forward_step", &o.forward_step}};
  for (const auto& [key, value] : keys) {
    if (*value) invscat::app::apply_setting(config, key, **value);
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse s-wave scattering by the algebraic Marchenko method"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "Flat key = value configuration file");
  app.add_option("--h", o.h, "Grid step h");
  app.add_option("--R", o.range, "Inversion range R (R/h integral)");
  app.add_option("--q-edge", o.q_edge, "Largest momentum with S-matrix data");
  app.add_option("--q-points", o.q_points, "Number of uniform S-matrix points on (0, q_edge]");
  app.add_option("--window", o.window, "Comparison window lo,hi");
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--potential", o.potential, "exp | well | table");
  app.add_option("--depth", o.depth, "Potential depth");
  app.add_option("--rate", o.rate, "Decay rate of the exp potential");
  app.add_option("--radius", o.radius, "Radius of the well potential");
  app.add_option("--cutoff", o.cutoff, "Cutoff radius of the exp potential");
  app.add_option("--table", o.table, "CSV r,V for potential=table");
  app.add_option("--forward-step", o.forward_step, "Largest radial integration step");

  auto* forward = app.add_subcommand("forward", "Generate scattering data from a potential");
  auto* invert = app.add_subcommand("invert", "Reconstruct the potential from a scattering CSV");
  auto* roundtrip = app.add_subcommand("roundtrip", "Forward, invert and compare");
  auto* kernel = app.add_subcommand("kernel", "Dump the kernel coefficients F0k");

  std::string data_path;
  invert->add_option("data", data_path, "Scattering CSV")->required();
  kernel->add_option("data", data_path, "Scattering CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const auto config = resolve(o);
    if (*forward) {
      const auto data = invscat::app::cmd_forward(config);
      std::cout << "wrote " << (config.out / "scattering.csv").string() << " ("
                << data.samples().size() << " points, " << data.bound_states().size()
                << " bound states, A=" << data.a() << ")\n";
    } else if (*invert) {
      const auto result = invscat::app::cmd_invert(config, data_path);
      std::cout << "wrote " << (config.out / "potential.csv").string()
                << " (consistency_residual=" << result.consistency_residual
                << ", marchenko_residual=" << result.marchenko_residual << ")\n";
    } else if (*roundtrip) {
      invscat::app::cmd_roundtrip(config, std::cout);
    } else if (*kernel) {
      invscat::app::cmd_kernel(config, data_path);
      std::cout << "wrote " << (config.out / "kernel.csv").string() << '\n';
    }
  } catch (const invscat::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
