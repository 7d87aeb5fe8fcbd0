#include "invscat/app/commands.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <system_error>
#include <unistd.h>

#include "invscat/csv.hpp"
#include "invscat/errors.hpp"
#include "invscat/numerics/dense_solver.hpp"

namespace invscat::app {

namespace {

void prepare_output(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string());
}

// Removes a scratch directory on scope exit.
class ScratchDir {
 public:
  ScratchDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("invscat-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write_diagnostics(const InversionResult& r, const ScatteringData& data,
                       const std::filesystem::path& path) {
  using csv::format_number;
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "h=" << format_number(r.coefficients.h()) << '\n'
      << "N=" << r.coefficients.n() << '\n'
      << "q_edge=" << format_number(data.q_edge()) << '\n'
      << "A=" << format_number(data.a()) << '\n'
      << "bound_states=" << data.bound_states().size() << '\n'
      << "consistency_residual=" << format_number(r.consistency_residual) << '\n'
      << "marchenko_residual=" << format_number(r.marchenko_residual) << '\n'
      << "marchenko_residual_bound=" << format_number(r.marchenko_residual_bound) << '\n';
  double worst = 0.0;
  std::size_t worst_p = 0;
  std::vector<std::size_t> flagged;
  for (std::size_t p = 0; p < r.condition.size(); ++p) {
    if (r.condition[p] > worst) {
      worst = r.condition[p];
      worst_p = p;
    }
    if (r.condition[p] > kConditionWarning) flagged.push_back(p);
  }
  out << "max_condition=" << format_number(worst) << '\n'
      << "max_condition_p=" << worst_p << '\n'
      << "condition_warning_threshold=" << format_number(kConditionWarning) << '\n'
      << "condition_warnings=";
  if (flagged.empty()) out << "none";
  for (std::size_t i = 0; i < flagged.size(); ++i) out << (i ? " " : "") << flagged[i];
  out << '\n';
}

}  // namespace

InversionResult invert(const ScatteringData& data, double h, int n) {
  const auto evaluator = build_y_evaluator(data);
  auto coefficients = recover_coefficients(evaluator, h, n);
  const double consistency = consistency_residual(evaluator, coefficients);
  auto kernel = build_kernel_matrix(coefficients);

  std::vector<double> condition;
  for (std::size_t p = 0; p <= kernel.n(); ++p) {
    auto a = assemble_p_matrix(kernel, p);
    const double norm = numerics::norm_inf(a);
    try {
      condition.push_back(norm * numerics::LuFactorization(std::move(a)).inverse_norm_inf());
    } catch (const SingularMatrixError& e) {
      throw SingularSystemError(p, e.pivot(),
                                "Marchenko system for p = " + std::to_string(p) +
                                    " is singular (" + e.what() + ")");
    }
  }

  auto solution = solve_all(kernel);
  auto potential = extract_potential(solution);
  const double residual = marchenko_residual(solution, kernel);
  const double bound = 1e-9 * (1.0 + kernel.max_abs());
  return InversionResult{std::move(coefficients), std::move(kernel), std::move(solution),
                         std::move(potential), consistency, residual, bound,
                         std::move(condition)};
}

ScatteringData generate_data(const Potential& potential, const RunConfig& config) {
  IntegratorOptions options;
  options.max_step = config.forward_step;
  const auto grid = config.q_grid();
  const auto table = s_matrix_table(potential, grid, options);
  return ScatteringData::from_table(table, find_bound_states(potential, options));
}

ErrorMetrics compare(const PotentialGrid& reconstructed, const Potential& input,
                     double window_lo, double window_hi, std::size_t stride) {
  if (stride == 0) throw ValidationError("compare: stride must be >= 1");
  ErrorMetrics m{0.0, 0.0, 0};
  double err2 = 0.0, ref2 = 0.0;
  const double slack = 1e-9 * reconstructed.h();
  for (std::size_t p = 0; p < reconstructed.size(); p += stride) {
    const double r = reconstructed.radius(p);
    if (r < window_lo - slack || r > window_hi + slack) continue;
    const double ref = input(r);
    const double err = reconstructed[p] - ref;
    m.max_abs = std::max(m.max_abs, std::abs(err));
    err2 += err * err;
    ref2 += ref * ref;
    ++m.points;
  }
  if (m.points == 0) throw ValidationError("compare: window contains no grid points");
  m.rel_l2 = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
  return m;
}

ScatteringData cmd_forward(const RunConfig& config) {
  config.validate();
  const auto potential = make_potential(config.potential);
  IntegratorOptions options;
  options.max_step = config.forward_step;
  const auto table = s_matrix_table(potential, config.q_grid(), options);
  auto data = ScatteringData::from_table(table, find_bound_states(potential, options));

  prepare_output(config.out);
  save_scattering_csv(data, config.out / "scattering.csv");
  std::vector<double> q, delta;
  for (const auto& e : table.entries()) {
    q.push_back(e.q);
    delta.push_back(e.delta);
  }
  csv::write_table(config.out / "phase_shifts.csv", {"q", "delta"}, {q, delta});
  write_config_snapshot(config, config.out);
  return data;
}

InversionResult cmd_invert(const RunConfig& config, const std::filesystem::path& data_path) {
  config.validate();
  const auto data = load_scattering_csv(data_path);
  auto result = invert(data, config.h, config.n());

  prepare_output(config.out);
  save_potential_csv(result.potential, config.out / "potential.csv");
  write_diagnostics(result, data, config.out / "diagnostics");
  write_config_snapshot(config, config.out);
  return result;
}

ErrorMetrics cmd_roundtrip(const RunConfig& config, std::ostream& report) {
  config.validate();
  const auto potential = make_potential(config.potential);

  ScratchDir scratch;
  auto forward = config;
  forward.out = scratch.path() / "forward";
  cmd_forward(forward);
  auto inverse = config;
  inverse.out = scratch.path() / "invert";
  const auto result = cmd_invert(inverse, forward.out / "scattering.csv");

  const auto metrics =
      compare(result.potential, potential, config.window_lo, config.window_hi);

  prepare_output(config.out);
  std::vector<double> r, v_in, v_rec;
  for (std::size_t p = 0; p < result.potential.size(); ++p) {
    r.push_back(result.potential.radius(p));
    v_in.push_back(potential(r.back()));
    v_rec.push_back(result.potential[p]);
  }
  csv::write_table(config.out / "comparison.csv", {"r", "V_input", "V_reconstructed"},
                   {r, v_in, v_rec});
  std::filesystem::copy_file(inverse.out / "diagnostics", config.out / "diagnostics",
                             std::filesystem::copy_options::overwrite_existing);

  std::ofstream out(config.out / "metrics");
  if (!out) throw ValidationError("cannot write " + (config.out / "metrics").string());
  const std::string text = "window=" + csv::format_number(config.window_lo) + "," +
                           csv::format_number(config.window_hi) + "\n" +
                           "points=" + std::to_string(metrics.points) + "\n" +
                           "max_abs_error=" + csv::format_number(metrics.max_abs) + "\n" +
                           "rel_l2_error=" + csv::format_number(metrics.rel_l2) + "\n";
  out << text;
  write_config_snapshot(config, config.out);
  report << text;
  return metrics;
}

KernelCoefficients cmd_kernel(const RunConfig& config, const std::filesystem::path& data_path) {
  config.validate();
  const auto data = load_scattering_csv(data_path);
  auto coefficients = recover_coefficients(build_y_evaluator(data), config.h, config.n());
  prepare_output(config.out);
  save_kernel_csv(coefficients, config.out / "kernel.csv");
  write_config_snapshot(config, config.out);
  return coefficients;
}

}  // namespace invscat::app
