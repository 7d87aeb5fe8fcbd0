#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "invscat/app/run_config.hpp"
#include "invscat/marchenko_solver.hpp"
#include "invscat/scattering_data.hpp"

namespace invscat::app {

// Rows whose system condition number exceeds this are flagged.
inline constexpr double kConditionWarning = 1e8;

struct InversionResult {
  KernelCoefficients coefficients;
  KernelMatrix kernel;
  SolutionMatrix solution;
  PotentialGrid potential;
  double consistency_residual;
  double marchenko_residual;
  // 1e-9 * (1 + max|F|)
  double marchenko_residual_bound;
  // infinity-norm condition number of each row system, p = 0..N
  std::vector<double> condition;
};

// Y(q) -> kernel coefficients -> Marchenko rows -> V(ph).
InversionResult invert(const ScatteringData& data, double h, int n);

// S-matrix on the configured grid plus bound states, tail matched at q_edge.
ScatteringData generate_data(const Potential& potential, const RunConfig& config);

struct ErrorMetrics {
  double max_abs;
  // ||V_rec - V_in||_2 / ||V_in||_2, or the plain norm when V_in vanishes.
  double rel_l2;
  std::size_t points;
};

// Compares grid points r = p h with window.lo <= r <= window.hi, taking every
// stride-th point.
ErrorMetrics compare(const PotentialGrid& reconstructed, const Potential& input,
                     double window_lo, double window_hi, std::size_t stride = 1);

// Writes scattering.csv, phase_shifts.csv and config into config.out.
ScatteringData cmd_forward(const RunConfig& config);

// Writes potential.csv, diagnostics and config into config.out.
InversionResult cmd_invert(const RunConfig& config, const std::filesystem::path& data_path);

// Forward then invert in a scratch directory; writes comparison.csv,
// metrics and config into config.out and prints the metrics to `report`.
ErrorMetrics cmd_roundtrip(const RunConfig& config, std::ostream& report);

// Writes kernel.csv and config into config.out.
KernelCoefficients cmd_kernel(const RunConfig& config, const std::filesystem::path& data_path);

}  // namespace invscat::app
