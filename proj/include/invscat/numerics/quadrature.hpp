#pragma once

#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace invscat::numerics {

struct QuadratureOptions {
  // Absolute tolerance on the returned integral, checked by panel halving.
  double tolerance = 1e-9;
  // Largest phase advance omega * width allowed on one Simpson panel.
  double max_phase_per_panel = std::numbers::pi / 8;
  int max_doublings = 14;
  // Points inside (a, b) where the integrand is not smooth (spline knots,
  // seams). Panels never straddle them.
  std::vector<double> breakpoints;
};

// Composite Simpson nodes and weights on [a, b]. The interval is cut at the
// breakpoints; each piece gets enough panels that omega * panel_width stays
// under the phase limit, times 2^level.
class SimpsonRule {
 public:
  SimpsonRule(double a, double b, double omega, int level,
              std::span<const double> breakpoints,
              double max_phase_per_panel = std::numbers::pi / 8);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Integral of f over [a, b] for an integrand carrying a factor with phase
// rate omega. Panels are halved until two successive Simpson estimates agree
// to options.tolerance. Throws NonFiniteIntegrandError on a NaN/inf sample
// and NumericalError when max_doublings is exhausted.
double integrate_oscillatory(const std::function<double(double)>& f, double a,
                             double b, double omega,
                             const QuadratureOptions& options = {});

}  // namespace invscat::numerics
