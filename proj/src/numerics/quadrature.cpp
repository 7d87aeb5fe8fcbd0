#include "invscat/numerics/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invscat/errors.hpp"

namespace invscat::numerics {

namespace {

constexpr std::size_t kMinPanelsPerPiece = 4;

std::vector<double> cut_points(double a, double b,
                               std::span<const double> breakpoints) {
  std::vector<double> cuts{a};
  std::vector<double> inner;
  for (double x : breakpoints) {
    if (x > a && x < b) inner.push_back(x);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(b);
  return cuts;
}

}  // namespace

SimpsonRule::SimpsonRule(double a, double b, double omega, int level,
                         std::span<const double> breakpoints,
                         double max_phase_per_panel) {
  if (!(a < b)) throw ValidationError("SimpsonRule: require a < b");
  if (level < 0) throw ValidationError("SimpsonRule: negative level");
  const double rate = std::abs(omega);
  const auto cuts = cut_points(a, b, breakpoints);

  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s];
    const double hi = cuts[s + 1];
    const double len = hi - lo;
    auto panels = static_cast<std::size_t>(
        std::ceil(len * rate / max_phase_per_panel));
    panels = std::max(panels, kMinPanelsPerPiece) << level;
    const std::size_t intervals = 2 * panels;
    const double dx = len / static_cast<double>(intervals);

    // Shared piece endpoints accumulate weight from both sides.
    const std::size_t first = (s == 0) ? 0 : 1;
    if (s > 0) weights_.back() += dx / 3.0;
    for (std::size_t i = first; i <= intervals; ++i) {
      const double x = (i == intervals) ? hi : lo + dx * static_cast<double>(i);
      double w;
      if (i == 0 || i == intervals) {
        w = dx / 3.0;
      } else {
        w = (i % 2 == 1) ? 4.0 * dx / 3.0 : 2.0 * dx / 3.0;
      }
      nodes_.push_back(x);
      weights_.push_back(w);
    }
  }
}

double integrate_oscillatory(const std::function<double(double)>& f, double a,
                             double b, double omega,
                             const QuadratureOptions& options) {
  if (!(a < b)) throw ValidationError("integrate_oscillatory: require a < b");

  auto apply = [&](const SimpsonRule& rule) {
    double sum = 0.0;
    const auto x = rule.nodes();
    const auto w = rule.weights();
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double fx = f(x[i]);
      if (!std::isfinite(fx)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "non-finite integrand value at q = " << x[i];
        throw NonFiniteIntegrandError(x[i], msg.str());
      }
      sum += w[i] * fx;
    }
    return sum;
  };

  double previous = apply(SimpsonRule(a, b, omega, 0, options.breakpoints,
                                      options.max_phase_per_panel));
  for (int level = 1; level <= options.max_doublings; ++level) {
    const double current = apply(SimpsonRule(
        a, b, omega, level, options.breakpoints, options.max_phase_per_panel));
    if (std::abs(current - previous) <= options.tolerance) return current;
    previous = current;
  }
  throw NumericalError("integrate_oscillatory: no convergence after " +
                       std::to_string(options.max_doublings) + " doublings");
}

}  // namespace invscat::numerics
