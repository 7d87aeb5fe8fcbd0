#include "invscat/numerics/quadratic_spline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "invscat/errors.hpp"
#include "invscat/numerics/dense_solver.hpp"

namespace invscat::numerics {

QuadraticSpline::QuadraticSpline(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("QuadraticSpline: x and y sizes differ");
  const std::size_t n = x.size();
  if (n < 3) throw ValidationError("QuadraticSpline: need at least 3 samples");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ValidationError("QuadraticSpline: non-finite sample " + std::to_string(i));
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      std::ostringstream msg;
      msg << "QuadraticSpline: abscissae not strictly increasing at index " << i;
      throw ValidationError(msg.str());
    }
  }

  knots_.push_back(x[0]);
  for (std::size_t i = 1; i + 2 < n; ++i) knots_.push_back(0.5 * (x[i] + x[i + 1]));
  knots_.push_back(x[n - 1]);
  const std::size_t k = knots_.size();  // n - 1

  // Unknowns: value s_j (index j) and slope d_j (index k + j) at each knot.
  // Equations: one per sample, plus value continuity across each piece
  //   s_{j+1} - s_j - w_j (d_j + d_{j+1}) / 2 = 0.
  const std::size_t size = 2 * k;
  Matrix a(size, size);
  std::vector<double> rhs(size, 0.0);
  std::size_t row = 0;
  for (std::size_t i = 0; i < n; ++i, ++row) {
    const std::size_t j = piece(x[i]);
    const double w = knots_[j + 1] - knots_[j];
    const double t = x[i] - knots_[j];
    a(row, j) = 1.0;
    a(row, k + j) = t - t * t / (2.0 * w);
    a(row, k + j + 1) = t * t / (2.0 * w);
    rhs[row] = y[i];
  }
  for (std::size_t j = 0; j + 1 < k; ++j, ++row) {
    const double w = knots_[j + 1] - knots_[j];
    a(row, j + 1) = 1.0;
    a(row, j) = -1.0;
    a(row, k + j) = -0.5 * w;
    a(row, k + j + 1) = -0.5 * w;
  }
  const auto z = solve_dense({std::move(a), std::move(rhs)});
  values_.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k));
  slopes_.assign(z.begin() + static_cast<std::ptrdiff_t>(k), z.end());
}

std::size_t QuadraticSpline::piece(double x) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const auto idx = static_cast<std::ptrdiff_t>(it - knots_.begin()) - 1;
  const auto last = static_cast<std::ptrdiff_t>(knots_.size()) - 2;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, last));
}

double QuadraticSpline::eval(std::size_t i, double x) const {
  const double t = x - knots_[i];
  const double width = knots_[i + 1] - knots_[i];
  const double curvature = (slopes_[i + 1] - slopes_[i]) / (2.0 * width);
  return values_[i] + t * (slopes_[i] + t * curvature);
}

double QuadraticSpline::operator()(double x) const {
  if (!(x >= front() && x <= back())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "QuadraticSpline: x = " << x << " outside [" << front() << ", " << back() << "]";
    throw ValidationError(msg.str());
  }
  return eval(piece(x), x);
}

double QuadraticSpline::derivative(double x) const {
  if (!(x >= front() && x <= back())) {
    throw ValidationError("QuadraticSpline: derivative outside sample range");
  }
  const std::size_t i = piece(x);
  const double t = x - knots_[i];
  const double width = knots_[i + 1] - knots_[i];
  return slopes_[i] + t * (slopes_[i + 1] - slopes_[i]) / width;
}

double QuadraticSpline::extrapolate(double x) const { return eval(piece(x), x); }

QuadraticSpline fit_quadratic_spline(std::span<const Sample> samples) {
  std::vector<double> x, y;
  x.reserve(samples.size());
  y.reserve(samples.size());
  for (const auto& s : samples) {
    x.push_back(s.x);
    y.push_back(s.y);
  }
  return QuadraticSpline(x, y);
}

}  // namespace invscat::numerics
