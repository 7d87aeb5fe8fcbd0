#pragma once

#include <span>
#include <vector>

namespace invscat::numerics {

// C1 piecewise-quadratic interpolant. Pieces join at the midpoints between
// consecutive interior samples, so every sample except the two at each end
// sits inside its own piece; this keeps the interpolation problem banded and
// stable. Reproduces quadratics exactly.
class QuadraticSpline {
 public:
  // Requires >= 3 samples with strictly increasing x.
  QuadraticSpline(std::span<const double> x, std::span<const double> y);

  // Throws ValidationError outside [front(), back()].
  double operator()(double x) const;
  double derivative(double x) const;

  // Evaluates the end piece's quadratic beyond the sample range.
  double extrapolate(double x) const;

  double front() const noexcept { return knots_.front(); }
  double back() const noexcept { return knots_.back(); }

  // Piece boundaries: first sample, midpoints, last sample.
  std::span<const double> knots() const noexcept { return knots_; }

 private:
  std::size_t piece(double x) const;
  double eval(std::size_t i, double x) const;

  std::vector<double> knots_;
  // spline value and slope at each knot
  std::vector<double> values_;
  std::vector<double> slopes_;
};

struct Sample {
  double x;
  double y;
};

QuadraticSpline fit_quadratic_spline(std::span<const Sample> samples);

}  // namespace invscat::numerics
