#include "invscat/numerics/dense_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "invscat/errors.hpp"

namespace invscat::numerics {

LuFactorization::LuFactorization(Matrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw ValidationError("LuFactorization: matrix is not square");
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  if (n == 0) return;

  double scale = 0.0;
  for (double v : lu_.data()) {
    if (!std::isfinite(v)) throw NumericalError("LuFactorization: non-finite matrix entry");
    scale = std::max(scale, std::abs(v));
  }
  const double threshold = kSingularPivotRatio * scale;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (scale == 0.0 || best <= threshold) {
      throw SingularMatrixError(
          k, "numerically singular matrix at pivot " + std::to_string(k));
    }
    if (piv != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(piv).begin());
      std::swap(perm_[k], perm_[piv]);
    }
    const auto pivot_row = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto target = lu_.row(i);
      const double factor = target[k] / pivot_row[k];
      target[k] = factor;
      if (factor == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) target[j] -= factor * pivot_row[j];
    }
  }
}

std::vector<double> LuFactorization::solve(std::span<const double> rhs) const {
  const std::size_t n = order();
  if (rhs.size() != n) throw ValidationError("LuFactorization: rhs length mismatch");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = rhs[perm_[i]];
    const auto r = lu_.row(i);
    for (std::size_t j = 0; j < i; ++j) sum -= r[j] * x[j];
    x[i] = sum;
  }
  for (std::size_t i = n; i-- > 0;) {
    double sum = x[i];
    const auto r = lu_.row(i);
    for (std::size_t j = i + 1; j < n; ++j) sum -= r[j] * x[j];
    x[i] = sum / r[i];
  }
  return x;
}

double LuFactorization::inverse_norm_inf() const {
  const std::size_t n = order();
  std::vector<double> row_sums(n, 0.0);
  std::vector<double> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    e[c] = 1.0;
    const auto column = solve(e);
    e[c] = 0.0;
    for (std::size_t r = 0; r < n; ++r) row_sums[r] += std::abs(column[r]);
  }
  return n ? *std::max_element(row_sums.begin(), row_sums.end()) : 0.0;
}

std::vector<double> solve_dense(DenseSystem system) {
  if (system.rhs.size() != system.matrix.rows()) {
    throw ValidationError("solve_dense: rhs length does not match matrix order");
  }
  if (system.matrix.rows() != system.matrix.cols()) {
    throw ValidationError("solve_dense: matrix is not square");
  }
  return LuFactorization(std::move(system.matrix)).solve(system.rhs);
}

double residual_inf(const Matrix& a, std::span<const double> x,
                    std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = -b[i];
    const auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) sum += r[j] * x[j];
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

double norm_inf(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double sum = 0.0;
    for (double v : a.row(i)) sum += std::abs(v);
    worst = std::max(worst, sum);
  }
  return worst;
}

double norm_inf(std::span<const double> v) {
  double worst = 0.0;
  for (double x : v) worst = std::max(worst, std::abs(x));
  return worst;
}

}  // namespace invscat::numerics
