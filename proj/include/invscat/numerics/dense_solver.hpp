#pragma once

#include <span>
#include <vector>

#include "invscat/numerics/matrix.hpp"

namespace invscat::numerics {

struct DenseSystem {
  Matrix matrix;
  std::vector<double> rhs;
};

// Pivots smaller than this fraction of max|A_ij| mark the matrix singular.
inline constexpr double kSingularPivotRatio = 1e-14;

// PA = LU with partial pivoting, L unit lower triangular. Throws
// SingularMatrixError carrying the elimination step whose pivot fell below
// the threshold.
class LuFactorization {
 public:
  explicit LuFactorization(Matrix a);

  std::size_t order() const noexcept { return lu_.rows(); }
  std::vector<double> solve(std::span<const double> rhs) const;

  // ||A^{-1}||_inf by n back-substitutions.
  double inverse_norm_inf() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
};

std::vector<double> solve_dense(DenseSystem system);

// ||Ax - b||_inf
double residual_inf(const Matrix& a, std::span<const double> x,
                    std::span<const double> b);

double norm_inf(const Matrix& a);
double norm_inf(std::span<const double> v);

}  // namespace invscat::numerics
