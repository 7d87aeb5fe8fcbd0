#include "invscat/marchenko_solver.hpp"

#include <algorithm>
#include <cmath>

#include "invscat/csv.hpp"
#include "invscat/errors.hpp"
#include "invscat/numerics/dense_solver.hpp"
#include "invscat/numerics/finite_difference.hpp"

namespace invscat {

namespace {

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }
double when(bool a) { return a ? 1.0 : 0.0; }

void check_square(const numerics::Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
  }
}

// sum_n zeta(n, m, p) F_{n,j}; only n = m-1, m, m+1 contribute.
double zeta_dot(const KernelMatrix& kernel, int m, int p, std::size_t j) {
  const int last = static_cast<int>(kernel.n());
  double sum = 0.0;
  for (int n = std::max(0, m - 1); n <= std::min(last, m + 1); ++n) {
    sum += zeta(n, m, p, kernel.h()) * kernel(static_cast<std::size_t>(n), j);
  }
  return sum;
}

}  // namespace

double zeta(int n, int m, int p, double h) {
  return h / 6.0 *
         (2.0 * kron(n, m) * (kron(n, p) + 2.0 * when(n >= p + 1)) +
          kron(n, m - 1) * when(n >= p) + kron(n, m + 1) * when(m >= p));
}

KernelMatrix::KernelMatrix(double h, numerics::Matrix entries)
    : h_(h), entries_(std::move(entries)) {
  check_square(entries_, "KernelMatrix");
}

double KernelMatrix::max_abs() const {
  double worst = 0.0;
  for (double v : entries_.data()) worst = std::max(worst, std::abs(v));
  return worst;
}

KernelMatrix build_kernel_matrix(const KernelCoefficients& coeffs) {
  const auto size = static_cast<std::size_t>(coeffs.n() + 1);
  numerics::Matrix f(size, size);
  for (std::size_t k = 0; k < size; ++k) {
    for (std::size_t j = 0; j < size; ++j) f(k, j) = coeffs[static_cast<int>(k + j)];
  }
  return KernelMatrix(coeffs.h(), std::move(f));
}

SolutionMatrix::SolutionMatrix(double h, numerics::Matrix entries)
    : h_(h), entries_(std::move(entries)) {
  check_square(entries_, "SolutionMatrix");
}

PotentialGrid::PotentialGrid(double h, std::vector<double> values)
    : h_(h), values_(std::move(values)) {}

numerics::Matrix assemble_p_matrix(const KernelMatrix& kernel, std::size_t p) {
  const std::size_t size = kernel.n() + 1;
  if (p >= size) throw ValidationError("assemble_p_matrix: p out of range");
  auto a = numerics::Matrix::identity(size);
  for (std::size_t j = 0; j < size; ++j) {
    for (std::size_t m = 0; m < size; ++m) {
      a(j, m) += zeta_dot(kernel, static_cast<int>(m), static_cast<int>(p), j);
    }
  }
  return a;
}

std::vector<double> solve_p_system(const KernelMatrix& kernel, std::size_t p) {
  numerics::DenseSystem system{assemble_p_matrix(kernel, p), {}};
  const auto row = kernel.entries().row(p);
  system.rhs.reserve(row.size());
  for (double f : row) system.rhs.push_back(-f);
  try {
    return numerics::solve_dense(std::move(system));
  } catch (const SingularMatrixError& e) {
    throw SingularSystemError(
        p, e.pivot(),
        "Marchenko system for p = " + std::to_string(p) + " is singular (" + e.what() + ")");
  }
}

SolutionMatrix solve_all(const KernelMatrix& kernel) {
  const std::size_t size = kernel.n() + 1;
  numerics::Matrix p_matrix(size, size);
  for (std::size_t p = 0; p < size; ++p) {
    const auto row = solve_p_system(kernel, p);
    std::copy(row.begin(), row.end(), p_matrix.row(p).begin());
  }
  return SolutionMatrix(kernel.h(), std::move(p_matrix));
}

PotentialGrid extract_potential(const SolutionMatrix& solution) {
  if (solution.n() < 2) {
    throw ValidationError("extract_potential: need N >= 2 to differentiate the diagonal");
  }
  std::vector<double> diagonal;
  for (std::size_t p = 0; p <= solution.n(); ++p) diagonal.push_back(solution(p, p));
  auto v = numerics::central_difference(diagonal, solution.h());
  for (double& x : v) x *= -2.0;
  return PotentialGrid(solution.h(), std::move(v));
}

double marchenko_residual(const SolutionMatrix& solution, const KernelMatrix& kernel) {
  if (solution.n() != kernel.n()) {
    throw ValidationError("marchenko_residual: solution and kernel sizes differ");
  }
  const std::size_t size = kernel.n() + 1;
  double worst = 0.0;
  for (std::size_t p = 0; p < size; ++p) {
    for (std::size_t j = p; j < size; ++j) {
      double r = kernel(p, j) + solution(p, j);
      for (std::size_t m = 0; m < size; ++m) {
        r += solution(p, m) * zeta_dot(kernel, static_cast<int>(m), static_cast<int>(p), j);
      }
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

void save_potential_csv(const PotentialGrid& grid, const std::filesystem::path& path) {
  std::vector<double> r;
  for (std::size_t p = 0; p < grid.size(); ++p) r.push_back(grid.radius(p));
  csv::write_table(path, {"r", "V"},
                   {r, std::vector<double>(grid.values().begin(), grid.values().end())});
}

void save_solution_csv(const SolutionMatrix& solution, const std::filesystem::path& path) {
  std::vector<double> ps, ks, vs;
  for (std::size_t p = 0; p <= solution.n(); ++p) {
    for (std::size_t k = 0; k <= solution.n(); ++k) {
      ps.push_back(static_cast<double>(p));
      ks.push_back(static_cast<double>(k));
      vs.push_back(solution(p, k));
    }
  }
  csv::write_table(path, {"p", "k", "P"}, {ps, ks, vs});
}

}  // namespace invscat
