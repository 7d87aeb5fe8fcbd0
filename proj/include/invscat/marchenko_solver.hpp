#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "invscat/kernel_recovery.hpp"
#include "invscat/numerics/matrix.hpp"

// Separable solution of the s-wave Marchenko equation
//   F(x, y) + L(x, y) + int_x^inf L(x, t) F(t, y) dt = 0
// with F and L(x, .) expanded in hat functions of width 2h centred on nh.
// Row p of the solution holds L(ph, .) in that basis; V(r) = -2 dL(r, r)/dr.

namespace invscat {

// int_{ph}^inf Delta_m(t) Delta_n(t) dt for hat functions Delta_n centred at
// nh. Zero unless |n - m| <= 1.
double zeta(int n, int m, int p, double h);

// F_{k,j} = F_{k+j}, k, j = 0..N.
class KernelMatrix {
 public:
  KernelMatrix(double h, numerics::Matrix entries);

  double h() const noexcept { return h_; }
  std::size_t n() const noexcept { return entries_.rows() - 1; }
  double operator()(std::size_t k, std::size_t j) const { return entries_(k, j); }
  const numerics::Matrix& entries() const noexcept { return entries_; }
  double max_abs() const;

 private:
  double h_;
  numerics::Matrix entries_;
};

KernelMatrix build_kernel_matrix(const KernelCoefficients& coeffs);

// P_{p,k} = P_k(ph), p, k = 0..N.
class SolutionMatrix {
 public:
  SolutionMatrix(double h, numerics::Matrix entries);

  double h() const noexcept { return h_; }
  std::size_t n() const noexcept { return entries_.rows() - 1; }
  double operator()(std::size_t p, std::size_t k) const { return entries_(p, k); }
  const numerics::Matrix& entries() const noexcept { return entries_; }

 private:
  double h_;
  numerics::Matrix entries_;
};

class PotentialGrid {
 public:
  PotentialGrid(double h, std::vector<double> values);

  double h() const noexcept { return h_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double radius(std::size_t p) const noexcept { return h_ * static_cast<double>(p); }
  double operator[](std::size_t p) const { return values_[p]; }

 private:
  double h_;
  std::vector<double> values_;
};

// The (N+1)x(N+1) system for row p:
//   sum_m (delta_jm + sum_n zeta(n, m, p) F_{n,j}) P_{p,m} = -F_{p,j}.
numerics::Matrix assemble_p_matrix(const KernelMatrix& kernel, std::size_t p);

// Throws SingularSystemError naming p.
std::vector<double> solve_p_system(const KernelMatrix& kernel, std::size_t p);

SolutionMatrix solve_all(const KernelMatrix& kernel);

// V(ph) = -2 d/dr P_{p,p}; needs N >= 2.
PotentialGrid extract_potential(const SolutionMatrix& solution);

// Max over p <= j of |F_{p,j} + P_{p,j} + sum_{m,n} P_{p,m} zeta(n,m,p) F_{n,j}|.
double marchenko_residual(const SolutionMatrix& solution, const KernelMatrix& kernel);

// CSV "r,V".
void save_potential_csv(const PotentialGrid& grid, const std::filesystem::path& path);
// CSV "p,k,P" in row-major order.
void save_solution_csv(const SolutionMatrix& solution, const std::filesystem::path& path);

}  // namespace invscat
