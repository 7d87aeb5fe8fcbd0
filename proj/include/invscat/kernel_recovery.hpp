#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "invscat/numerics/quadrature.hpp"
#include "invscat/scattering_data.hpp"

// Recovery of the s-wave Marchenko kernel F(x) from Y(q). F is expanded in
// unit boxes H_k = 1 on [kh, (k+1)h], k = -2N..2N, whose Fourier transforms
// make q Y(q) a trigonometric series in e^{-iqhk}. Its coefficients are the
// differences F_{k-1} - F_k and follow from Im(q Y e^{iqhk}) moments over
// 0 <= q <= pi/h, using Y(-q) = conj(Y(q)).

namespace invscat {

class KernelCoefficients {
 public:
  // values[k + 2N] = F_k for k = -2N..2N.
  KernelCoefficients(double h, int n, std::vector<double> values);

  double h() const noexcept { return h_; }
  int n() const noexcept { return n_; }
  int k_min() const noexcept { return -2 * n_; }
  int k_max() const noexcept { return 2 * n_; }

  double operator[](int k) const { return values_[static_cast<std::size_t>(k + 2 * n_)]; }
  double at(int k) const;
  std::span<const double> values() const noexcept { return values_; }

 private:
  double h_;
  int n_;
  std::vector<double> values_;
};

// (h/pi) * integral_0^{pi/h} Im(q Y(q) e^{iqhk}) dq.
double fourier_moment(const YEvaluator& evaluator, double h, int k,
                      const numerics::QuadratureOptions& options = {});

// F_{2N} from the k = 2N+1 moment, then F_{k-1} = F_k + moment(k) down to
// k = -2N+1. All 4N+2 moments are integrated on one shared Simpson grid.
KernelCoefficients recover_coefficients(
    const YEvaluator& evaluator, double h, int n,
    const numerics::QuadratureOptions& options = {});

// |F_{-2N} + moment(-2N)|: mismatch of the one relation the recursion leaves
// unused.
double consistency_residual(const YEvaluator& evaluator,
                            const KernelCoefficients& coeffs);

// CSV "k,F0k".
void save_kernel_csv(const KernelCoefficients& coeffs,
                     const std::filesystem::path& path);

}  // namespace invscat
