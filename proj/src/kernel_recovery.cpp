#include "invscat/kernel_recovery.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "invscat/csv.hpp"
#include "invscat/errors.hpp"

namespace invscat {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

// q Y(q); the q = 0 limit is 0 because Y stays bounded there.
std::complex<double> weighted_y(const YEvaluator& y, double q) {
  if (q == 0.0) return 0.0;
  return q * y(q);
}

void check_step(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ValidationError("kernel recovery: h must be finite and > 0");
  }
}

}  // namespace

KernelCoefficients::KernelCoefficients(double h, int n, std::vector<double> values)
    : h_(h), n_(n), values_(std::move(values)) {
  check_step(h);
  if (n < 1) throw ValidationError("KernelCoefficients: N must be >= 1");
  if (values_.size() != static_cast<std::size_t>(4 * n + 1)) {
    throw ValidationError("KernelCoefficients: expected 4N+1 values");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw NumericalError("KernelCoefficients: non-finite entry");
  }
}

double KernelCoefficients::at(int k) const {
  if (k < k_min() || k > k_max()) {
    throw ValidationError("KernelCoefficients: index " + std::to_string(k) +
                          " outside [-2N, 2N]");
  }
  return (*this)[k];
}

double fourier_moment(const YEvaluator& evaluator, double h, int k,
                      const numerics::QuadratureOptions& options) {
  check_step(h);
  const double q_max = std::numbers::pi / h;
  const double rate = h * static_cast<double>(k);
  auto integrand = [&](double q) {
    return (weighted_y(evaluator, q) * std::polar(1.0, rate * q)).imag();
  };
  auto opts = options;
  opts.breakpoints.assign(evaluator.breakpoints().begin(), evaluator.breakpoints().end());
  const double integral =
      numerics::integrate_oscillatory(integrand, 0.0, q_max, std::abs(rate), opts);
  return h / std::numbers::pi * integral;
}

KernelCoefficients recover_coefficients(const YEvaluator& evaluator, double h, int n,
                                        const numerics::QuadratureOptions& options) {
  check_step(h);
  if (n < 1) throw ValidationError("recover_coefficients: N must be >= 1");

  const double q_max = std::numbers::pi / h;
  const int k_lo = -2 * n;
  const int k_hi = 2 * n + 1;
  const auto count = static_cast<std::size_t>(k_hi - k_lo + 1);
  const double omega = h * static_cast<double>(k_hi);

  // moments[i] belongs to k = k_lo + i.
  auto moments_at = [&](int level) {
    const numerics::SimpsonRule rule(0.0, q_max, omega, level, evaluator.breakpoints(),
                                     options.max_phase_per_panel);
    std::vector<double> sums(count, 0.0);
    const auto nodes = rule.nodes();
    const auto weights = rule.weights();
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const double q = nodes[i];
      const std::complex<double> wy = weights[i] * weighted_y(evaluator, q);
      if (!std::isfinite(wy.real()) || !std::isfinite(wy.imag())) {
        throw NonFiniteIntegrandError(q, "recover_coefficients: non-finite q Y(q) at q = " +
                                             csv::format_number(q));
      }
      for (std::size_t j = 0; j < count; ++j) {
        const double phase = h * static_cast<double>(k_lo + static_cast<int>(j)) * q;
        sums[j] += (wy * std::polar(1.0, phase)).imag();
      }
    }
    for (double& s : sums) s *= h / std::numbers::pi;
    return sums;
  };

  // Convergence is judged on the integrals, i.e. before the h/pi factor.
  const double tolerance = options.tolerance * h / std::numbers::pi;
  auto previous = moments_at(0);
  std::vector<double> moments;
  for (int level = 1;; ++level) {
    if (level > options.max_doublings) {
      throw NumericalError("recover_coefficients: moments did not converge");
    }
    moments = moments_at(level);
    double change = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      change = std::max(change, std::abs(moments[j] - previous[j]));
    }
    if (change <= tolerance) break;
    previous = std::move(moments);
  }

  auto moment = [&](int k) { return moments[static_cast<std::size_t>(k - k_lo)]; };
  std::vector<double> values(static_cast<std::size_t>(4 * n + 1));
  auto slot = [&](int k) -> double& { return values[static_cast<std::size_t>(k + 2 * n)]; };

  CompensatedSum chain;
  chain.add(moment(2 * n + 1));
  slot(2 * n) = chain.value();
  for (int k = 2 * n; k >= -2 * n + 1; --k) {
    chain.add(moment(k));
    slot(k - 1) = chain.value();
  }
  return KernelCoefficients(h, n, std::move(values));
}

double consistency_residual(const YEvaluator& evaluator, const KernelCoefficients& coeffs) {
  const int k = coeffs.k_min();
  return std::abs(coeffs[k] + fourier_moment(evaluator, coeffs.h(), k));
}

void save_kernel_csv(const KernelCoefficients& coeffs, const std::filesystem::path& path) {
  std::vector<double> ks, fs;
  for (int k = coeffs.k_min(); k <= coeffs.k_max(); ++k) {
    ks.push_back(k);
    fs.push_back(coeffs[k]);
  }
  csv::write_table(path, {"k", "F0k"}, {ks, fs});
}

}  // namespace invscat
