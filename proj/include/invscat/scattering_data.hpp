#pragma once

#include <complex>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "invscat/forward_model.hpp"
#include "invscat/numerics/quadratic_spline.hpp"

namespace invscat {

struct SMatrixSample {
  double q;
  std::complex<double> s;

  friend bool operator==(const SMatrixSample&, const SMatrixSample&) = default;
};

// Input of the inverse problem: S(q) on a finite momentum grid, the bound
// states, and the constant A of the high-momentum tail S = exp(-2iA/q).
class ScatteringData {
 public:
  static constexpr double kUnitarityTolerance = 1e-9;

  // q_edge is the last sample's momentum. Validates q > 0 strictly
  // increasing, |S| = 1, distinct positive kappa, positive M, and that the
  // tail meets the last sample.
  ScatteringData(std::vector<SMatrixSample> samples,
                 std::vector<BoundState> bound_states, double a,
                 double unitarity_tolerance = kUnitarityTolerance);

  // A taken from the table's last entry.
  static ScatteringData from_table(const PhaseShiftTable& table,
                                   std::vector<BoundState> bound_states = {});

  std::span<const SMatrixSample> samples() const noexcept { return samples_; }
  std::span<const BoundState> bound_states() const noexcept { return bound_states_; }
  double q_edge() const noexcept { return samples_.back().q; }
  double a() const noexcept { return a_; }

  friend bool operator==(const ScatteringData&, const ScatteringData&) = default;

 private:
  std::vector<SMatrixSample> samples_;
  std::vector<BoundState> bound_states_;
  double a_;
};

// Y(q) = 1 - S(q) - i sum_j M_j^2 / (q - i kappa_j) for q > 0.
// Data-built evaluators take S from quadratic splines of Re S and Im S up to
// q_edge (the first piece extrapolated toward q = 0) and from the tail
// exp(-2iA/q) beyond. Immutable; safe to share.
class YEvaluator {
 public:
  using Function = std::function<std::complex<double>(double)>;

  explicit YEvaluator(const ScatteringData& data);

  // Wraps a closed-form Y(q) with its non-smooth points.
  static YEvaluator analytic(Function y, std::vector<double> breakpoints = {});

  // Throws ValidationError for q <= 0.
  std::complex<double> operator()(double q) const;

  // Points where Y is not smooth: spline knots, the last of which is the seam.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  // Only for data-built evaluators.
  std::complex<double> s_from_spline(double q) const;
  std::complex<double> s_from_tail(double q) const;
  std::optional<double> q_edge() const;

 private:
  struct Interpolated {
    numerics::QuadraticSpline re;
    numerics::QuadraticSpline im;
    double q_edge;
    double a;
    std::vector<BoundState> bound_states;
  };

  explicit YEvaluator(Function y, std::vector<double> breakpoints);
  static Interpolated interpolate(const ScatteringData& data);
  const Interpolated& interpolated() const;

  std::variant<Interpolated, Function> source_;
  std::vector<double> breakpoints_;
};

YEvaluator build_y_evaluator(const ScatteringData& data);
std::complex<double> y_at(const YEvaluator& evaluator, double q);

// Scattering CSV:
//   q,re_s,im_s
//   <rows>
//   # bound_states
//   kappa,M
//   <rows>
//   # q_edge=<v> A=<v>
// The bound-state section is optional. Without the metadata line A is
// derived from the last sample on the principal branch.
void save_scattering_csv(const ScatteringData& data,
                         const std::filesystem::path& path);
ScatteringData load_scattering_csv(const std::filesystem::path& path);

// Tolerance on |S| - 1 for rows read from file.
inline constexpr double kFileUnitarityTolerance = 1e-6;

}  // namespace invscat
