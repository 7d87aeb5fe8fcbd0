#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

// Direct problem for the s-wave radial Schrodinger equation
//   u'' = (V(r) - q^2) u,  u(0) = 0,
// in units hbar = 2m = 1 (E = q^2).

namespace invscat {

// V(r) with finite support: zero beyond cutoff(). Breakpoints are radii
// where V or its derivative jumps; the integrator lands exactly on them.
class Potential {
 public:
  using Function = std::function<double(double)>;

  Potential(Function v, double cutoff, std::vector<double> breakpoints = {});

  double operator()(double r) const;
  double cutoff() const noexcept { return cutoff_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  static Potential zero();
  // -depth * exp(-rate * r), truncated at cutoff (default 4 / rate).
  static Potential exponential(double depth, double rate,
                               std::optional<double> cutoff = std::nullopt);
  // -depth for r <= radius.
  static Potential square_well(double depth, double radius);
  // Piecewise-linear through (r_i, v_i); zero beyond the last radius. The
  // cutoff moves in to where a trailing run of zero values starts.
  static Potential tabulated(std::vector<double> r, std::vector<double> v);

 private:
  Function v_;
  double cutoff_;
  std::vector<double> breakpoints_;
};

struct RadialSolution {
  double u;
  double u_prime;
};

struct IntegratorOptions {
  double max_step = 1e-3;
  // step <= phase_step / q
  double phase_step = 0.1;
  // r_match = cutoff + match_margin
  double match_margin = 2.0;

  double step_for(double q) const;
};

// Regular solution (u(0) = 0, u'(0) = 1, rescaled on overflow) at r_match,
// by fixed-step RK4. Steps are shortened so every potential breakpoint is a
// grid node.
RadialSolution integrate_radial(const Potential& potential, double q,
                                double r_match, double step);

// delta in (-pi, pi], matched to sin(q r + delta) outside the potential.
double phase_shift(const Potential& potential, double q,
                   const IntegratorOptions& options = {});

struct PhaseShiftEntry {
  double q;
  double delta;
  std::complex<double> s;
};

class PhaseShiftTable {
 public:
  PhaseShiftTable() = default;
  // Validates q > 0 strictly increasing and |S| = 1 within 1e-12.
  explicit PhaseShiftTable(std::vector<PhaseShiftEntry> entries);

  std::span<const PhaseShiftEntry> entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const PhaseShiftEntry& operator[](std::size_t i) const { return entries_[i]; }

 private:
  std::vector<PhaseShiftEntry> entries_;
};

PhaseShiftTable s_matrix_table(const Potential& potential,
                               std::span<const double> q_grid,
                               const IntegratorOptions& options = {});

// Bound state at E = -kappa^2. m is the tail amplitude of the unit-normalised
// regular solution: u(r) -> m * exp(-kappa r).
struct BoundState {
  double kappa;
  double m;

  friend bool operator==(const BoundState&, const BoundState&) = default;
};

// All bound states, deepest first. States with kappa below kMinKappa are
// not resolved.
inline constexpr double kMinKappa = 1e-6;
std::vector<BoundState> find_bound_states(const Potential& potential,
                                          const IntegratorOptions& options = {});

// A = -q_edge * delta(q_edge), so exp(-2iA/q_edge) = S(q_edge).
double asymptotic_constant(const PhaseShiftTable& table, double q_edge);

}  // namespace invscat
