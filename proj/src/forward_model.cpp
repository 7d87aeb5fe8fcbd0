#include "invscat/forward_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "invscat/errors.hpp"

namespace invscat {

namespace {

constexpr double kOverflow = 1e100;

// Integration state: u, u', running integral of u^2 and nodes crossed.
struct Propagated {
  double u = 0.0;
  double u_prime = 1.0;
  double norm = 0.0;
  int nodes = 0;
};

struct Derivative {
  double du, dup, dw;
};

Derivative rhs(double v_minus_e, double u, double up) {
  // u == 0 guards V(0) singularities in the first stage.
  const double acc = (u == 0.0) ? 0.0 : v_minus_e * u;
  return {up, acc, u * u};
}

// Exact free continuation of (u, u') over a distance d where V = 0.
void continue_free(Propagated& s, double energy, double d) {
  if (d <= 0.0) return;
  const double u = s.u, up = s.u_prime;
  if (energy > 0.0) {
    const double q = std::sqrt(energy);
    const double c = std::cos(q * d), sn = std::sin(q * d);
    s.u = u * c + up * sn / q;
    s.u_prime = -q * u * sn + up * c;
  } else if (energy < 0.0) {
    const double k = std::sqrt(-energy);
    const double c = std::cosh(k * d), sn = std::sinh(k * d);
    s.u = u * c + up * sn / k;
    s.u_prime = k * u * sn + up * c;
  } else {
    s.u = u + up * d;
  }
}

// RK4 for u'' = (V - energy) u from 0 to min(r_end, cutoff), then the exact
// free solution out to r_end. Pieces between breakpoints evaluate V only at
// interior points or one-sided end limits. The norm and node count cover the
// numerical part only.
Propagated propagate(const Potential& potential, double energy, double r_end,
                     double step) {
  const double r_num = std::min(r_end, potential.cutoff());
  std::vector<double> cuts{0.0};
  for (double b : potential.breakpoints()) {
    if (b > 0.0 && b < r_num) cuts.push_back(b);
  }
  cuts.push_back(r_num);

  Propagated s;
  for (std::size_t piece = 0; piece + 1 < cuts.size(); ++piece) {
    const double lo = cuts[piece];
    const double hi = cuts[piece + 1];
    if (!(hi > lo)) continue;
    const auto steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / step)));
    const double dr = (hi - lo) / static_cast<double>(steps);
    const double lo_inside = std::nextafter(lo, hi);
    const double hi_inside = std::nextafter(hi, lo);

    for (std::size_t i = 0; i < steps; ++i) {
      const double r0 = lo + dr * static_cast<double>(i);
      const double r1 = (i + 1 == steps) ? hi : lo + dr * static_cast<double>(i + 1);
      const double rm = 0.5 * (r0 + r1);
      const double v0 = potential(i == 0 ? lo_inside : r0) - energy;
      const double vm = potential(rm) - energy;
      const double v1 = potential(i + 1 == steps ? hi_inside : r1) - energy;
      const double h = r1 - r0;

      const double u = s.u, up = s.u_prime;
      const auto k1 = rhs(v0, u, up);
      const auto k2 = rhs(vm, u + 0.5 * h * k1.du, up + 0.5 * h * k1.dup);
      const auto k3 = rhs(vm, u + 0.5 * h * k2.du, up + 0.5 * h * k2.dup);
      const auto k4 = rhs(v1, u + h * k3.du, up + h * k3.dup);
      const double un = u + h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
      s.u_prime = up + h / 6.0 * (k1.dup + 2.0 * k2.dup + 2.0 * k3.dup + k4.dup);
      s.norm += h / 6.0 * (k1.dw + 2.0 * k2.dw + 2.0 * k3.dw + k4.dw);
      if ((u > 0.0 && un < 0.0) || (u < 0.0 && un > 0.0)) ++s.nodes;
      s.u = un;

      if (!std::isfinite(s.u) || !std::isfinite(s.u_prime)) {
        throw NumericalError("integrate_radial: solution became non-finite");
      }
      if (std::abs(s.u) > kOverflow || std::abs(s.u_prime) > kOverflow) {
        s.u /= kOverflow;
        s.u_prime /= kOverflow;
        s.norm /= kOverflow * kOverflow;
      }
    }
  }
  continue_free(s, energy, r_end - r_num);
  return s;
}

double match_radius(const Potential& potential, const IntegratorOptions& options) {
  return potential.cutoff() + options.match_margin;
}

}  // namespace

Potential::Potential(Function v, double cutoff, std::vector<double> breakpoints)
    : v_(std::move(v)), cutoff_(cutoff), breakpoints_(std::move(breakpoints)) {
  if (!v_) throw ValidationError("Potential: empty function");
  if (!(cutoff >= 0.0) || !std::isfinite(cutoff)) {
    throw ValidationError("Potential: cutoff must be finite and >= 0");
  }
  if (cutoff > 0.0) breakpoints_.push_back(cutoff);
  std::erase_if(breakpoints_, [&](double b) { return !(b > 0.0 && b <= cutoff); });
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()),
                     breakpoints_.end());
}

double Potential::operator()(double r) const {
  if (r > cutoff_) return 0.0;
  return v_(r);
}

Potential Potential::zero() {
  return Potential([](double) { return 0.0; }, 0.0);
}

Potential Potential::exponential(double depth, double rate,
                                 std::optional<double> cutoff) {
  if (!(rate > 0.0)) throw ValidationError("exponential potential: rate must be > 0");
  const double rc = cutoff.value_or(4.0 / rate);
  return Potential([depth, rate](double r) { return -depth * std::exp(-rate * r); },
                   rc);
}

Potential Potential::square_well(double depth, double radius) {
  if (!(radius > 0.0)) throw ValidationError("square well: radius must be > 0");
  return Potential([depth](double) { return -depth; }, radius);
}

Potential Potential::tabulated(std::vector<double> r, std::vector<double> v) {
  if (r.size() != v.size() || r.size() < 2) {
    throw ValidationError("tabulated potential: need >= 2 matching (r, V) rows");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!std::isfinite(r[i]) || !std::isfinite(v[i])) {
      throw ValidationError("tabulated potential: non-finite row " + std::to_string(i));
    }
    if (r[i] < 0.0 || (i > 0 && !(r[i] > r[i - 1]))) {
      throw ValidationError("tabulated potential: radii must be >= 0 and increasing");
    }
  }
  // V vanishes from the first knot of a trailing run of zeros onward.
  std::size_t last = r.size() - 1;
  while (last > 0 && v[last] == 0.0 && v[last - 1] == 0.0) --last;
  const double cutoff = (last == 0 && v[0] == 0.0) ? 0.0 : r[last];
  auto knots = r;
  auto fn = [r = std::move(r), v = std::move(v)](double x) {
    if (x <= r.front()) return v.front();
    const auto it = std::upper_bound(r.begin(), r.end(), x);
    if (it == r.end()) return v.back();
    const auto i = static_cast<std::size_t>(it - r.begin());
    const double t = (x - r[i - 1]) / (r[i] - r[i - 1]);
    return v[i - 1] + t * (v[i] - v[i - 1]);
  };
  return Potential(std::move(fn), cutoff, std::move(knots));
}

double IntegratorOptions::step_for(double q) const {
  return (q > 0.0) ? std::min(max_step, phase_step / q) : max_step;
}

RadialSolution integrate_radial(const Potential& potential, double q,
                                double r_match, double step) {
  if (!(q > 0.0)) throw ValidationError("integrate_radial: q must be > 0");
  if (!(step > 0.0)) throw ValidationError("integrate_radial: step must be > 0");
  if (r_match < potential.cutoff()) {
    throw ValidationError("integrate_radial: r_match inside the potential range");
  }
  const auto s = propagate(potential, q * q, r_match, step);
  return {s.u, s.u_prime};
}

double phase_shift(const Potential& potential, double q,
                   const IntegratorOptions& options) {
  const double rm = match_radius(potential, options);
  const auto [u, up] = integrate_radial(potential, q, rm, options.step_for(q));
  const double c = std::cos(q * rm);
  const double s = std::sin(q * rm);
  double delta = std::atan2(q * u * c - up * s, up * c + q * u * s);
  if (delta <= -std::numbers::pi) delta = std::numbers::pi;
  return delta;
}

PhaseShiftTable::PhaseShiftTable(std::vector<PhaseShiftEntry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (!(e.q > 0.0)) throw ValidationError("PhaseShiftTable: q must be > 0");
    if (i > 0 && !(e.q > entries_[i - 1].q)) {
      throw ValidationError("PhaseShiftTable: q must be strictly increasing");
    }
    if (std::abs(std::abs(e.s) - 1.0) > 1e-12) {
      throw ValidationError("PhaseShiftTable: |S| != 1 at entry " + std::to_string(i));
    }
  }
}

PhaseShiftTable s_matrix_table(const Potential& potential,
                               std::span<const double> q_grid,
                               const IntegratorOptions& options) {
  std::vector<PhaseShiftEntry> entries;
  entries.reserve(q_grid.size());
  for (double q : q_grid) {
    const double delta = phase_shift(potential, q, options);
    entries.push_back({q, delta, std::polar(1.0, 2.0 * delta)});
  }
  return PhaseShiftTable(std::move(entries));
}

std::vector<BoundState> find_bound_states(const Potential& potential,
                                          const IntegratorOptions& options) {
  // Matching at the cutoff avoids integrating the unstable decaying branch
  // through the free region.
  const double rm = potential.cutoff();
  const double step = options.max_step;

  // No state lies below the potential minimum.
  double v_min = 0.0;
  for (double r = step; r <= potential.cutoff(); r += step) {
    v_min = std::min(v_min, potential(r));
  }
  for (double b : potential.breakpoints()) {
    v_min = std::min(v_min, potential(std::nextafter(b, 0.0)));
  }
  if (!(v_min < 0.0)) return {};
  const double kappa_max = std::sqrt(-v_min) * (1.0 + 1e-9) + 1e-12;

  // Sturm count of states with energy below -kappa^2: nodes inside the cutoff
  // plus one if the free continuation a e^{kappa r} + b e^{-kappa r} crosses
  // zero further out.
  auto count_below = [&](double kappa) {
    const auto s = propagate(potential, -kappa * kappa, rm, step);
    const double growing = s.u_prime + kappa * s.u;
    return s.nodes + ((s.u > 0.0 && growing < 0.0) || (s.u < 0.0 && growing > 0.0) ? 1 : 0);
  };

  const int total = count_below(kMinKappa);
  std::vector<BoundState> states;
  for (int i = 0; i < total; ++i) {
    double lo = kMinKappa;
    double hi = kappa_max;
    while (hi - lo > 1e-14 * hi) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (count_below(mid) >= i + 1) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double kappa = 0.5 * (lo + hi);
    const auto s = propagate(potential, -kappa * kappa, rm, step);
    // Tail beyond the cutoff is u(rm) e^{-kappa (r - rm)}.
    const double norm = s.norm + s.u * s.u / (2.0 * kappa);
    const double m = std::abs(s.u) * std::exp(kappa * rm) / std::sqrt(norm);
    states.push_back({kappa, m});
  }
  return states;
}

double asymptotic_constant(const PhaseShiftTable& table, double q_edge) {
  for (const auto& e : table.entries()) {
    if (std::abs(e.q - q_edge) <= 1e-12 * std::max(1.0, std::abs(q_edge))) {
      return -e.q * e.delta;
    }
  }
  std::ostringstream msg;
  msg << "asymptotic_constant: no table entry at q_edge = " << q_edge;
  throw ValidationError(msg.str());
}

}  // namespace invscat
