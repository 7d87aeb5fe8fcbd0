// One PASS/FAIL line per acceptance criterion; nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "invscat/app/commands.hpp"
#include "invscat/errors.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using namespace invscat;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<SMatrixSample> unit_samples(const app::RunConfig& c) {
  std::vector<SMatrixSample> out;
  for (double q : c.q_grid()) out.push_back({q, 1.0});
  return out;
}

const Potential kModel = Potential::exponential(3.0, 1.5);

const ScatteringData& model_data() {
  static const ScatteringData d = app::generate_data(kModel, app::RunConfig{});
  return d;
}

const app::InversionResult& model_inversion() {
  static const app::InversionResult r = app::invert(model_data(), 0.04, 100);
  return r;
}

Outcome reference_experiment() {
  Scratch dir("accept");
  app::RunConfig c;
  c.out = dir / "out";
  std::ostringstream sink;
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = app::cmd_roundtrip(c, sink);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {m.max_abs <= 0.15 && m.rel_l2 <= 0.05 && seconds < 60.0,
          fmt("max_abs=%.4g (<= 0.15) rel_l2=%.4g (<= 0.05) runtime=%.2fs (< 60)", m.max_abs,
              m.rel_l2, seconds)};
}

Outcome zero_data() {
  const app::RunConfig c;
  const auto r = app::invert(ScatteringData(unit_samples(c), {}, 0.0), c.h, c.n());
  double worst = 0.0;
  for (double f : r.coefficients.values()) worst = std::max(worst, std::abs(f));
  for (double p : r.solution.entries().data()) worst = std::max(worst, std::abs(p));
  for (double v : r.potential.values()) worst = std::max(worst, std::abs(v));
  return {worst <= 1e-10, fmt("max |F|,|P|,|V| = %.3g (<= 1e-10)", worst)};
}

Outcome zeta_oracle() {
  const double h = 0.04;
  double worst = 0.0;
  for (int n = 0; n <= 10; ++n)
    for (int m = 0; m <= 10; ++m)
      for (int p = 0; p <= 10; ++p)
        worst = std::max(worst, std::abs(zeta(n, m, p, h) - oracle::hat_overlap(n, m, p, h)));
  return {worst <= 1e-12, fmt("max deviation over 1331 triples = %.3g (<= 1e-12)", worst)};
}

Outcome synthesis_round_trip() {
  const int n = 25;
  const double h = 0.04;
  std::mt19937_64 rng(4242);
  double worst = 0.0, worst_residual = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = oracle::random_coefficients(n, rng);
    const auto ev = YEvaluator::analytic(
        [&c, n, h](double q) { return oracle::box_series_y(c, n, h, q); });
    const auto got = recover_coefficients(ev, h, n);
    for (int k = -2 * n; k <= 2 * n; ++k) {
      worst = std::max(worst, std::abs(got[k] - c[static_cast<std::size_t>(k + 2 * n)]));
    }
    worst_residual = std::max(worst_residual, consistency_residual(ev, got));
  }
  return {worst <= 1e-7 && worst_residual <= 1e-7,
          fmt("20 sequences, N=25: max entry error %.3g, max residual %.3g (<= 1e-7)", worst,
              worst_residual)};
}

Outcome square_well_phases() {
  const auto well = Potential::square_well(2.0, 1.0);
  double worst = 0.0;
  for (double q : {0.1, 0.5, 1.0, 2.0, 4.0, 8.0}) {
    worst = std::max(worst, oracle::phase_distance_mod_pi(phase_shift(well, q),
                                                          oracle::square_well_phase(2.0, 1.0, q)));
  }
  return {worst <= 1e-6, fmt("V0=2 a=1: max |delta - exact| mod pi = %.3g (<= 1e-6)", worst)};
}

Outcome convergence() {
  const auto coarse = app::invert(model_data(), 0.08, 50);
  const auto e_coarse = app::compare(coarse.potential, kModel, 0.2, 3.0);
  const auto e_fine = app::compare(model_inversion().potential, kModel, 0.2, 3.0, 2);
  return {e_fine.points == e_coarse.points && e_fine.max_abs < e_coarse.max_abs,
          fmt("max_abs h=0.04: %.4g < h=0.08: %.4g on %zu common points", e_fine.max_abs,
              e_coarse.max_abs, e_fine.points)};
}

Outcome marchenko_residual_bound() {
  const auto& r = model_inversion();
  return {r.marchenko_residual <= r.marchenko_residual_bound,
          fmt("residual %.3g <= 1e-9 (1 + max|F| = %.4g)", r.marchenko_residual,
              1.0 + r.kernel.max_abs())};
}

Outcome bound_state_plumbing() {
  const app::RunConfig c;
  const auto r = app::invert(ScatteringData(unit_samples(c), {{1.0, 1.0}}, 0.0), c.h, c.n());
  bool finite = true;
  double peak = 0.0;
  for (double f : r.coefficients.values()) {
    finite = finite && std::isfinite(f);
    peak = std::max(peak, std::abs(f));
  }
  for (double v : r.potential.values()) finite = finite && std::isfinite(v);
  const double worst_condition = *std::max_element(r.condition.begin(), r.condition.end());
  const bool nonsingular = std::isfinite(worst_condition) && worst_condition < app::kConditionWarning;
  return {finite && peak > 0.0 && nonsingular,
          fmt("kappa=1 M=1: max |F| = %.4g, V finite=%s, max condition %.3g, V(0)=%.4g", peak,
              finite ? "yes" : "no", worst_condition, r.potential[0])};
}

}  // namespace

int main() {
  report(1, "reference experiment reproduction", reference_experiment);
  report(2, "zero-data identity", zero_data);
  report(3, "zeta oracle", zeta_oracle);
  report(4, "synthesis round trip", synthesis_round_trip);
  report(5, "square-well forward oracle", square_well_phases);
  report(6, "convergence in h", convergence);
  report(7, "Marchenko residual", marchenko_residual_bound);
  report(8, "bound-state plumbing", bound_state_plumbing);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
