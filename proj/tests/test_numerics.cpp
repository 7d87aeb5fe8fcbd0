#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "invscat/errors.hpp"
#include "invscat/forward_model.hpp"
#include "invscat/numerics/dense_solver.hpp"
#include "invscat/numerics/finite_difference.hpp"
#include "invscat/numerics/quadratic_spline.hpp"
#include "invscat/numerics/quadrature.hpp"
#include "invscat/scattering_data.hpp"

using namespace invscat;
using namespace invscat::numerics;

namespace {

ScatteringData model_data() {
  const auto potential = Potential::exponential(3.0, 1.5);
  std::vector<double> grid;
  for (int i = 1; i <= 40; ++i) grid.push_back(8.0 * i / 40);
  return ScatteringData::from_table(s_matrix_table(potential, grid));
}

}  // namespace

TEST_CASE("integrate_oscillatory: analytic and trivial integrands") {
  CHECK(std::abs(integrate_oscillatory([](double q) { return std::sin(q); }, 0.0,
                                       std::numbers::pi, 1.0) -
                 2.0) <= 1e-9);
  CHECK(integrate_oscillatory([](double) { return 0.0; }, -3.0, 5.0, 10.0) == 0.0);
}

TEST_CASE("integrate_oscillatory: reports the offending momentum") {
  auto f = [](double q) { return q > 1.0 ? std::nan("") : q; };
  try {
    integrate_oscillatory(f, 0.0, 2.0, 1.0);
    FAIL("expected NonFiniteIntegrandError");
  } catch (const NonFiniteIntegrandError& e) {
    CHECK(e.q() > 1.0);
  }
  CHECK_THROWS_AS(integrate_oscillatory(f, 2.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("integrate_oscillatory: model integrand agrees with a 4x denser reference") {
  const auto y = build_y_evaluator(model_data());
  const double h = 0.04;
  const int k = 200;
  auto f = [&](double q) {
    if (q == 0.0) return 0.0;
    return (q * y(q) * std::polar(1.0, q * h * k)).imag();
  };
  QuadratureOptions opts;
  opts.breakpoints.assign(y.breakpoints().begin(), y.breakpoints().end());
  const double value = integrate_oscillatory(f, 0.0, std::numbers::pi / h, h * k, opts);

  auto dense = opts;
  dense.max_phase_per_panel /= 4.0;
  const double reference = integrate_oscillatory(f, 0.0, std::numbers::pi / h, h * k, dense);
  CHECK(std::abs(value - reference) <= 1e-8);
}

TEST_CASE("integrate_oscillatory: halving the panels moves the result by <= tol") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> freq(0.5, 20.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double w = freq(rng);
    auto f = [w](double q) { return q * std::cos(w * q) * std::exp(-0.1 * q); };
    QuadratureOptions opts;
    const double coarse = integrate_oscillatory(f, 0.0, 10.0, w, opts);
    opts.max_phase_per_panel /= 2.0;
    const double fine = integrate_oscillatory(f, 0.0, 10.0, w, opts);
    CHECK(std::abs(coarse - fine) <= 1e-9);
  }
}

TEST_CASE("SimpsonRule: integrates cubics exactly across breakpoints") {
  const std::vector<double> cuts{0.3, 1.7, 1.7, 2.2};
  const SimpsonRule rule(0.0, 3.0, 2.0, 1, cuts);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double x = rule.nodes()[i];
    sum += rule.weights()[i] * (x * x * x - 2.0 * x);
  }
  CHECK(sum == doctest::Approx(81.0 / 4.0 - 9.0).epsilon(1e-13));
  for (double c : {0.3, 1.7, 2.2}) {
    CHECK(std::find(rule.nodes().begin(), rule.nodes().end(), c) != rule.nodes().end());
  }
}

TEST_CASE("QuadraticSpline: reproduces lines and parabolas") {
  std::vector<double> x{0.0, 0.3, 0.7, 1.2, 2.0};
  std::vector<double> line, square;
  for (double v : x) {
    line.push_back(2.0 * v + 1.0);
    square.push_back(v * v);
  }
  const QuadraticSpline lin(x, line);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double mid = 0.5 * (x[i] + x[i + 1]);
    CHECK(std::abs(lin(mid) - (2.0 * mid + 1.0)) <= 1e-12);
  }

  std::vector<Sample> samples{{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}, {1.5, 2.25}};
  const auto sq = fit_quadratic_spline(samples);
  for (int i = 0; i <= 150; ++i) {
    const double q = 1.5 * i / 150;
    CHECK(std::abs(sq(q) - q * q) <= 1e-12);
  }
}

TEST_CASE("QuadraticSpline: any quadratic at 100 random points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::uniform_real_distribution<double> gap(0.05, 0.6);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    auto poly = [&](double t) { return a + t * (b + t * c); };
    std::vector<double> x{gap(rng)}, y;
    for (int i = 1; i < 12; ++i) x.push_back(x.back() + gap(rng));
    for (double v : x) y.push_back(poly(v));
    const QuadraticSpline s(x, y);
    std::uniform_real_distribution<double> at(x.front(), x.back());
    for (int i = 0; i < 100; ++i) {
      const double t = at(rng);
      CHECK(std::abs(s(t) - poly(t)) <= 1e-12);
    }
  }
}

TEST_CASE("QuadraticSpline: interpolates knots, C1, rejects bad input") {
  std::vector<double> x{0.0, 1.0, 1.5, 3.0, 3.2};
  std::vector<double> y{1.0, -2.0, 0.5, 4.0, 3.0};
  const QuadraticSpline s(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(s(x[i]) - y[i]) <= 1e-14);
  const auto knots = s.knots();
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    const double eps = 1e-9;
    CHECK(std::abs(s(knots[i] - eps) - s(knots[i] + eps)) <= 1e-7);
    CHECK(s.derivative(std::nextafter(knots[i], 0.0)) ==
          doctest::Approx(s.derivative(knots[i])).epsilon(1e-9));
  }
  CHECK_THROWS_AS(s(3.3), ValidationError);
  CHECK_THROWS_AS(s(-0.1), ValidationError);
  CHECK_NOTHROW(s.extrapolate(-0.1));

  std::vector<double> dup{0.0, 1.0, 1.0};
  CHECK_THROWS_AS(QuadraticSpline(dup, std::vector<double>{1, 2, 3}), ValidationError);
  std::vector<double> back{0.0, 2.0, 1.0};
  CHECK_THROWS_AS(QuadraticSpline(back, std::vector<double>{1, 2, 3}), ValidationError);
  std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(QuadraticSpline(two, std::vector<double>{1, 2}), ValidationError);
}

// Below q ~ 1 the model's S(q) turns quickly (near-threshold virtual state)
// and no interpolant on this 0.2 grid reaches 1e-3; the check covers the
// rest of the range.
TEST_CASE("QuadraticSpline: S(q) from the model potential between grid points") {
  const auto potential = Potential::exponential(3.0, 1.5);
  const auto data = model_data();
  const auto y = build_y_evaluator(data);
  for (double q : {1.3, 2.5, 3.1, 4.0, 5.9, 7.7}) {
    const double delta = phase_shift(potential, q);
    const auto direct = std::polar(1.0, 2.0 * delta);
    CHECK(std::abs(y.s_from_spline(q) - direct) <= 1e-3);
  }
}

TEST_CASE("solve_dense: small exact systems") {
  DenseSystem id{Matrix::identity(3), {1.0, -2.0, 3.5}};
  const auto x = solve_dense(id);
  CHECK(x == std::vector<double>{1.0, -2.0, 3.5});

  Matrix a(2, 2);
  a(0, 0) = 2.0;
  a(1, 1) = 4.0;
  const auto y = solve_dense({a, {2.0, 8.0}});
  CHECK(y[0] == 1.0);
  CHECK(y[1] == 2.0);
}

TEST_CASE("solve_dense: random 101x101 residual and row-order independence") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const std::size_t n = 101;
  Matrix a(n, n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(rng);
    a(i, i) += 10.0;
    b[i] = dist(rng);
  }
  const auto x = solve_dense({a, b});
  const double bound = 1e-10 * (norm_inf(a) * norm_inf(x) + norm_inf(b));
  CHECK(residual_inf(a, x, b) <= bound);
  CHECK(residual_inf(a, x, b) / norm_inf(b) <= 1e-9);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  Matrix pa(n, n);
  std::vector<double> pb(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pa(i, j) = a(order[i], j);
    pb[i] = b[order[i]];
  }
  const auto px = solve_dense({pa, pb});
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(px[i] - x[i]) <= 1e-9);
}

TEST_CASE("solve_dense: relative residual on assorted invertible matrices") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 5u, 17u, 40u}) {
    Matrix a(n, n);
    std::vector<double> b(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) a(i, j) = dist(rng);
      a(i, i) += 2.0;
      b[i] = dist(rng) + 0.1;
    }
    const auto x = solve_dense({a, b});
    CHECK(residual_inf(a, x, b) / norm_inf(b) <= 1e-9);
  }
}

TEST_CASE("solve_dense: singular matrices carry the pivot index") {
  Matrix a(3, 3);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 4.0;
  a(2, 2) = 1.0;
  try {
    solve_dense({a, {1.0, 1.0, 1.0}});
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.pivot() == 1);
  }
  CHECK_THROWS_AS(solve_dense({Matrix(2, 2), {0.0, 0.0}}), SingularMatrixError);
  CHECK_THROWS_AS(solve_dense({Matrix(2, 3), {0.0, 0.0}}), ValidationError);
}

TEST_CASE("LuFactorization: inverse norm of a diagonal matrix") {
  Matrix a(3, 3);
  a(0, 0) = 2.0;
  a(1, 1) = 0.25;
  a(2, 2) = -1.0;
  CHECK(LuFactorization(a).inverse_norm_inf() == doctest::Approx(4.0));
}

TEST_CASE("central_difference: exact on affine and quadratic data") {
  const double h = 0.1;
  std::vector<double> lin, sq;
  for (int i = 0; i < 12; ++i) {
    const double r = h * i;
    lin.push_back(r);
    sq.push_back(r * r);
  }
  for (double d : central_difference(lin, h)) CHECK(std::abs(d - 1.0) <= 1e-12);
  const auto dsq = central_difference(sq, h);
  CHECK(std::abs(dsq[1] - 0.2) <= 1e-12);
  for (std::size_t i = 0; i < dsq.size(); ++i) {
    CHECK(std::abs(dsq[i] - 2.0 * h * static_cast<double>(i)) <= 1e-12);
  }
}

// Truncation bounds for f = exp(-1.5 r): |f'''| <= 3.375 exp(-1.5 r_lo) on
// each stencil, times h^2/6 for the central formula and h^2/3 for the
// one-sided ends.
TEST_CASE("central_difference: second order on exp(-1.5 r)") {
  const double h = 0.04;
  std::vector<double> v;
  for (int i = 0; i <= 100; ++i) v.push_back(std::exp(-1.5 * h * i));
  const auto d = central_difference(v, h);
  const double third = 3.375;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = h * static_cast<double>(i);
    const double exact = -1.5 * std::exp(-1.5 * r);
    const bool end = (i == 0 || i + 1 == d.size());
    const double r_lo = end ? (i == 0 ? 0.0 : r - 2.0 * h) : r - h;
    const double bound = (end ? h * h / 3.0 : h * h / 6.0) * third * std::exp(-1.5 * r_lo);
    CHECK(std::abs(d[i] - exact) <= bound);
    if (r >= 0.6) CHECK(std::abs(d[i] - exact) <= 4e-4);
  }
}

TEST_CASE("central_difference: rejects short input") {
  CHECK_THROWS_AS(central_difference(std::vector<double>{1.0, 2.0}, 0.1), ValidationError);
  CHECK_THROWS_AS(central_difference(std::vector<double>{1.0, 2.0, 3.0}, 0.0), ValidationError);
}
