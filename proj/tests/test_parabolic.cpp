#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "vhj/cell.hpp"
#include "vhj/parabolic.hpp"

using namespace vhj;

namespace {

EnvironmentSpec xfree_p2() {
  EnvironmentSpec s;
  s.form = HamForm::separable;
  s.gamma = 2.0;
  s.potential.model = FieldModel::constant;
  s.potential.constant_value = 0.0;
  s.diffusion.model = FieldModel::constant;
  s.diffusion.constant_value = 1.0;
  s.a_min = 1.0;
  return s;
}

EnvironmentSpec cosine_env() {
  EnvironmentSpec s = xfree_p2();
  s.potential.model = FieldModel::periodic_cosine;
  s.potential.amplitude = 1.0;
  s.potential.period = 1.0;
  s.potential.harmonics = {1.0};
  return s;
}

EnvironmentSpec pinned_env() {
  EnvironmentSpec s = xfree_p2();
  s.form = HamForm::pinned;
  s.gamma = 3.0;
  s.pin.model = FieldModel::constant;
  s.pin.constant_value = 1.0;
  s.pin.amplitude = 0.8;
  return s;
}

Grid1D make_grid(double half, double dx, double theta) {
  Grid1D g;
  g.x_lo = -half;
  g.x_hi = half;
  g.nx = 2 * static_cast<int>(std::round(half / dx)) + 1;
  g.theta = theta;
  return g;
}

}  // namespace

TEST_CASE("exact linear solutions for x-free Hamiltonians") {
  const Realization r = sample_realization(xfree_p2(), 0);
  for (double theta : {-1.0, 0.5, 2.0}) {
    Grid1D g = make_grid(8.0, 1.0 / 64, theta);
    const ParabolicRun run = solve_ehj(r, g, 1.0, {0.25, 0.5, 1.0});
    // u = theta x + theta^2 t solves exactly; discrete slopes are constant
    CHECK(run.u_center.back() == doctest::Approx(theta * theta).epsilon(2e-3));
    // interior profile stays linear
    const int ci = g.center_index();
    const double dx = g.dx();
    CHECK(run.final_u[ci + 5] - run.final_u[ci - 5] == doctest::Approx(10 * dx * theta));
  }
}

TEST_CASE("heat-kernel decay when the flux is absent") {
  // general_sum with all momentum coefficients zero reduces to the heat equation
  EnvironmentSpec s = xfree_p2();
  s.form = HamForm::general_sum;
  s.gamma = 2.0;
  s.general_c0_lo = 0.0;
  s.general_c0_hi = 0.0;
  s.pin.model = FieldModel::constant;
  s.pin.constant_value = 0.0;
  s.pin.amplitude = 0.0;
  const Realization r = sample_realization(s, 0);

  Grid1D g = make_grid(6 * M_PI, M_PI / 256, 0.0);
  std::vector<double> u0(g.nx);
  for (int i = 0; i < g.nx; ++i) u0[i] = std::sin(g.x_lo + g.dx() * i);
  const ParabolicRun run = solve_ehj(r, g, 1.0, {1.0}, {}, &u0);
  // u(t,x) = e^-t sin x
  const int ci = g.center_index();
  CHECK(std::abs(run.final_u[ci]) < 1e-3);
  const int qi = ci + static_cast<int>(std::round(M_PI / 2 / g.dx()));
  CHECK(run.final_u[qi] == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
}

TEST_CASE("slope series converges to the critical value for the periodic cell") {
  const Realization r = sample_realization(cosine_env(), 0);
  Grid1D g = make_grid(40.0, 1.0 / 64, 0.0);
  std::vector<double> samples;
  for (int k = 1; k <= 16; ++k) samples.push_back(k * 0.75);
  const ParabolicRun run = solve_ehj(r, g, 12.0, samples);
  const auto [hl, hu] = estimate_HL_HU(run, 0.25);
  // effective value at slope 0 is the critical value of the cell problem
  const double lam0 = estimate_lambda0(r, {-40, 40}, 1e-6);
  CHECK(hl == doctest::Approx(lam0).epsilon(0.02).scale(1.0));
  CHECK(std::abs(hu - lam0) < 0.02);
  CHECK(hu - hl < 1e-2);  // Cauchy width of the tail
  CHECK(run.HL_est <= run.HU_est);
}

TEST_CASE("estimate_HL_HU input validation") {
  ParabolicRun run;
  run.slope = {1, 1, 1, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(estimate_HL_HU(run, 0.0), ConfigError);
  CHECK_THROWS_AS(estimate_HL_HU(run, 0.1), ConfigError);  // < 4 tail samples
  CHECK(estimate_HL_HU(run, 0.6).first == doctest::Approx(1.0));
}

TEST_CASE("corrector potential is a steady profile up to the scheme drift") {
  const Realization r = sample_realization(cosine_env(), 0);
  const double lam0 = estimate_lambda0(r, {-40, 40}, 1e-6);
  const double lambda = lam0 + 1.0;
  Grid1D g = make_grid(12.0, 1.0 / 256, 0.0);

  CellConfig cc;
  cc.grid_dx = g.dx();
  auto mx = bounded_solution_window(r, lambda, {g.x_lo, g.x_hi}, SolutionRole::maximal, 1e-11, cc);
  REQUIRE(mx.ok());
  const auto pot = corrector_potential(*mx.solution);
  REQUIRE(static_cast<int>(pot.u.size()) == g.nx);
  // extend with the profile's own end slopes (integer-period window)
  g.theta_left = mx.solution->f.front();
  g.theta_right = mx.solution->f.back();

  const double t_end = 2.0;
  const ParabolicRun run = solve_ehj(r, g, t_end, {t_end}, {}, &pot.u);
  double drift = 0;
  const double reach = run.front_reach.back() + 1.0;
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x_lo + g.dx() * i;
    if (x > g.x_lo + reach && x < g.x_hi - reach)
      drift = std::max(drift, std::abs(run.final_u[i] - (pot.u[i] + lambda * t_end)));
  }
  CHECK(drift < 2e-3);
}

TEST_CASE("discrete comparison principle") {
  const Realization r = sample_realization(cosine_env(), 0);
  Grid1D g = make_grid(4.0, 1.0 / 64, 0.5);

  std::vector<double> v0(g.nx), w0(g.nx);
  SUBCASE("identical data") {
    for (int i = 0; i < g.nx; ++i) v0[i] = w0[i] = 0.5 * (g.x_lo + g.dx() * i);
    const auto verdict = comparison_check(r, g, v0, w0, 0.25);
    CHECK(verdict.pass);
    CHECK(std::abs(verdict.max_violation) <= verdict.slack);
  }
  SUBCASE("constant shift") {
    for (int i = 0; i < g.nx; ++i) {
      w0[i] = 0.5 * (g.x_lo + g.dx() * i);
      v0[i] = w0[i] - 1.0;
    }
    const auto verdict = comparison_check(r, g, v0, w0, 0.25);
    CHECK(verdict.pass);
  }
  SUBCASE("random ordered Lipschitz pairs") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> amp(0.1, 0.6), freq(0.5, 3.0), ph(0, 2 * M_PI);
    for (int trial = 0; trial < 20; ++trial) {
      const double a1 = amp(rng), f1 = freq(rng), p1 = ph(rng);
      const double a2 = amp(rng), f2 = freq(rng), p2 = ph(rng);
      const double gap = 0.05 + amp(rng);
      for (int i = 0; i < g.nx; ++i) {
        const double x = g.x_lo + g.dx() * i;
        w0[i] = 0.5 * x + a1 * std::sin(f1 * x + p1);
        v0[i] = 0.5 * x + a2 * std::sin(f2 * x + p2) -
                (gap + std::abs(a1) + std::abs(a2));
      }
      const auto verdict = comparison_check(r, g, v0, w0, 0.1);
      CHECK(verdict.pass);
    }
  }
}

TEST_CASE("epsilon study: exact scale invariance for x-free quadratic") {
  const Realization r = sample_realization(xfree_p2(), 0);
  const double theta = 1.0;
  const EpsStudy st = epsilon_study(r, theta, {0.5, 0.25, 0.125}, 1.0, 1.0 / 32);
  for (const auto& row : st.rows) CHECK(row.u_eps == doctest::Approx(1.0).epsilon(3e-3));
  CHECK(st.extrapolated == doctest::Approx(1.0).epsilon(5e-3));
  CHECK_THROWS_AS(epsilon_study(r, theta, {0.125, 0.25}, 1.0, 1.0 / 32), ConfigError);
}

TEST_CASE("Lipschitz non-inflation for linear data") {
  const Realization r = sample_realization(pinned_env(), 0);
  Grid1D g = make_grid(10.0, 1.0 / 64, 1.0);
  const ParabolicRun run = solve_ehj(r, g, 2.0, {0.5, 1.0, 1.5, 2.0});
  for (double lip : run.lip) CHECK(lip <= 1.0 * 1.1 + 0.05);
}
