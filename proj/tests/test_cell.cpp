#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracle_support.hpp"
#include "vhj/cell.hpp"

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

EnvironmentSpec xfree_p2_plus(double c) {
  EnvironmentSpec s = xfree_p2();
  s.potential.constant_value = c;
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

double cosineV(double x) { return std::cos(2 * M_PI * x); }

}  // namespace

TEST_CASE("p_bounds closed forms") {
  const Realization r = sample_realization(xfree_p2(), 0);
  AdmissibleBand b = p_bounds(r, 4.0, {-5, 5});
  REQUIRE(!b.empty);
  CHECK(b.p_minus == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(b.p_plus == doctest::Approx(2.0).epsilon(1e-10));

  const Realization rc = sample_realization(cosine_env(), 0);
  b = p_bounds(rc, 1.0, {-5, 5});
  REQUIRE(!b.empty);
  CHECK(b.p_plus == doctest::Approx(std::sqrt(2.0)).epsilon(1e-8));
  CHECK(b.p_minus == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-8));

  b = p_bounds(r, -1.0, {-5, 5});
  CHECK(b.empty);

  // monotone in lambda
  AdmissibleBand b1 = p_bounds(rc, 1.5, {-5, 5});
  AdmissibleBand b2 = p_bounds(rc, 2.5, {-5, 5});
  CHECK(b1.p_minus >= b2.p_minus);
  CHECK(b1.p_plus <= b2.p_plus);
}

TEST_CASE("integrate_ivp: Riccati fixed point, relaxation, blow-down") {
  const Realization r = sample_realization(xfree_p2(), 0);
  const Interval box{-3, 3};

  // fixed point f == 1 at lambda = 1
  std::vector<double> nodes = linspace(-10, 10, 101);
  IvpTrace t = integrate_ivp(r, 1.0, -10, 1.0, +1, 10, 1e-10, box, &nodes);
  REQUIRE(!t.exit);
  for (double f : t.f) CHECK(f == doctest::Approx(1.0).epsilon(1e-9));

  // relaxation to sqrt(1/2): closed form f = sqrt(l) coth(sqrt(l)(x - x0))
  nodes = linspace(-10, 0, 51);
  t = integrate_ivp(r, 0.5, -10, 1.0, +1, 0, 1e-11, box, &nodes);
  REQUIRE(!t.exit);
  const double sl = std::sqrt(0.5);
  const double x0 = -10 - std::atanh(sl / 1.0) / sl;
  for (size_t i = 0; i < t.x.size(); ++i) {
    const double ref = sl / std::tanh(sl * (t.x[i] - x0));
    CHECK(t.f[i] == doctest::Approx(ref).epsilon(1e-8));
  }
  CHECK(std::abs(t.f.back() - sl) < 1e-6);

  // blow-down below the repelling branch: f(0) = -1.001 with lambda = 1
  // exits the box bottom at x = artanh(1/1.001) - artanh(1/3)
  t = integrate_ivp(r, 1.0, 0.0, -1.001, +1, 40, 1e-11, box, nullptr);
  REQUIRE(t.exit.has_value());
  CHECK(t.exit->dir == -1);
  const double x_pred = std::atanh(1.0 / 1.001) - std::atanh(1.0 / 3.0);
  CHECK(t.exit->x == doctest::Approx(x_pred).epsilon(1e-4));
}

TEST_CASE("bounded_solution_window: constants for the quadratic Hamiltonian") {
  const Realization r = sample_realization(xfree_p2(), 0);
  const Interval win{-20, 20};
  auto mx = bounded_solution_window(r, 1.0, win, SolutionRole::maximal, 1e-10);
  REQUIRE(mx.ok());
  CHECK(mx.solution->trimmed_mean(0.8) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mx.solution->residual_sup < 1e-8);
  CHECK(mx.solution->residual_fd < 1e-3);

  auto mn = bounded_solution_window(r, 1.0, win, SolutionRole::minimal, 1e-10);
  REQUIRE(mn.ok());
  CHECK(mn.solution->trimmed_mean(0.8) == doctest::Approx(-1.0).epsilon(1e-6));
  // the minimal solution hugs -1 on the bulk of the window; the entry
  // transient of the mirrored search sits at the right edge
  const auto& s = *mn.solution;
  for (size_t i = 0; i < s.x.size(); ++i)
    if (s.x[i] < 14)
      CHECK(s.f[i] == doctest::Approx(-1.0).epsilon(1e-6));

  // below the window critical value: no admissible start
  auto fail = bounded_solution_window(r, -0.5, {-10, 10}, SolutionRole::maximal, 1e-10);
  CHECK(!fail.ok());

  // empty band case
  auto eb = bounded_solution_window(r, -3.0, {-10, 10}, SolutionRole::maximal, 1e-10);
  CHECK(eb.status == BoundedSolveStatus::empty_band);
}

TEST_CASE("bounded_solution_window: periodic cosine vs Floquet oracle") {
  const Realization r = sample_realization(cosine_env(), 0);
  const Interval win{-30, 30};
  const double lambda = 2.0;
  auto mx = bounded_solution_window(r, lambda, win, SolutionRole::maximal, 1e-11);
  REQUIRE(mx.ok());

  const auto branch = oracle::floquet_max_branch(cosineV, 1.0, -lambda);
  // spatial average over the trimmed window (integer period count) vs beta
  CHECK(mx.solution->trimmed_mean(0.8) == doctest::Approx(branch.beta).epsilon(1e-4));

  // sup-norm profile agreement away from the entry transient
  const auto& s = *mx.solution;
  double sup = 0;
  for (size_t i = 0; i < s.x.size(); ++i)
    if (s.x[i] > -24 && s.x[i] < 24)
      sup = std::max(sup, std::abs(s.f[i] - oracle::interp_periodic(branch, 1.0, s.x[i])));
  CHECK(sup < 1e-3);

  // minimal solution mirrors the branch by the even symmetry of the potential
  auto mn = bounded_solution_window(r, lambda, win, SolutionRole::minimal, 1e-11);
  REQUIRE(mn.ok());
  CHECK(mn.solution->trimmed_mean(0.8) == doctest::Approx(-branch.beta).epsilon(1e-4));
}

TEST_CASE("estimate_lambda0: constants and shift") {
  const Realization r = sample_realization(xfree_p2(), 0);
  const double l0 = estimate_lambda0(r, {-30, 30}, 1e-6);
  CHECK(std::abs(l0) < 5e-4);

  const Realization rc = sample_realization(xfree_p2_plus(0.7), 0);
  CHECK(std::abs(estimate_lambda0(rc, {-30, 30}, 1e-6) - 0.7) < 5e-4);
}

TEST_CASE("estimate_lambda0: periodic cosine vs eigenvalue oracle") {
  const Realization r = sample_realization(cosine_env(), 0);
  const double E0 = oracle::principal_eigenvalue(cosineV, 1.0, 1.0);
  const double lam0 = estimate_lambda0(r, {-40, 40}, 1e-6);
  CHECK(std::abs(lam0 - (-E0)) < 1e-4);
}

TEST_CASE("insert_between") {
  const Realization r = sample_realization(xfree_p2(), 0);
  SUBCASE("contracting funnel pins the constant solution") {
    auto out = insert_between(r, constant_fn(0.0), constant_fn(2.0), 1.0, {-10, 10}, 1e-10);
    REQUIRE(out.status == InsertStatus::ok);
    for (double f : out.solution->f) CHECK(f == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(out.solution->role == SolutionRole::inserted);
  }
  SUBCASE("swapped walls are rejected with a witness") {
    auto out = insert_between(r, constant_fn(2.0), constant_fn(0.0), 1.0, {-10, 10}, 1e-10);
    CHECK(out.status == InsertStatus::precondition_rejected);
  }
  SUBCASE("periodic environment between safe constants") {
    const Realization rc = sample_realization(cosine_env(), 0);
    // sup H(x, 1.2) = 2.44 < 3 < 3.41 = inf H(x, 2.1)
    auto out = insert_between(rc, constant_fn(1.2), constant_fn(2.1), 3.0, {-10, 10}, 1e-10);
    REQUIRE(out.status == InsertStatus::ok);
    CHECK(out.solution->residual_sup < 1e-8);
    for (size_t i = 0; i < out.solution->x.size(); ++i) {
      CHECK(out.solution->f[i] > 1.2);
      CHECK(out.solution->f[i] < 2.1);
    }
  }
}

TEST_CASE("check_ordering") {
  const Realization r = sample_realization(xfree_p2(), 0);
  const Interval win{-20, 20};
  auto mx1 = bounded_solution_window(r, 1.0, win, SolutionRole::maximal, 1e-10);
  auto mn1 = bounded_solution_window(r, 1.0, win, SolutionRole::minimal, 1e-10);
  auto mx2 = bounded_solution_window(r, 2.0, win, SolutionRole::maximal, 1e-10);
  REQUIRE(mx1.ok());
  REQUIRE(mn1.ok());
  REQUIRE(mx2.ok());

  auto self = check_ordering(*mx1.solution, *mx1.solution);
  CHECK(self.verdict == Ordering::identical);

  auto mm = check_ordering(*mn1.solution, *mx1.solution);
  CHECK(mm.verdict == Ordering::below);
  CHECK(mm.min_gap == doctest::Approx(2.0).epsilon(1e-5));

  // compare away from the entry transients
  auto ord = check_ordering(mx1.solution->restricted({-14, 14}),
                            mx2.solution->restricted({-14, 14}));
  CHECK(ord.verdict == Ordering::below);
  CHECK(ord.min_gap == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-5));
}

TEST_CASE("corrector_potential and extrema diagnostic") {
  // synthetic f == 1 on [-1, 1]
  CorrectorSolution one;
  one.lambda = 1.0;
  one.window = {-1, 1};
  one.x = linspace(-1, 1, 257);
  one.f.assign(one.x.size(), 1.0);
  one.f_prime.assign(one.x.size(), 0.0);
  auto u = corrector_potential(one);
  for (size_t i = 0; i < u.x.size(); ++i)
    CHECK(u.u[i] == doctest::Approx(u.x[i]).epsilon(1e-12));
  CHECK(extrema_diagnostic(one) == 0);

  CorrectorSolution zero = one;
  zero.f.assign(zero.x.size(), 0.0);
  auto u0 = corrector_potential(zero);
  for (double v : u0.u) CHECK(v == doctest::Approx(0.0));

  // solver output: constant branch has no extrema even with the transient
  const Realization r = sample_realization(xfree_p2(), 0);
  auto mx = bounded_solution_window(r, 1.0, {-12, 12}, SolutionRole::maximal, 1e-10);
  REQUIRE(mx.ok());
  CHECK(extrema_diagnostic(*mx.solution) == 0);

  const Realization rc = sample_realization(cosine_env(), 0);
  auto per = bounded_solution_window(rc, 2.0, {-10, 10}, SolutionRole::maximal, 1e-10);
  REQUIRE(per.ok());
  CHECK(extrema_diagnostic(*per.solution) >= 10);  // one oscillation per period
}

TEST_CASE("confinement bounds hold for decreasing inflation (sharp-bound suite)") {
  const Realization rc = sample_realization(cosine_env(), 0);
  const double lambda = 2.0;
  auto mx = bounded_solution_window(rc, lambda, {-25, 25}, SolutionRole::maximal, 1e-10);
  auto mn = bounded_solution_window(rc, lambda, {-25, 25}, SolutionRole::minimal, 1e-10);
  REQUIRE(mx.ok());
  REQUIRE(mn.ok());
  for (double delta : {1.0, 0.5, 0.25, 0.1}) {
    const AdmissibleBand b = p_bounds(rc, lambda + delta, {-25, 25});
    REQUIRE(!b.empty);
    CHECK(mx.solution->max_f() <= b.p_plus + 1e-6);
    CHECK(mx.solution->min_f() >= b.p_minus - 1e-6);
    CHECK(mn.solution->max_f() <= b.p_plus + 1e-6);
    CHECK(mn.solution->min_f() >= b.p_minus - 1e-6);
  }
}

TEST_CASE("monotonicity in lambda and quantitative separation") {
  const Realization rc = sample_realization(cosine_env(), 0);
  const Interval win{-25, 25};
  const double l2 = 2.0;
  auto top = bounded_solution_window(rc, l2, win, SolutionRole::maximal, 1e-10);
  REQUIRE(top.ok());

  std::vector<double> dl, gap;
  for (double l1 : {1.9, 1.7, 1.5, 1.2, 1.0}) {
    auto lower = bounded_solution_window(rc, l1, win, SolutionRole::maximal, 1e-10);
    REQUIRE(lower.ok());
    auto ord = check_ordering(*lower.solution, *top.solution);
    CHECK(ord.verdict == Ordering::below);  // no crossing, strict order
    dl.push_back(l2 - l1);
    gap.push_back(ord.min_gap);
    CHECK(ord.min_gap > 0);
  }
  // positive linear-fit slope of gap vs (l2 - l1)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(dl.size());
  for (size_t i = 0; i < dl.size(); ++i) {
    sx += dl[i];
    sy += gap[i];
    sxx += dl[i] * dl[i];
    sxy += dl[i] * gap[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope > 0);

  // minimal branch decreases in lambda
  auto mn1 = bounded_solution_window(rc, 1.5, win, SolutionRole::minimal, 1e-10);
  auto mn2 = bounded_solution_window(rc, 2.5, win, SolutionRole::minimal, 1e-10);
  REQUIRE(mn1.ok());
  REQUIRE(mn2.ok());
  auto ord = check_ordering(*mn2.solution, *mn1.solution);
  CHECK(ord.verdict == Ordering::below);
}

TEST_CASE("duality: potential satisfies the stationary equation residual") {
  const Realization rc = sample_realization(cosine_env(), 0);
  auto mx = bounded_solution_window(rc, 2.0, {-10, 10}, SolutionRole::maximal, 1e-10);
  REQUIRE(mx.ok());
  // residual in the ODE form, with the stored derivative samples
  CHECK(mx.solution->residual_sup < 1e-8);
  auto u = corrector_potential(*mx.solution);
  CHECK(u.residual_sup < 1e-8);
  // u'' from the identity (lambda - H(x, u'))/a reproduces f' at the nodes
  const auto& s = *mx.solution;
  for (size_t i = 0; i < s.x.size(); i += 37) {
    const double upp = (2.0 - rc.H(s.x[i], s.f[i])) / rc.a(s.x[i]);
    CHECK(upp == doctest::Approx(s.f_prime[i]).epsilon(1e-9));
  }
}
