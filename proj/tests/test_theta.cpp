#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "vhj/theta.hpp"

using namespace vhj;

namespace {

EnvironmentSpec xfree(HamForm form, double gamma = 2.0) {
  EnvironmentSpec s;
  s.form = form;
  s.gamma = gamma;
  s.potential.model = FieldModel::constant;
  s.potential.constant_value = 0.0;
  s.diffusion.model = FieldModel::constant;
  s.diffusion.constant_value = 1.0;
  s.a_min = 1.0;
  return s;
}

EnvironmentSpec cosine_env() {
  EnvironmentSpec s = xfree(HamForm::separable);
  s.potential.model = FieldModel::periodic_cosine;
  s.potential.amplitude = 1.0;
  s.potential.period = 1.0;
  s.potential.harmonics = {1.0};
  return s;
}

ThetaConfig quick_cfg() {
  ThetaConfig cfg;
  cfg.window = {-30, 30};
  return cfg;
}

}  // namespace

TEST_CASE("theta samples for the quadratic Hamiltonian") {
  const auto spec = xfree(HamForm::separable);
  const std::vector<uint64_t> seeds{0};
  ThetaConfig cfg = quick_cfg();

  auto s1 = theta_of_lambda(spec, 1.0, seeds, cfg);
  REQUIRE(s1.status == ThetaStatus::ok);
  CHECK(s1.sample->theta_max == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(s1.sample->theta_min == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(s1.sample->stderr_max == 0.0);  // deterministic environment

  // at the floor the extremal branches collapse (slow relaxation makes the
  // finite-window means close to zero, not exactly zero)
  auto s0 = theta_of_lambda(spec, 0.0, seeds, cfg);
  REQUIRE(s0.status == ThetaStatus::ok);
  CHECK(std::abs(s0.sample->theta_max) < 0.12);
  CHECK(std::abs(s0.sample->theta_min) < 0.12);
}

TEST_CASE("theta map branches: sqrt growth for p^2 and cube-root for |p|^3") {
  const std::vector<uint64_t> seeds{0};
  ThetaConfig cfg = quick_cfg();

  const ThetaMap m2 = build_theta_map(xfree(HamForm::separable), {0.0, 1.0, 4.0}, seeds, cfg);
  REQUIRE(m2.samples.size() == 3);
  CHECK(m2.samples[1].theta_max == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m2.samples[2].theta_max == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(m2.samples[1].theta_min == doctest::Approx(-1.0).epsilon(1e-6));

  const ThetaMap m3 =
      build_theta_map(xfree(HamForm::separable, 3.0), {0.0, 1.0, 8.0}, seeds, cfg);
  REQUIRE(m3.samples.size() == 3);
  CHECK(m3.samples[1].theta_max == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(m3.samples[2].theta_max == doctest::Approx(2.0).epsilon(1e-5));

  // no gaps: the image tiles the line at grid resolution
  CHECK(detect_gaps(m2).empty());
  CHECK(detect_gaps(m3).empty());
}

TEST_CASE("single-sample map yields no gaps") {
  const std::vector<uint64_t> seeds{0};
  const ThetaMap m = build_theta_map(xfree(HamForm::separable), {1.0}, seeds, quick_cfg());
  CHECK(detect_gaps(m).empty());
}

TEST_CASE("strictly monotone branches on a periodic environment") {
  const std::vector<uint64_t> seeds{0};
  ThetaConfig cfg = quick_cfg();
  const double l0 = 0.0127;  // near the known floor; exactness not needed here
  const ThetaMap m = build_theta_map(cosine_env(), linspace(l0 + 0.3, l0 + 6.0, 8), seeds, cfg);
  REQUIRE(m.samples.size() == 8);
  CHECK(m.monotone_validated);
  for (size_t i = 0; i + 1 < m.samples.size(); ++i) {
    CHECK(m.samples[i + 1].theta_max > m.samples[i].theta_max);
    CHECK(m.samples[i + 1].theta_min < m.samples[i].theta_min);
  }
  CHECK(m.disjoint_validated);
}

TEST_CASE("invert: quadratic curve matches theta^2") {
  const std::vector<uint64_t> seeds{0};
  ThetaConfig cfg = quick_cfg();
  const auto spec = xfree(HamForm::separable);
  const ThetaMap m = build_theta_map(spec, linspace(0.01, 6.0, 25), seeds, cfg);
  const EffectiveCurve curve = invert_to_effective(m, {}, {-1.5, -0.5, 0.5, 1.0, 1.5, 2.0});
  for (size_t i = 0; i < curve.theta.size(); ++i)
    CHECK(curve.value[i] ==
          doctest::Approx(curve.theta[i] * curve.theta[i]).epsilon(0).scale(0).epsilon(2e-2));
  CHECK(curve.floor_ok);
  CHECK(curve.coercive_ok);
  // inverse consistency at a sampled branch point
  const EffectiveCurve at_sample =
      invert_to_effective(m, {}, {m.samples[5].theta_max});
  CHECK(at_sample.value[0] == doctest::Approx(m.samples[5].lambda).epsilon(1e-9));
  // extrapolation refused outside the sampled span
  CHECK_THROWS_AS(invert_to_effective(m, {}, {50.0}), std::out_of_range);
}

TEST_CASE("x-free double well: interior branches refute the central gap") {
  const std::vector<uint64_t> seeds{0};
  ThetaConfig cfg = quick_cfg();
  cfg.window = {-40, 40};
  cfg.n_schedule = {10, 20};
  cfg.mu_step = 0.1;
  cfg.reach = 2.0;
  const auto spec = xfree(HamForm::double_well);

  EffectivePipelineResult pipe =
      run_effective_pipeline(spec, seeds, linspace(1e-4, 9.0, 16), {}, cfg);
  // the floor of (p^2-1)^2 is 0
  CHECK(std::abs(pipe.lambda0) < 5e-3);
  // extremal sampling leaves an apparent gap around zero, which the bridge
  // shots refute by exhibiting the interior branch
  REQUIRE(!pipe.gap_reports.empty());
  bool any_refuted = false;
  for (const auto& rep : pipe.gap_reports) {
    if (rep.verdict == GapVerdict::refuted) {
      any_refuted = true;
      CHECK(!rep.interior.empty());
    }
  }
  CHECK(any_refuted);
  CHECK(pipe.curve.flat_segments.empty());

  // the assembled curve reproduces H(theta) = (theta^2-1)^2 on the inner range
  for (double th : {0.0, 0.5, -0.5, 0.9}) {
    const EffectiveCurve c = invert_to_effective(pipe.map, pipe.gap_reports, {th});
    const double expect = (th * th - 1) * (th * th - 1);
    CHECK(std::abs(c.value[0] - expect) < 1e-2);
  }
}
