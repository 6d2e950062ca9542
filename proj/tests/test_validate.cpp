#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "vhj/io.hpp"
#include "vhj/validate.hpp"

using namespace vhj;

TEST_CASE("eigensolver: flat potential and harmonic sanity") {
  // W == 0: principal periodic eigenvalue is 0 with a constant eigenfunction
  auto zero = [](double) { return 0.0; };
  const EigResult e = principal_periodic_eigenpair(zero, 1.0, 512);
  CHECK(std::abs(e.E0) < 1e-10);
  for (double v : e.phi) CHECK(v > 0);

  // constant shift moves the eigenvalue by the shift
  auto shifted = [](double) { return 1.25; };
  const EigResult es = principal_periodic_eigenpair(shifted, 1.0, 512);
  CHECK(es.E0 == doctest::Approx(1.25).epsilon(1e-10));

  // eigenvalue of -d^2 - cos(2 pi x) agrees with the discriminant root
  auto W = [](double x) { return -std::cos(2 * M_PI * x); };
  const EigResult ec = principal_periodic_eigenpair(W, 1.0, 4096);
  double lo = -1.0, hi = 0.5;
  while (floquet_discriminant(W, 1.0, lo) <= 2.0) lo -= 0.5;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (floquet_discriminant(W, 1.0, mid) > 2.0) lo = mid;
    else hi = mid;
  }
  CHECK(ec.E0 == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-7));
}

TEST_CASE("floquet branch mean equals the multiplier rate") {
  auto W = [](double x) { return -std::cos(2 * M_PI * x); };
  const LogDerivativeBranch br = floquet_branch(W, 1.0, -2.0, 1024);
  // the profile solves f' = (W - E) - f^2; verify the ODE residual directly
  for (size_t i = 1; i + 1 < br.x.size(); i += 97) {
    const double d = (br.f[i + 1] - br.f[i - 1]) / (br.x[i + 1] - br.x[i - 1]);
    const double res = d - ((W(br.x[i]) - (-2.0)) - br.f[i] * br.f[i]);
    CHECK(std::abs(res) < 1e-3);
  }
  // periodic profile: endpoints agree
  CHECK(br.f.front() == doctest::Approx(br.f.back()).epsilon(1e-8));
  CHECK(br.beta > 0);
}

TEST_CASE("hopf-cole fixture roundtrip and frozen values") {
  const HopfColeFixture fx =
      HopfColeFixture::parse(read_text_file(std::string(FIXTURE_DIR) + "/hopf_cole_cosine.csv"));
  CHECK(fx.E0 == doctest::Approx(-0.01266159).epsilon(1e-5));
  CHECK(fx.lambda_probe == doctest::Approx(1.0 - fx.E0).epsilon(1e-12));
  CHECK(fx.beta == doctest::Approx(1.000582).epsilon(1e-5));
  REQUIRE(fx.x.size() > 1000);
  const HopfColeFixture fx2 = HopfColeFixture::parse(fx.csv());
  CHECK(fx2.E0 == fx.E0);
  CHECK(fx2.f == fx.f);
}

TEST_CASE("oracle_hopf_cole passes on the cosine environment") {
  const HopfColeFixture fx =
      HopfColeFixture::parse(read_text_file(std::string(FIXTURE_DIR) + "/hopf_cole_cosine.csv"));
  ThetaConfig cfg;
  cfg.window = {-40, 40};
  const CheckReport rep = oracle_hopf_cole(preset_env("cosine"), fx, cfg);
  INFO(rep.json());
  CHECK(rep.status == CheckReport::pass);
}

TEST_CASE("run_suite: known ids run, unknown id rejected") {
  const RunConfig cfg = RunConfig::from_text(
      "env.preset = cosine\nrun.seeds = 1\nrun.window = 25\n");
  const auto reports = run_suite("class", cfg);
  REQUIRE(reports.size() == 1);
  CHECK(reports[0].status == CheckReport::pass);
  CHECK_THROWS_AS(run_suite("nope", cfg), ConfigError);
}

TEST_CASE("suite reports are reproducible bit for bit") {
  const RunConfig cfg = RunConfig::from_text(
      "env.preset = random_fourier\nrun.seeds = 2\nrun.window = 20\n");
  const auto a = run_suite("class", cfg);
  const auto b = run_suite("class", cfg);
  CHECK(reports_json(a) == reports_json(b));
}

TEST_CASE("config parsing") {
  const RunConfig c = RunConfig::from_text(
      "# comment\n"
      "env.preset = cosine\n"
      "run.seeds = 3\n"
      "eps.list = 0.25, 0.125, 0.0625\n"
      "theta.lambda_span = 5.5\n");
  CHECK(c.seeds().size() == 3);
  CHECK(c.get_list("eps.list", {}).size() == 3);
  CHECK(c.get_double("theta.lambda_span", 0) == 5.5);
  CHECK(c.hash().size() == 16);
  CHECK(c.hash() == RunConfig::from_text("run.seeds = 3\ntheta.lambda_span = 5.5\n"
                                         "eps.list = 0.25, 0.125, 0.0625\n"
                                         "env.preset = cosine\n")
                        .hash());  // order independent

  CHECK_THROWS_AS(RunConfig::from_text("bogus.key = 1\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("run.seeds = 1\nrun.seeds = 2\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("run.seeds\n"), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("run.seeds = abc\n").seeds(), ConfigError);
  CHECK_THROWS_AS(RunConfig::from_text("env.potential.model = random_fourier\n"
                                       "env.potential.decay = 1.0\n")
                      .environment(),
                  ConfigError);
  CHECK_THROWS_AS(preset_env("nonexistent"), ConfigError);
}

TEST_CASE("csv and svg writers") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "vhj_io_test";
  fs::create_directories(dir);

  CsvTable t;
  t.header = {"a", "b"};
  t.columns = {{1.0, 2.5}, {-0.125, 1e-17}};
  const std::string csv_path = (dir / "t.csv").string();
  t.write(csv_path);
  const std::string body = read_text_file(csv_path);
  CHECK(body.find("a,b\n") == 0);
  CHECK(body.find("2.5,") != std::string::npos);
  CHECK(body.find("1.0000000000000001e-17") != std::string::npos);  // full precision
  CHECK(body.find("\r") == std::string::npos);  // LF endings

  SvgSeries s;
  s.x = {0, 1, 2};
  s.y = {0, 1, 4};
  const std::string svg_path = (dir / "t.svg").string();
  write_svg_plot(svg_path, {s}, "test", "x", "y");
  const std::string svg = read_text_file(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("data (regenerate") != std::string::npos);  // embedded data comment
  fs::remove_all(dir);
}
