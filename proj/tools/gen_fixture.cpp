// Generates the frozen Hopf-Cole fixture for the cosine environment. The
// eigenvalue is computed by two independent routes (inverse iteration on the
// cyclic discretization and the transfer-matrix discriminant root); the
// fixture is only written when they agree.

#include <cmath>
#include <iostream>

#include "vhj/config.hpp"
#include "vhj/io.hpp"
#include "vhj/validate.hpp"

using namespace vhj;

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : "tests/fixtures/hopf_cole_cosine.csv";
  const EnvironmentSpec spec = preset_env("cosine");
  const Realization r = sample_realization(spec, 0);
  auto W = [&](double x) { return -(r.H(x, 0.0)); };
  const double period = spec.potential.period;

  const HopfColeFixture fx = make_hopf_cole_fixture(spec, 4096);

  // independent route: smallest root of the discriminant equation
  double lo = -2.5, hi;
  while (floquet_discriminant(W, period, lo) <= 2.0) lo -= 1.0;
  hi = lo + 0.5;
  while (floquet_discriminant(W, period, hi) > 2.0) hi += 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (floquet_discriminant(W, period, mid) > 2.0) lo = mid;
    else hi = mid;
  }
  const double E0_disc = 0.5 * (lo + hi);

  std::cout.precision(15);
  std::cout << "E0 (inverse iteration):   " << fx.E0 << "\n";
  std::cout << "E0 (discriminant root):   " << E0_disc << "\n";
  std::cout << "difference:               " << std::abs(fx.E0 - E0_disc) << "\n";
  if (std::abs(fx.E0 - E0_disc) > 1e-8) {
    std::cerr << "routes disagree; fixture NOT written\n";
    return 1;
  }
  std::cout << "lambda_probe = " << fx.lambda_probe << ", beta = " << fx.beta << "\n";
  write_text_file(out, fx.csv());
  std::cout << "fixture written to " << out << "\n";
  return 0;
}
