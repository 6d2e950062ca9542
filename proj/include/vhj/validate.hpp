#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "vhj/config.hpp"
#include "vhj/theta.hpp"

namespace vhj {

struct CheckReport {
  std::string id;
  enum Status { pass, fail, inconclusive } status = inconclusive;
  std::map<std::string, double> measured;
  std::map<std::string, double> tolerance;
  std::vector<std::string> artifacts;
  std::vector<uint64_t> seeds;
  std::string config_hash;
  std::string note;

  std::string status_name() const;
  std::string json() const;
};

std::string reports_markdown(const std::vector<CheckReport>& reports);
std::string reports_json(const std::vector<CheckReport>& reports);

struct EigResult {
  double E0 = 0.0;              // principal periodic eigenvalue
  std::vector<double> x, phi;   // positive eigenfunction over one period
  int nodes = 0;
};

/// Principal periodic eigenpair of -phi'' + W(x) phi = E phi on [0, period) by
/// inverse-power iteration on the shifted cyclic tridiagonal discretization.
EigResult principal_periodic_eigenpair(const std::function<double(double)>& W, double period,
                                       int n);

struct LogDerivativeBranch {
  double beta = 0.0;            // branch mean over one period
  std::vector<double> x, f;    // log-derivative profile on [0, period]
};

/// Positive branch with the larger multiplier of -phi'' + W phi = E phi for E
/// strictly below the principal eigenvalue; f = phi'/phi has mean +beta.
LogDerivativeBranch floquet_branch(const std::function<double(double)>& W, double period,
                                   double E, int n_samples = 4096);

/// Trace of the one-period transfer matrix of -phi'' + W phi = E phi; the
/// principal periodic eigenvalue is its smallest root of trace = 2.
double floquet_discriminant(const std::function<double(double)>& W, double period, double E,
                            int steps = 200000);

/// Hopf-Cole fixture content for quadratic separable environments.
struct HopfColeFixture {
  double E0 = 0.0;
  double lambda_probe = 0.0;     // level at which the profile is frozen
  double beta = 0.0;             // branch mean at lambda_probe
  std::vector<double> x, f;      // frozen log-derivative profile
  std::string csv() const;
  static HopfColeFixture parse(const std::string& csv);
};

/// Generates the fixture with the module eigensolver, cross-checked against
/// the transfer-matrix discriminant before freezing.
HopfColeFixture make_hopf_cole_fixture(const EnvironmentSpec& spec, int n);

/// Exactness check for x-free Hamiltonians: the inverse-map curve and the
/// long-time parabolic slope both reproduce H(theta).
CheckReport oracle_constant_coeff(const EnvironmentSpec& spec,
                                  const std::vector<double>& theta_grid, const ThetaConfig& cfg);

/// Frozen-fixture check: the cell floor matches -E0 and the maximal corrector
/// at lambda_probe matches the Floquet log-derivative profile.
CheckReport oracle_hopf_cole(const EnvironmentSpec& spec, const HopfColeFixture& fixture,
                             const ThetaConfig& cfg);

/// Named invariant suites: class, cell, bridge, theta, parabolic, end2end.
std::vector<CheckReport> run_suite(const std::string& suite, const RunConfig& config);

}  // namespace vhj
