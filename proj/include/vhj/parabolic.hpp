#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vhj/env.hpp"
#include "vhj/util.hpp"

namespace vhj {

/// Uniform space grid with the linear-extension boundary slope and the
/// monotone-scheme time-step control.
struct Grid1D {
  double x_lo = -10, x_hi = 10;
  int nx = 2001;               // node count, should be odd so x = 0 is a node
  double theta = 0.0;          // boundary slope of the linear extension
  // per-side overrides of the extension slope (NaN = use theta); needed when
  // the initial profile's end slopes differ from the measurement slope
  double theta_left = std::numeric_limits<double>::quiet_NaN();
  double theta_right = std::numeric_limits<double>::quiet_NaN();
  double cfl_safety = 0.45;    // dt <= cfl_safety dx^2 / (2 max a + dx sigma)
  double dx() const { return (x_hi - x_lo) / (nx - 1); }
  double slope_left() const { return std::isnan(theta_left) ? theta : theta_left; }
  double slope_right() const { return std::isnan(theta_right) ? theta : theta_right; }
  int center_index() const;    // node closest to x = 0
  void validate() const;
};

struct ParabolicConfig {
  double sigma_enlarge = 1.1;   // dissipation margin over the measured slope bound
  int nan_check_stride = 512;
  size_t memory_budget_nodes = 1 << 22;
  bool store_final_profile = true;
};

struct ParabolicRun {
  Grid1D grid;
  uint64_t seed = 0;
  double theta = 0.0;
  std::vector<double> times;     // sample times
  std::vector<double> u_center;  // u(t, 0)
  std::vector<double> slope;     // u(t, 0)/t
  std::vector<double> lip;       // measured spatial Lipschitz constant, central region
  std::vector<double> front_reach;  // integral of sigma dt: numerical domain of dependence
  double HL_est = 0.0, HU_est = 0.0;
  double sigma_max = 0.0;
  long steps = 0;
  int dt_halvings = 0;
  std::vector<double> final_u;   // optional full profile at t_end
};

/// Explicit monotone scheme for du/dt = a u_xx + H(x, u_x): centered second
/// difference plus a global Lax-Friedrichs flux H(x,(p-+p+)/2) + sigma/2 (p- - p+),
/// with sigma refreshed each step from the current gradient range.
ParabolicRun solve_ehj(const Realization& r, const Grid1D& grid, double t_end,
                       const std::vector<double>& sample_times, const ParabolicConfig& cfg = {},
                       const std::vector<double>* initial = nullptr);

/// Tail min/max of the slope series over the final `tail_fraction` of samples.
std::pair<double, double> estimate_HL_HU(const ParabolicRun& run, double tail_fraction);

struct EpsRow {
  double eps = 0.0;
  double u_eps = 0.0;       // u^eps(t_obs, 0)
  double diff_prev = 0.0;   // |u^eps - u^(previous eps)|
};

struct EpsStudy {
  std::vector<EpsRow> rows;
  double extrapolated = 0.0;  // limit estimate from the last geometric pair
  std::string note;           // set when the table is partial
};

/// Scaled-equation observation via the exact identity u^eps(t,x) = eps u(t/eps, x/eps):
/// one unscaled run to t_obs/min(eps), sampled at t_obs/eps for each eps.
EpsStudy epsilon_study(const Realization& r, double theta, const std::vector<double>& eps_list,
                       double t_obs, double dx, const ParabolicConfig& cfg = {});

struct ComparisonVerdict {
  bool pass = false;
  double max_violation = 0.0;  // max over time of max(v - w) - max(v0 - w0)
  double slack = 0.0;
};

/// Evolves an ordered pair with a shared dissipation constant and verifies the
/// discrete comparison principle.
ComparisonVerdict comparison_check(const Realization& r, const Grid1D& grid,
                                   const std::vector<double>& v0, const std::vector<double>& w0,
                                   double t_end, const ParabolicConfig& cfg = {});

/// Window half-width needed so that measurements at |x| <= margin remain inside
/// the numerical domain of dependence up to t_end.
double required_halfwidth(const Realization& r, double p_range, double t_end, double margin);

}  // namespace vhj
