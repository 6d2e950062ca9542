#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vhj/env.hpp"
#include "vhj/ivp.hpp"
#include "vhj/util.hpp"

namespace vhj {

/// Momentum band of the sublevel set {p : H(x,p) <= lambda} over a window:
/// p_minus = inf over x of the smallest such p, p_plus = sup of the largest.
struct AdmissibleBand {
  double lambda = 0.0;
  double p_minus = 0.0;
  double p_plus = 0.0;
  bool empty = true;
};

enum class SolutionRole { minimal, maximal, inserted, shot };

std::string role_name(SolutionRole r);

/// A bounded solution of a f' + H(x, f) = lambda on a window, sampled on a
/// uniform grid. f_prime holds the exact ODE derivative at the nodes;
/// residual_fd is the centered-difference consistency of the f samples.
struct CorrectorSolution {
  double lambda = 0.0;
  Interval window;
  std::vector<double> x, f, f_prime;
  double residual_sup = 0.0;
  double residual_fd = 0.0;
  SolutionRole role = SolutionRole::shot;
  double band_lo = 0.0, band_hi = 0.0;  // confinement bounds used in the search
  bool degenerate_extremal = false;     // admissible interval collapsed (minimal == maximal)
  uint64_t seed = 0;

  double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
  double value_at(double xq) const;  // linear interpolation
  double min_f() const;
  double max_f() const;
  /// Spatial mean over the central `trim` fraction of the window.
  double trimmed_mean(double trim) const;
  /// Copy restricted to the nodes inside `sub`.
  CorrectorSolution restricted(Interval sub) const;
};

struct CellConfig {
  double delta = 0.05;         // band inflation for the shooting range
  double box_delta = 1.0;      // band inflation for the safety box
  double box_margin = 1.0;     // additive margin of the safety box
  int bisect_depth = 60;
  double grid_dx = 1.0 / 256;
  double ivp_rtol = 1e-10;
  double ivp_atol = 1e-12;
  double ivp_coarse_rtol = 1e-9;  // used inside bisection sweeps
  double h_max = 0.05;
  double p_scan_dp = 1.0 / 128;   // momentum scan step for band detection
  double x_scan_dx = 1.0 / 64;    // spatial scan step for band detection
  double tie_break_rel = 0x1p-50; // admissible width below this is a tie
  double lambda0_tol = 1e-6;
  bool lambda0_richardson = true;
  double lambda0_exponent = 2.0;  // window-truncation error model lambda0 - C/L^q
};

AdmissibleBand p_bounds(const Realization& r, double lambda, Interval x_window,
                        const CellConfig& cfg = {});

/// Safety box outside which trajectories are declared blown up.
Interval safety_box(const Realization& r, double lambda, Interval x_window,
                    const CellConfig& cfg = {});

/// Adaptive integration of f' = (lambda - H(x,f))/a(x). Exits early when f
/// leaves `box` (reported as a value, not an error).
IvpTrace integrate_ivp(const Realization& r, double lambda, double x0, double f0, int direction,
                       double x_stop, double tol, Interval box,
                       const std::vector<double>* nodes = nullptr);

enum class BoundedSolveStatus { ok, empty_band, no_admissible };

struct BoundedSolveOutcome {
  BoundedSolveStatus status = BoundedSolveStatus::no_admissible;
  std::optional<CorrectorSolution> solution;
  bool ok() const { return status == BoundedSolveStatus::ok; }
};

/// Extremal bounded solution on a window. The admissible set of initial values
/// at the left endpoint is an interval (trajectories cannot cross); its upper
/// endpoint yields the maximal solution. The minimal solution is computed as
/// the maximal solution of the reflected environment, which hugs the target
/// branch with a trimmable transient instead of an amplifying one.
BoundedSolveOutcome bounded_solution_window(const Realization& r, double lambda, Interval window,
                                            SolutionRole target, double tol,
                                            const CellConfig& cfg = {});

struct Lambda0Estimate {
  double value = 0.0;                       // extrapolated estimate
  std::vector<std::pair<double, double>> per_window;  // (window length, estimate)
  bool extrapolated = false;
};

/// Critical value on a window by bisection over lambda on the predicate
/// "a bounded solution exists", with Richardson extrapolation over a doubled
/// window to compensate the finite-window relaxation.
Lambda0Estimate estimate_lambda0_detailed(const Realization& r, Interval window, double tol,
                                          const CellConfig& cfg = {});
double estimate_lambda0(const Realization& r, Interval window, double tol,
                        const CellConfig& cfg = {});

struct FuncC1 {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
};

FuncC1 constant_fn(double c);

enum class InsertStatus { ok, precondition_rejected, not_found };

struct InsertOutcome {
  InsertStatus status = InsertStatus::not_found;
  std::optional<CorrectorSolution> solution;
  double witness_x = 0.0;  // node where the precondition failed
};

/// Inserts a solution of a f' + H(x,f) = lambda strictly between m < M, given
/// that (m, M) is a strict sub/supersolution pair (either orientation) at all
/// grid nodes.
InsertOutcome insert_between(const Realization& r, const FuncC1& m, const FuncC1& M,
                             double lambda, Interval window, double tol,
                             const CellConfig& cfg = {});

enum class Ordering { identical, below, above, crossing };

struct OrderingReport {
  Ordering verdict = Ordering::identical;
  double min_gap = 0.0;    // min |f1 - f2| over the common grid
  double witness_x = 0.0;  // crossing witness
};

OrderingReport check_ordering(const CorrectorSolution& f1, const CorrectorSolution& f2);

struct CorrectorPotential {
  double lambda = 0.0;
  std::vector<double> x, u;
  double residual_sup = 0.0;
};

/// Antiderivative u of f with u(mid) = 0; (u, f) satisfies the stationary
/// equation with the stored derivative samples.
CorrectorPotential corrector_potential(const CorrectorSolution& f);

/// Number of strict local extrema detected from sign changes of f'.
int extrema_diagnostic(const CorrectorSolution& f);

/// The solution of the reflected environment corresponding to f: x -> -f(-x).
CorrectorSolution reflect_solution(const CorrectorSolution& f);

}  // namespace vhj
