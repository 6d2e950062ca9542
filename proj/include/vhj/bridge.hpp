#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vhj/cell.hpp"

namespace vhj {

enum class BridgeVerdict { crossed, confined };

/// Trajectory of the level-mu equation launched on one stationary solution,
/// watched for its first crossing of the other one.
struct BridgeResult {
  double mu = 0.0;
  double lambda = 0.0;           // level of the bracketing solutions
  bool descent = true;           // started on f2 (descent) or f1 (ascent)
  double start_x = 0.0;          // launch point (the left end of the shot)
  double crossing_x = 0.0;       // +inf sentinel when confined
  BridgeVerdict verdict = BridgeVerdict::confined;
  std::vector<double> x, g;      // trajectory on the bracketing solutions' grid
  double min_gap_lower = 0.0;    // min(g - f1) while confined
  double min_gap_upper = 0.0;    // min(f2 - g) while confined
  /// Mean of the trajectory tail (transient skipped); meaningful when confined.
  double tail_mean = 0.0;

  static constexpr double kNoCrossing = std::numeric_limits<double>::infinity();
};

struct BridgeConfig {
  double tol = 1e-10;
  double retry_tol = 1e-12;
  double grow_slack = 1e-7;   // tolerated overshoot past the launch solution
  double tail_skip = 0.25;    // fraction of the shot dropped before tail statistics
};

/// Integrates the mu-level equation forward from (start_x, f2(start_x)) and
/// reports the first crossing of f1, or confinement through the window end.
/// Requires mu < lambda and f1 < f2.
BridgeResult shoot_descend(const Realization& r, const CorrectorSolution& f1,
                           const CorrectorSolution& f2, double mu, double window_halfwidth,
                           const BridgeConfig& cfg = {});

/// Mirror case: starts on f1, watches for the crossing of f2. Requires mu > lambda.
BridgeResult shoot_ascend(const Realization& r, const CorrectorSolution& f1,
                          const CorrectorSolution& f2, double mu, double window_halfwidth,
                          const BridgeConfig& cfg = {});

enum class GlueStatus { ok, failed_residual };

/// Piecewise bridge mollified with a triangular kernel and blended with a
/// quintic smoothstep cutoff; the kernel index grows until the one-sided
/// residual inequality holds at every node.
struct GluedFunction {
  GlueStatus status = GlueStatus::failed_residual;
  double mu = 0.0;
  double epsilon = 0.0;
  bool descent = true;
  int mollifier_index = 0;       // kernel half-width is 1/index
  double cutoff_lo = 0.0, cutoff_hi = 0.0;  // outer ends of the smoothstep ramps
  double ramp_width = 0.0;
  double cutoff_slope_sup = 0.0; // sup |xi'| = 1.875 / ramp_width
  std::vector<double> x, g, residual;  // residual = a g' + H(x, g) - mu
  double residual_min = 0.0, residual_max = 0.0;
  double worst_x = 0.0;          // node violating the inequality on failure
};

GluedFunction mollify_glue(const Realization& r, const CorrectorSolution& f_left,
                           const CorrectorSolution& f_right, const BridgeResult& bridge,
                           double mu, double epsilon, double r_margin, int index_cap = 1 << 14);

struct GapLevelRow {
  double mu = 0.0;
  bool skipped = false;               // mu == lambda
  std::vector<int> window_schedule;   // half-widths n used
  std::vector<BridgeVerdict> verdicts;
  BridgeVerdict final_verdict = BridgeVerdict::confined;
  double tail_mean = 0.0;             // interior-solution mean when confined
};

/// Sweeps mu over a grid, shooting at each window half-width in the schedule.
/// "Crossed at every window" is the numerical emptiness evidence; a confined
/// verdict at the largest window witnesses a trapped stationary solution.
std::vector<GapLevelRow> detect_gap_level(const Realization& r, const CorrectorSolution& f1,
                                          const CorrectorSolution& f2,
                                          const std::vector<double>& mu_grid,
                                          const std::vector<int>& n_schedule,
                                          const BridgeConfig& cfg = {});

}  // namespace vhj
