#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vhj/bridge.hpp"
#include "vhj/cell.hpp"

namespace vhj {

/// Extremal-branch sample of the mean map at one level.
struct ThetaSample {
  double lambda = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double stderr_min = 0.0, stderr_max = 0.0;
  int n_seeds = 0;
  std::vector<uint64_t> seeds_used;
  bool degenerate = false;   // extremal solutions coincide (level at the floor)
  bool flagged = false;      // monotonicity suspect at this sample
  double stderr_max_of() const { return std::max(stderr_min, stderr_max); }
};

struct ThetaMap {
  std::vector<ThetaSample> samples;  // sorted by lambda
  double lambda0 = 0.0;
  bool monotone_validated = false;
  bool disjoint_validated = false;
  std::vector<std::string> notes;
};

struct ThetaConfig {
  Interval window{-40, 40};
  double trim = 0.8;            // central fraction kept by the mean estimator
  double tol = 1e-9;            // cell solve tolerance
  CellConfig cell;
  double label_tol = 5e-3;      // gap side-label agreement
  int max_label_refinements = 12;
  double gap_resolution_factor = 1.5;  // gaps must exceed this times branch spacing
  // certification sweep
  double collar = 0.02;         // |mu - lambda| collar excluded from shooting
  double mu_step = 0.05;
  double reach = 12.0;          // how far the mu march may travel
  int min_probes = 4;
  int consecutive_crossed_stop = 2;
  std::vector<int> n_schedule{10, 20, 40};
  double interior_theta_res = 0.02;  // refine mu until interior samples are this dense
  int max_interior_samples = 240;
  unsigned workers = 0;
};

enum class ThetaStatus { ok, below_floor };

struct ThetaOutcome {
  ThetaStatus status = ThetaStatus::below_floor;
  std::optional<ThetaSample> sample;
  std::vector<std::string> notes;  // dropped seeds etc.
};

/// Per-seed extremal solutions and their trimmed spatial means, aggregated
/// across seeds (mean and standard error). Failed seeds are dropped with a
/// note; if every seed fails the level is reported as below the floor.
ThetaOutcome theta_of_lambda(const EnvironmentSpec& spec, double lambda,
                             const std::vector<uint64_t>& seeds, const ThetaConfig& cfg);

ThetaMap build_theta_map(const EnvironmentSpec& spec, const std::vector<double>& lambda_grid,
                         const std::vector<uint64_t>& seeds, const ThetaConfig& cfg);

struct GapCandidate {
  double theta1 = 0.0, theta2 = 0.0;
  double lambda_left = 0.0, lambda_right = 0.0;
  bool labels_agree = false;
};

/// Gaps of the sampled image {theta_min, theta_max} wider than the detection
/// threshold. min_width <= 0 picks the threshold from the branch spacing.
std::vector<GapCandidate> detect_gaps(const ThetaMap& map, double min_width = 0.0);

/// Bisects the lambda grid between disagreeing gap labels (up to the
/// configured refinement count), inserting new samples into the map.
void refine_gap_labels(const EnvironmentSpec& spec, ThetaMap& map,
                       const std::vector<uint64_t>& seeds, const ThetaConfig& cfg);

enum class GapVerdict { certified_flat, refuted, inconclusive };

struct InteriorSample {
  double theta = 0.0;
  double lambda = 0.0;
};

struct GapReport {
  GapCandidate gap;
  GapVerdict verdict = GapVerdict::inconclusive;
  double lambda_label = 0.0;
  int probes_crossed = 0;
  int probes_confined = 0;
  std::vector<GapLevelRow> evidence;
  std::vector<InteriorSample> interior;  // trapped-solution means when refuted
  std::string note;
};

/// Tests a candidate gap with the bridging machinery: crossings at every
/// probed level support a flat part; a confined shot exhibits a stationary
/// solution strictly inside the gap (with its mean sampled), refuting it.
GapReport certify_gap(const EnvironmentSpec& spec, const GapCandidate& gap,
                      const std::vector<uint64_t>& seeds, const ThetaConfig& cfg);

struct FlatSegment {
  double theta1 = 0.0, theta2 = 0.0;
  double lambda = 0.0;
};

struct EffectiveCurve {
  std::vector<double> theta, value;
  std::vector<uint8_t> flat_flag;
  std::vector<FlatSegment> flat_segments;
  double lambda0 = 0.0;
  bool floor_ok = true;       // value >= lambda0 - tol everywhere
  bool coercive_ok = true;    // extreme values exceed the central one
  std::vector<std::pair<double, double>> samples;  // full (theta, lambda) graph
};

/// Monotone-per-branch inversion of the sampled map, flat filling on certified
/// gaps, interior samples of refuted gaps merged into the graph. Evaluation
/// outside the sampled span is refused.
EffectiveCurve invert_to_effective(const ThetaMap& map, const std::vector<GapReport>& reports,
                                   const std::vector<double>& theta_grid);

struct EffectivePipelineResult {
  double lambda0 = 0.0;
  ThetaMap map;
  std::vector<GapReport> gap_reports;
  EffectiveCurve curve;
};

/// Full pipeline: floor estimate, map over a lambda grid, gap detection with
/// label refinement and certification, curve assembly.
EffectivePipelineResult run_effective_pipeline(const EnvironmentSpec& spec,
                                               const std::vector<uint64_t>& seeds,
                                               const std::vector<double>& lambda_grid,
                                               const std::vector<double>& theta_grid,
                                               const ThetaConfig& cfg);

}  // namespace vhj
