#include "vhj/theta.hpp"

#include <algorithm>
#include <cmath>

namespace vhj {

namespace {

struct SeedMeans {
  bool ok = false;
  double mean_min = 0, mean_max = 0;
  bool degenerate = false;
};

SeedMeans solve_seed(const EnvironmentSpec& spec, double lambda, uint64_t seed,
                     const ThetaConfig& cfg) {
  SeedMeans out;
  const Realization r = sample_realization(spec, seed);
  const auto mn =
      bounded_solution_window(r, lambda, cfg.window, SolutionRole::minimal, cfg.tol, cfg.cell);
  if (!mn.ok()) return out;
  const auto mx =
      bounded_solution_window(r, lambda, cfg.window, SolutionRole::maximal, cfg.tol, cfg.cell);
  if (!mx.ok()) return out;
  out.ok = true;
  out.mean_min = mn.solution->trimmed_mean(cfg.trim);
  out.mean_max = mx.solution->trimmed_mean(cfg.trim);
  out.degenerate = mn.solution->degenerate_extremal || mx.solution->degenerate_extremal;
  return out;
}

}  // namespace

ThetaOutcome theta_of_lambda(const EnvironmentSpec& spec, double lambda,
                             const std::vector<uint64_t>& seeds, const ThetaConfig& cfg) {
  ThetaOutcome out;
  std::vector<SeedMeans> per(seeds.size());
  parallel_for(seeds.size(), cfg.workers,
               [&](size_t i) { per[i] = solve_seed(spec, lambda, seeds[i], cfg); });

  ThetaSample s;
  s.lambda = lambda;
  std::vector<double> mins, maxs;
  for (size_t i = 0; i < seeds.size(); ++i) {
    if (!per[i].ok) {
      out.notes.push_back("seed " + std::to_string(seeds[i]) + " dropped at lambda=" +
                          std::to_string(lambda));
      continue;
    }
    mins.push_back(per[i].mean_min);
    maxs.push_back(per[i].mean_max);
    s.seeds_used.push_back(seeds[i]);
    s.degenerate = s.degenerate || per[i].degenerate;
  }
  if (mins.empty()) {
    out.status = ThetaStatus::below_floor;
    return out;
  }
  auto mean_of = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
  };
  auto stderr_of = [](const std::vector<double>& v, double m) {
    if (v.size() < 2) return 0.0;
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) /
                     static_cast<double>(v.size()));
  };
  s.n_seeds = static_cast<int>(mins.size());
  s.theta_min = mean_of(mins);
  s.theta_max = mean_of(maxs);
  s.stderr_min = stderr_of(mins, s.theta_min);
  s.stderr_max = stderr_of(maxs, s.theta_max);
  out.status = ThetaStatus::ok;
  out.sample = std::move(s);
  return out;
}

namespace {

void validate_map(ThetaMap& map, double label_tol) {
  auto& v = map.samples;
  std::sort(v.begin(), v.end(),
            [](const ThetaSample& a, const ThetaSample& b) { return a.lambda < b.lambda; });
  map.monotone_validated = true;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    const double tol_up = 3 * (v[i].stderr_max + v[i + 1].stderr_max);
    const double tol_dn = 3 * (v[i].stderr_min + v[i + 1].stderr_min);
    const bool up_ok = v[i + 1].theta_max > v[i].theta_max - tol_up;
    const bool dn_ok = v[i + 1].theta_min < v[i].theta_min + tol_dn;
    if (!up_ok || !dn_ok) {
      v[i + 1].flagged = true;
      map.monotone_validated = false;
      map.notes.push_back("monotonicity suspect between lambda=" + std::to_string(v[i].lambda) +
                          " and " + std::to_string(v[i + 1].lambda) +
                          " (window likely too short)");
    }
  }
  map.disjoint_validated = true;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j) {
      if (std::abs(v[i].lambda - v[j].lambda) <= label_tol) continue;
      const double res = 3 * (v[i].stderr_max_of() + v[j].stderr_max_of());
      if (res <= 0) continue;
      const double pairs[4] = {std::abs(v[i].theta_min - v[j].theta_min),
                               std::abs(v[i].theta_min - v[j].theta_max),
                               std::abs(v[i].theta_max - v[j].theta_min),
                               std::abs(v[i].theta_max - v[j].theta_max)};
      for (double d : pairs)
        if (d <= res) {
          map.disjoint_validated = false;
          map.notes.push_back("branch values overlap at stderr resolution: lambda=" +
                              std::to_string(v[i].lambda) + " vs " + std::to_string(v[j].lambda));
        }
    }
}

struct ImagePoint {
  double theta;
  double lambda;
  int branch;  // -1 minimal branch, +1 maximal branch
};

std::vector<ImagePoint> image_points(const ThetaMap& map) {
  std::vector<ImagePoint> pts;
  for (const auto& s : map.samples) {
    pts.push_back({s.theta_min, s.lambda, -1});
    if (!(s.degenerate && s.theta_max == s.theta_min))
      pts.push_back({s.theta_max, s.lambda, +1});
  }
  std::sort(pts.begin(), pts.end(),
            [](const ImagePoint& a, const ImagePoint& b) { return a.theta < b.theta; });
  return pts;
}

double branch_resolution(const ThetaMap& map, double factor) {
  double spacing = 0.0, se = 0.0;
  const auto& v = map.samples;
  for (size_t i = 0; i + 1 < v.size(); ++i) {
    spacing = std::max(spacing, std::abs(v[i + 1].theta_max - v[i].theta_max));
    spacing = std::max(spacing, std::abs(v[i + 1].theta_min - v[i].theta_min));
  }
  for (const auto& s : v) se = std::max(se, s.stderr_max_of());
  return factor * spacing + 3 * se;
}

}  // namespace

ThetaMap build_theta_map(const EnvironmentSpec& spec, const std::vector<double>& lambda_grid,
                         const std::vector<uint64_t>& seeds, const ThetaConfig& cfg) {
  ThetaMap map;
  std::vector<ThetaOutcome> outs(lambda_grid.size());
  parallel_for(lambda_grid.size(), cfg.workers,
               [&](size_t i) { outs[i] = theta_of_lambda(spec, lambda_grid[i], seeds, cfg); });
  for (size_t i = 0; i < outs.size(); ++i) {
    for (const auto& n : outs[i].notes) map.notes.push_back(n);
    if (outs[i].status == ThetaStatus::ok) {
      map.samples.push_back(*outs[i].sample);
    } else {
      map.notes.push_back("lambda=" + std::to_string(lambda_grid[i]) +
                          " below the solvable floor on this window");
    }
  }
  validate_map(map, cfg.label_tol);
  if (!map.samples.empty()) map.lambda0 = map.samples.front().lambda;
  return map;
}

std::vector<GapCandidate> detect_gaps(const ThetaMap& map, double min_width) {
  std::vector<GapCandidate> gaps;
  if (map.samples.size() < 2) return gaps;  // nothing to bracket
  const double threshold = min_width > 0 ? min_width : branch_resolution(map, 1.5);
  const auto pts = image_points(map);
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double width = pts[i + 1].theta - pts[i].theta;
    if (width > threshold) {
      GapCandidate g;
      g.theta1 = pts[i].theta;
      g.theta2 = pts[i + 1].theta;
      g.lambda_left = pts[i].lambda;
      g.lambda_right = pts[i + 1].lambda;
      g.labels_agree = std::abs(g.lambda_left - g.lambda_right) <= 5e-3;
      gaps.push_back(g);
    }
  }
  return gaps;
}

void refine_gap_labels(const EnvironmentSpec& spec, ThetaMap& map,
                       const std::vector<uint64_t>& seeds, const ThetaConfig& cfg) {
  for (int it = 0; it < cfg.max_label_refinements; ++it) {
    const auto gaps = detect_gaps(map);
    double insert_at = 0;
    bool need = false;
    for (const auto& g : gaps) {
      if (std::abs(g.lambda_left - g.lambda_right) > cfg.label_tol) {
        insert_at = 0.5 * (g.lambda_left + g.lambda_right);
        need = true;
        break;
      }
    }
    if (!need) return;
    for (const auto& s : map.samples)
      if (std::abs(s.lambda - insert_at) < 1e-12) {
        map.notes.push_back("gap labels disagree but the midpoint level is already sampled");
        return;
      }
    const ThetaOutcome out = theta_of_lambda(spec, insert_at, seeds, cfg);
    if (out.status != ThetaStatus::ok) {
      map.notes.push_back("label refinement at lambda=" + std::to_string(insert_at) +
                          " found no solutions");
      return;
    }
    map.samples.push_back(*out.sample);
    validate_map(map, cfg.label_tol);
  }
  map.notes.push_back("gap label refinement budget exhausted");
}

namespace {

struct MarchResult {
  std::vector<GapLevelRow> rows;
  std::vector<InteriorSample> interior;
  int crossed = 0, confined = 0;
};

GapLevelRow probe_level(const Realization& r, const Realization& rr,
                        const CorrectorSolution& f1, const CorrectorSolution& f2,
                        const CorrectorSolution& rf1, const CorrectorSolution& rf2, double mu,
                        double lambda, bool mirrored, const std::vector<int>& schedule,
                        const BridgeConfig& bcfg) {
  GapLevelRow row;
  row.mu = mu;
  for (int n : schedule) {
    if (-static_cast<double>(n) < f1.window.lo) continue;
    BridgeResult br;
    if (mirrored) {
      br = (mu < lambda) ? shoot_descend(rr, rf1, rf2, mu, n, bcfg)
                         : shoot_ascend(rr, rf1, rf2, mu, n, bcfg);
    } else {
      br = (mu < lambda) ? shoot_descend(r, f1, f2, mu, n, bcfg)
                         : shoot_ascend(r, f1, f2, mu, n, bcfg);
    }
    row.window_schedule.push_back(n);
    row.verdicts.push_back(br.verdict);
    row.final_verdict = br.verdict;
    if (br.verdict == BridgeVerdict::confined)
      row.tail_mean = mirrored ? -br.tail_mean : br.tail_mean;
  }
  return row;
}

}  // namespace

GapReport certify_gap(const EnvironmentSpec& spec, const GapCandidate& gap,
                      const std::vector<uint64_t>& seeds, const ThetaConfig& cfg) {
  GapReport rep;
  rep.gap = gap;
  rep.lambda_label = 0.5 * (gap.lambda_left + gap.lambda_right);
  if (std::abs(gap.lambda_left - gap.lambda_right) > cfg.label_tol) {
    rep.note = "labels disagree; refine the lambda grid before certification";
    return rep;
  }
  const double lambda = rep.lambda_label;
  const uint64_t seed = seeds.empty() ? 0 : seeds.front();
  const Realization r = sample_realization(spec, seed);
  const Realization rr = r.reflected();

  const auto mn =
      bounded_solution_window(r, lambda, cfg.window, SolutionRole::minimal, cfg.tol, cfg.cell);
  const auto mx =
      bounded_solution_window(r, lambda, cfg.window, SolutionRole::maximal, cfg.tol, cfg.cell);
  if (!mn.ok() || !mx.ok()) {
    rep.note = "bounding solutions unavailable at the gap level";
    return rep;
  }
  const CorrectorSolution& f1 = *mn.solution;
  const CorrectorSolution& f2 = *mx.solution;
  if (check_ordering(f1, f2).verdict != Ordering::below) {
    rep.note = "bounding solutions do not bracket the gap strictly";
    return rep;
  }
  const CorrectorSolution rf1 = reflect_solution(f2);
  const CorrectorSolution rf2 = reflect_solution(f1);

  BridgeConfig bcfg;
  bcfg.tol = std::max(cfg.tol, 1e-11);

  auto march = [&](bool upward, bool mirrored) {
    MarchResult res;
    int consecutive = 0;
    double last_confined = std::numeric_limits<double>::quiet_NaN();
    double first_crossed_after = std::numeric_limits<double>::quiet_NaN();
    for (int k = 0;; ++k) {
      const double mu = upward ? lambda + cfg.collar + k * cfg.mu_step
                               : lambda - cfg.collar - k * cfg.mu_step;
      if (std::abs(mu - lambda) > cfg.reach) break;
      const GapLevelRow row =
          probe_level(r, rr, f1, f2, rf1, rf2, mu, lambda, mirrored, cfg.n_schedule, bcfg);
      res.rows.push_back(row);
      if (row.final_verdict == BridgeVerdict::confined) {
        ++res.confined;
        consecutive = 0;
        last_confined = mu;
        first_crossed_after = std::numeric_limits<double>::quiet_NaN();
        res.interior.push_back({row.tail_mean, mu});
      } else {
        ++res.crossed;
        ++consecutive;
        if (std::isnan(first_crossed_after)) first_crossed_after = mu;
        if (consecutive >= cfg.consecutive_crossed_stop && k + 1 >= cfg.min_probes) break;
      }
    }
    // localize the level where the trapped branch dies: the interior means
    // converge to the branch-merge value there
    if (upward && !std::isnan(last_confined) && !std::isnan(first_crossed_after)) {
      double lo = last_confined, hi = first_crossed_after;
      for (int it = 0; it < 24 && hi - lo > 1e-7; ++it) {
        const double mu = 0.5 * (lo + hi);
        const GapLevelRow row =
            probe_level(r, rr, f1, f2, rf1, rf2, mu, lambda, mirrored, cfg.n_schedule, bcfg);
        res.rows.push_back(row);
        if (row.final_verdict == BridgeVerdict::confined) {
          ++res.confined;
          lo = mu;
          res.interior.push_back({row.tail_mean, mu});
        } else {
          ++res.crossed;
          hi = mu;
        }
      }
    }
    return res;
  };

  MarchResult up = march(true, false);
  MarchResult up_m = march(true, true);
  MarchResult down = march(false, false);

  // densify the interior sampling where the means jump
  auto refine = [&](MarchResult& res, bool mirrored) {
    bool grew = true;
    while (grew && static_cast<int>(res.interior.size()) < cfg.max_interior_samples) {
      grew = false;
      std::sort(res.interior.begin(), res.interior.end(),
                [](const InteriorSample& a, const InteriorSample& b) {
                  return a.lambda < b.lambda;
                });
      for (size_t i = 0; i + 1 < res.interior.size(); ++i) {
        if (std::abs(res.interior[i + 1].theta - res.interior[i].theta) >
                cfg.interior_theta_res &&
            res.interior[i + 1].lambda - res.interior[i].lambda > 1e-6) {
          const double mu = 0.5 * (res.interior[i].lambda + res.interior[i + 1].lambda);
          const GapLevelRow row =
              probe_level(r, rr, f1, f2, rf1, rf2, mu, lambda, mirrored, cfg.n_schedule, bcfg);
          if (row.final_verdict == BridgeVerdict::confined) {
            res.interior.push_back({row.tail_mean, mu});
            ++res.confined;
            grew = true;
            break;
          }
        }
      }
    }
  };
  refine(up, false);
  refine(up_m, true);

  for (auto* res : {&up, &up_m, &down}) {
    rep.probes_crossed += res->crossed;
    rep.probes_confined += res->confined;
    for (auto& row : res->rows) rep.evidence.push_back(row);
    for (auto& s : res->interior) rep.interior.push_back(s);
  }
  if (rep.probes_confined > 0) {
    rep.verdict = GapVerdict::refuted;
    rep.note = "stationary solutions found strictly inside the gap";
  } else if (rep.probes_crossed >= 2 * cfg.min_probes) {
    rep.verdict = GapVerdict::certified_flat;
    rep.note = "every probed level crossed: no trapped stationary solutions detected";
  } else {
    rep.verdict = GapVerdict::inconclusive;
    rep.note = "insufficient probes";
  }
  return rep;
}

EffectiveCurve invert_to_effective(const ThetaMap& map, const std::vector<GapReport>& reports,
                                   const std::vector<double>& theta_grid) {
  EffectiveCurve curve;
  curve.lambda0 = map.lambda0;

  std::vector<std::pair<double, double>> graph;  // (theta, lambda)
  for (const auto& s : map.samples) {
    graph.push_back({s.theta_min, s.lambda});
    graph.push_back({s.theta_max, s.lambda});
  }
  for (const auto& rep : reports)
    if (rep.verdict == GapVerdict::refuted)
      for (const auto& is : rep.interior) graph.push_back({is.theta, is.lambda});
  std::sort(graph.begin(), graph.end());
  graph.erase(std::unique(graph.begin(), graph.end(),
                          [](const auto& a, const auto& b) {
                            return std::abs(a.first - b.first) < 1e-12;
                          }),
              graph.end());
  if (graph.size() < 2) throw ConfigError("invert_to_effective: not enough samples");
  curve.samples = graph;

  for (const auto& rep : reports)
    if (rep.verdict == GapVerdict::certified_flat)
      curve.flat_segments.push_back({rep.gap.theta1, rep.gap.theta2, rep.lambda_label});

  auto eval = [&](double th) -> std::pair<double, bool> {
    for (const auto& fs : curve.flat_segments)
      if (th >= fs.theta1 && th <= fs.theta2) return {fs.lambda, true};
    if (th < graph.front().first - 1e-12 || th > graph.back().first + 1e-12)
      throw std::out_of_range(
          "invert_to_effective: theta outside the sampled image; extend the lambda grid");
    size_t lo = 0, hi = graph.size() - 1;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      if (graph[mid].first <= th) lo = mid;
      else hi = mid;
    }
    const double t = (graph[hi].first > graph[lo].first)
                         ? (th - graph[lo].first) / (graph[hi].first - graph[lo].first)
                         : 0.0;
    return {(1 - t) * graph[lo].second + t * graph[hi].second, false};
  };

  curve.theta = theta_grid;
  curve.value.resize(theta_grid.size());
  curve.flat_flag.resize(theta_grid.size());
  for (size_t i = 0; i < theta_grid.size(); ++i) {
    const auto [v, flat] = eval(theta_grid[i]);
    curve.value[i] = v;
    curve.flat_flag[i] = flat ? 1 : 0;
    if (v < map.lambda0 - 1e-6) curve.floor_ok = false;
  }
  if (curve.value.size() >= 3) {
    const double mid = curve.value[curve.value.size() / 2];
    curve.coercive_ok = curve.value.front() > mid || curve.value.back() > mid;
  }
  return curve;
}

EffectivePipelineResult run_effective_pipeline(const EnvironmentSpec& spec,
                                               const std::vector<uint64_t>& seeds,
                                               const std::vector<double>& lambda_grid,
                                               const std::vector<double>& theta_grid,
                                               const ThetaConfig& cfg) {
  if (seeds.empty()) throw ConfigError("pipeline: need at least one seed");
  EffectivePipelineResult res;
  double l0 = 0;
  for (uint64_t s : seeds)
    l0 += estimate_lambda0(sample_realization(spec, s), cfg.window, cfg.cell.lambda0_tol,
                           cfg.cell);
  l0 /= static_cast<double>(seeds.size());
  res.lambda0 = l0;

  std::vector<double> grid = lambda_grid;
  if (grid.empty()) grid = linspace(l0, l0 + 10.0, 20);
  {
    // the lowest level may sit under the finite-window floor: nudge once
    const ThetaOutcome probe = theta_of_lambda(spec, grid.front(), seeds, cfg);
    if (probe.status != ThetaStatus::ok) grid.front() += 2e-4;
  }
  res.map = build_theta_map(spec, grid, seeds, cfg);
  res.map.lambda0 = l0;
  refine_gap_labels(spec, res.map, seeds, cfg);

  for (const auto& gap : detect_gaps(res.map))
    res.gap_reports.push_back(certify_gap(spec, gap, seeds, cfg));

  std::vector<double> tg = theta_grid;
  if (tg.empty()) {
    double lo = 1e300, hi = -1e300;
    for (const auto& s : res.map.samples) {
      lo = std::min(lo, s.theta_min);
      hi = std::max(hi, s.theta_max);
    }
    tg = linspace(lo, hi, 201);
  }
  res.curve = invert_to_effective(res.map, res.gap_reports, tg);
  res.curve.lambda0 = l0;
  return res;
}

}  // namespace vhj
