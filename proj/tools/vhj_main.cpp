// Command-line front end: configuration-driven experiment runs with CSV/JSON
// artifacts and SVG plots. Exit codes: 0 pass, 1 check failure,
// 2 configuration error, 3 runtime/numerical error.

#include <chrono>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vhj/config.hpp"
#include "vhj/io.hpp"
#include "vhj/parabolic.hpp"
#include "vhj/validate.hpp"

namespace fs = std::filesystem;
using namespace vhj;

namespace {

struct RunContext {
  RunConfig config;
  fs::path out;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  explicit RunContext(const std::string& config_path)
      : config(RunConfig::from_file(config_path)) {
    out = config.output_dir();
    fs::create_directories(out);
  }

  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  void write_manifest(const std::string& command, const std::vector<std::string>& artifacts) {
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = config.hash();
    j["config"] = config.entries();
    j["artifacts"] = artifacts;
    j["wall_time_s"] = elapsed_s();
    write_text_file((out / (command + "_manifest.json")).string(), j.dump(2));
  }
};

int cmd_sample_env(RunContext& ctx) {
  const EnvironmentSpec spec = ctx.config.environment();
  std::vector<std::string> artifacts;
  for (uint64_t seed : ctx.config.seeds()) {
    const Realization r = sample_realization(spec, seed);
    // touch the fields across the window so bump caches materialize for replay
    const double w = ctx.config.get_double("run.window", 40.0);
    for (double x = -w; x <= w; x += 0.25) {
      (void)r.H(x, 0.0);
      (void)r.a(x);
    }
    const std::string path =
        (ctx.out / ("realization_seed" + std::to_string(seed) + ".json")).string();
    write_text_file(path, r.manifest_json());
    artifacts.push_back(path);
  }
  ctx.write_manifest("sample-env", artifacts);
  std::cout << "wrote " << artifacts.size() << " realization manifest(s) under " << ctx.out
            << "\n";
  return 0;
}

int cmd_lambda0(RunContext& ctx) {
  const EnvironmentSpec spec = ctx.config.environment();
  const ThetaConfig cfg = ctx.config.theta_config();
  CsvTable t;
  t.header = {"seed", "window_length", "estimate", "extrapolated"};
  t.columns.resize(4);
  double mean = 0;
  const auto seeds = ctx.config.seeds();
  for (uint64_t seed : seeds) {
    const Realization r = sample_realization(spec, seed);
    const Lambda0Estimate est =
        estimate_lambda0_detailed(r, cfg.window, cfg.cell.lambda0_tol, cfg.cell);
    for (const auto& [len, val] : est.per_window) {
      t.columns[0].push_back(static_cast<double>(seed));
      t.columns[1].push_back(len);
      t.columns[2].push_back(val);
      t.columns[3].push_back(0);
    }
    t.columns[0].push_back(static_cast<double>(seed));
    t.columns[1].push_back(cfg.window.length());
    t.columns[2].push_back(est.value);
    t.columns[3].push_back(1);
    mean += est.value;
    std::cout << "seed " << seed << ": lambda0 ~ " << est.value << "\n";
  }
  mean /= static_cast<double>(seeds.size());
  std::cout << "across-seed mean: " << mean << "\n";
  const std::string path = (ctx.out / "lambda0.csv").string();
  t.write(path);
  ctx.write_manifest("lambda0", {path});
  return 0;
}

int cmd_theta_map(RunContext& ctx) {
  const EnvironmentSpec spec = ctx.config.environment();
  const ThetaConfig cfg = ctx.config.theta_config();
  const auto seeds = ctx.config.seeds();
  const Realization r0 = sample_realization(spec, seeds.front());
  const double lam0 = estimate_lambda0(r0, cfg.window, cfg.cell.lambda0_tol, cfg.cell);
  const ThetaMap map = build_theta_map(spec, ctx.config.lambda_grid(lam0), seeds, cfg);
  const std::string path = (ctx.out / "theta_map.csv").string();
  theta_map_csv(map).write(path);
  for (const auto& n : map.notes) std::cout << "note: " << n << "\n";
  std::cout << "theta map with " << map.samples.size() << " levels, lambda0 ~ " << lam0 << "\n";
  ctx.write_manifest("theta-map", {path});
  return map.monotone_validated ? 0 : 1;
}

int cmd_effective(RunContext& ctx) {
  const EnvironmentSpec spec = ctx.config.environment();
  const ThetaConfig cfg = ctx.config.theta_config();
  const auto seeds = ctx.config.seeds();
  const Realization r0 = sample_realization(spec, seeds.front());
  const double lam0_probe = estimate_lambda0(r0, cfg.window, cfg.cell.lambda0_tol, cfg.cell);

  const EffectivePipelineResult pipe = run_effective_pipeline(
      spec, seeds, ctx.config.lambda_grid(lam0_probe), ctx.config.theta_grid(), cfg);

  std::vector<std::string> artifacts;
  const std::string map_path = (ctx.out / "theta_map.csv").string();
  theta_map_csv(pipe.map).write(map_path);
  artifacts.push_back(map_path);

  const std::string curve_path = (ctx.out / "effective_curve.csv").string();
  curve_csv(pipe.curve).write(curve_path);
  artifacts.push_back(curve_path);

  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& rep : pipe.gap_reports) {
    nlohmann::json g;
    g["theta1"] = rep.gap.theta1;
    g["theta2"] = rep.gap.theta2;
    g["lambda_left"] = rep.gap.lambda_left;
    g["lambda_right"] = rep.gap.lambda_right;
    g["verdict"] = rep.verdict == GapVerdict::certified_flat
                       ? "certified_flat"
                       : (rep.verdict == GapVerdict::refuted ? "refuted" : "inconclusive");
    g["probes_crossed"] = rep.probes_crossed;
    g["probes_confined"] = rep.probes_confined;
    g["note"] = rep.note;
    gaps.push_back(g);
  }
  nlohmann::json j;
  j["lambda0"] = pipe.lambda0;
  j["gaps"] = gaps;
  j["map_notes"] = pipe.map.notes;
  const std::string gaps_path = (ctx.out / "gaps.json").string();
  write_text_file(gaps_path, j.dump(2));
  artifacts.push_back(gaps_path);

  if (ctx.config.get_bool("run.plots", true)) {
    SvgSeries main;
    main.x = pipe.curve.theta;
    main.y = pipe.curve.value;
    std::vector<SvgSeries> series{main};
    for (const auto& seg : pipe.curve.flat_segments) {
      SvgSeries flat;
      flat.x = {seg.theta1, seg.theta2};
      flat.y = {seg.lambda, seg.lambda};
      flat.color = "#d1495b";
      flat.width = 3.0;
      series.push_back(flat);
    }
    const std::string svg_path = (ctx.out / "effective_curve.svg").string();
    write_svg_plot(svg_path, series, "effective Hamiltonian", "theta", "value");
    artifacts.push_back(svg_path);
  }
  ctx.write_manifest("effective", artifacts);
  std::cout << "lambda0 ~ " << pipe.lambda0 << ", " << pipe.gap_reports.size()
            << " gap candidate(s), " << pipe.curve.flat_segments.size()
            << " certified flat segment(s)\n";
  return 0;
}

int cmd_parabolic(RunContext& ctx) {
  const EnvironmentSpec spec = ctx.config.environment();
  const Realization r = sample_realization(spec, ctx.config.seeds().front());
  std::vector<double> thetas = ctx.config.get_list(
      "parabolic.theta_points", {ctx.config.get_double("parabolic.theta", 0.0)});
  const double t_end = ctx.config.get_double("parabolic.t_end", 20.0);
  const double dx = ctx.config.get_double("parabolic.dx", 1.0 / 64);
  const int n_samples = ctx.config.get_int("parabolic.sample_count", 32);
  std::vector<std::string> artifacts;
  int tag_i = 0;
  for (double theta : thetas) {
    Grid1D g;
    const double half =
        ctx.config.has("parabolic.halfwidth")
            ? ctx.config.get_double("parabolic.halfwidth", 0.0)
            : required_halfwidth(r, std::abs(theta) + 1.5, t_end, 2.0);
    g.x_lo = -half;
    g.x_hi = half;
    g.nx = 2 * static_cast<int>(std::ceil(half / dx)) + 1;
    g.theta = theta;
    g.cfl_safety = ctx.config.get_double("parabolic.cfl_safety", 0.45);
    std::vector<double> samples;
    for (int k = 1; k <= n_samples; ++k) samples.push_back(t_end * k / n_samples);
    const ParabolicRun run = solve_ehj(r, g, t_end, samples);
    const auto [hl, hu] =
        estimate_HL_HU(run, ctx.config.get_double("parabolic.tail_fraction", 0.25));
    std::cout << "theta=" << theta << ": HL=" << hl << " HU=" << hu << " width=" << (hu - hl)
              << "\n";
    const std::string tag = "theta" + std::to_string(tag_i++);
    const std::string path = (ctx.out / ("parabolic_" + tag + ".csv")).string();
    parabolic_csv(run).write(path);
    write_text_file((ctx.out / ("parabolic_" + tag + ".json")).string(),
                    parabolic_header_json(run));
    artifacts.push_back(path);
    if (ctx.config.get_bool("parabolic.dump_spacetime", false)) {
      std::vector<double> xs(run.final_u.size());
      for (size_t i = 0; i < xs.size(); ++i) xs[i] = g.x_lo + g.dx() * static_cast<double>(i);
      const std::string bin = (ctx.out / ("parabolic_" + tag + ".f64")).string();
      write_spacetime_binary(bin, xs, {t_end}, {run.final_u});
      artifacts.push_back(bin);
    }
  }
  ctx.write_manifest("parabolic", artifacts);
  return 0;
}

int cmd_eps_study(RunContext& ctx) {
  const EnvironmentSpec spec = ctx.config.environment();
  const Realization r = sample_realization(spec, ctx.config.seeds().front());
  const std::vector<double> eps = ctx.config.get_list("eps.list", {0.25, 0.125, 0.0625});
  const double t_obs = ctx.config.get_double("eps.t_obs", 1.0);
  const double dx = ctx.config.get_double("parabolic.dx", 1.0 / 64);
  const double theta = ctx.config.get_double("parabolic.theta", 0.0);
  const EpsStudy st = epsilon_study(r, theta, eps, t_obs, dx);
  CsvTable t;
  t.header = {"eps", "u_eps", "diff_prev"};
  t.columns.resize(3);
  for (const auto& row : st.rows) {
    t.columns[0].push_back(row.eps);
    t.columns[1].push_back(row.u_eps);
    t.columns[2].push_back(row.diff_prev);
    std::cout << "eps=" << row.eps << ": u=" << row.u_eps << " diff=" << row.diff_prev << "\n";
  }
  std::cout << "extrapolated limit: " << st.extrapolated << "\n";
  if (!st.note.empty()) std::cout << "note: " << st.note << "\n";
  const std::string path = (ctx.out / "eps_study.csv").string();
  t.write(path);
  ctx.write_manifest("eps-study", {path});
  return 0;
}

int cmd_bridge(RunContext& ctx) {
  const EnvironmentSpec spec = ctx.config.environment();
  const ThetaConfig cfg = ctx.config.theta_config();
  const Realization r = sample_realization(spec, ctx.config.seeds().front());
  const double lam0 = estimate_lambda0(r, cfg.window, cfg.cell.lambda0_tol, cfg.cell);
  const double lambda = lam0 + ctx.config.get_double("bridge.lambda_offset", 0.1);
  const double mu =
      ctx.config.has("bridge.mu") ? ctx.config.get_double("bridge.mu", 0.0) : lambda - 0.2;
  const double eps = ctx.config.get_double("bridge.epsilon", 0.05);
  const double n = ctx.config.get_double("bridge.n", 10.0);

  const auto mn =
      bounded_solution_window(r, lambda, cfg.window, SolutionRole::minimal, cfg.tol, cfg.cell);
  const auto mx =
      bounded_solution_window(r, lambda, cfg.window, SolutionRole::maximal, cfg.tol, cfg.cell);
  if (!mn.ok() || !mx.ok()) throw NumericError("bridge: extremal solutions unavailable");

  std::vector<std::string> artifacts;
  const bool descent = mu < lambda;
  const BridgeResult br = descent ? shoot_descend(r, *mn.solution, *mx.solution, mu, n)
                                  : shoot_ascend(r, *mn.solution, *mx.solution, mu, n);
  const std::string shot_path = (ctx.out / "bridge_shot.csv").string();
  bridge_csv(br).write(shot_path);
  artifacts.push_back(shot_path);
  std::cout << (descent ? "descent" : "ascent") << " shot at mu=" << mu << ": "
            << (br.verdict == BridgeVerdict::crossed ? "crossed" : "confined");
  if (br.verdict == BridgeVerdict::crossed) std::cout << " at x=" << br.crossing_x;
  std::cout << "\n";

  int rc = 0;
  if (br.verdict == BridgeVerdict::crossed) {
    const GluedFunction glue =
        descent ? mollify_glue(r, *mx.solution, *mn.solution, br, mu, eps,
                               ctx.config.get_double("bridge.margin", 1.0))
                : mollify_glue(r, *mn.solution, *mx.solution, br, mu, eps,
                               ctx.config.get_double("bridge.margin", 1.0));
    const std::string glue_path = (ctx.out / "bridge_glued.csv").string();
    glue_csv(glue).write(glue_path);
    write_text_file((ctx.out / "bridge_glued.json").string(), glue_header_json(glue));
    artifacts.push_back(glue_path);
    std::cout << "glued residuals in [" << glue.residual_min << ", " << glue.residual_max
              << "], kernel index " << glue.mollifier_index << "\n";
    if (glue.status != GlueStatus::ok) {
      std::cout << "residual inequality NOT achieved (worst node x=" << glue.worst_x << ")\n";
      rc = 1;
    }
  }
  ctx.write_manifest("bridge", artifacts);
  return rc;
}

int cmd_validate(RunContext& ctx) {
  const std::string suite = ctx.config.get_string("validate.suite", "end2end");
  std::vector<CheckReport> reports = run_suite(suite, ctx.config);
  if (ctx.config.get_bool("validate.double_run", false)) {
    // bit-for-bit reproducibility: a second run must produce identical reports
    const std::vector<CheckReport> again = run_suite(suite, ctx.config);
    CheckReport rr;
    rr.id = "reproducibility_double_run";
    rr.config_hash = ctx.config.hash();
    rr.status = reports_json(reports) == reports_json(again) ? CheckReport::pass
                                                             : CheckReport::fail;
    reports.push_back(rr);
  }
  const std::string md_path = (ctx.out / ("validate_" + suite + ".md")).string();
  const std::string json_path = (ctx.out / ("validate_" + suite + ".json")).string();
  write_text_file(md_path, reports_markdown(reports));
  write_text_file(json_path, reports_json(reports));
  ctx.write_manifest("validate", {md_path, json_path});
  bool all_pass = true;
  for (const auto& r : reports) {
    std::cout << r.id << ": " << r.status_name() << (r.note.empty() ? "" : "  [" + r.note + "]")
              << "\n";
    all_pass = all_pass && r.status == CheckReport::pass;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for 1-d viscous Hamilton-Jacobi homogenization"};
  app.require_subcommand(1);

  std::string config_path;
  int rc = 0;
  auto add = [&](const std::string& name, const std::string& desc, int (*fn)(RunContext&)) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("config", config_path, "run configuration file")->required();
    sub->callback([&, fn]() {
      RunContext ctx(config_path);
      rc = fn(ctx);
    });
  };

  add("sample-env", "sample realizations and write replay manifests", cmd_sample_env);
  add("lambda0", "estimate the critical value with window extrapolation", cmd_lambda0);
  add("theta-map", "extremal mean map over a level grid", cmd_theta_map);
  add("effective", "full pipeline: floor, map, gaps, effective curve", cmd_effective);
  add("parabolic", "long-time slope estimates of the evolution problem", cmd_parabolic);
  add("eps-study", "scaled-equation convergence table", cmd_eps_study);
  add("bridge", "descent/ascent shot and mollified gluing", cmd_bridge);
  add("validate", "named invariant suites", cmd_validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
