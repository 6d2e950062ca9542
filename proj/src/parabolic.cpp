#include "vhj/parabolic.hpp"

#include <algorithm>
#include <cmath>

namespace vhj {

int Grid1D::center_index() const {
  double best = 1e300;
  int bi = 0;
  for (int i = 0; i < nx; ++i) {
    const double x = x_lo + dx() * i;
    if (std::abs(x) < best) {
      best = std::abs(x);
      bi = i;
    }
  }
  return bi;
}

void Grid1D::validate() const {
  if (!(x_hi > x_lo)) throw ConfigError("grid: empty interval");
  if (nx < 8) throw ConfigError("grid: too few nodes");
  if (!(cfl_safety > 0 && cfl_safety < 1)) throw ConfigError("grid: cfl_safety in (0,1)");
}

namespace {

// Node-indexed Hamiltonian evaluators. Coefficient fields are sampled once so
// the inner loop stays free of virtual calls and field evaluations.
struct NodeEnv {
  HamForm form;
  double gamma = 2.0;
  bool trunc = false;
  double trunc_n = 0.0;
  double a_max = 0.0;
  std::vector<double> a, V, c0, c1;
};

NodeEnv sample_nodes(const Realization& r, const Grid1D& g) {
  NodeEnv ne;
  ne.form = r.spec().form;
  ne.gamma = r.spec().gamma;
  if (r.truncation()) {
    ne.trunc = true;
    ne.trunc_n = r.truncation()->n;
  }
  ne.a.resize(g.nx);
  ne.V.resize(g.nx);
  const bool needs_pin = ne.form == HamForm::pinned || ne.form == HamForm::general_sum;
  if (needs_pin) ne.c1.resize(g.nx);
  if (ne.form == HamForm::general_sum) ne.c0.resize(g.nx);
  for (int i = 0; i < g.nx; ++i) {
    const double x = g.x_lo + g.dx() * i;
    ne.a[i] = r.a(x);
    ne.a_max = std::max(ne.a_max, ne.a[i]);
    ne.V[i] = r.H(x, 0.0);  // per-form evaluators add H(x,p) - H(x,0)
    if (ne.form == HamForm::pinned) {
      ne.c1[i] = 1.0 - (r.H(x, 1.0) - r.H(x, 0.0));
    } else if (ne.form == HamForm::general_sum) {
      const double d1 = r.H(x, 1.0) - r.H(x, 0.0);
      const double d2 = r.H(x, 2.0) - r.H(x, 0.0);
      const double tg = std::pow(2.0, ne.gamma);
      ne.c0[i] = (d2 - 2 * d1) / (tg - 2.0);
      ne.c1[i] = d1 - ne.c0[i];
    }
  }
  return ne;
}

inline double pow_abs(double p, double g) {
  const double q = std::abs(p);
  if (g == 2.0) return q * q;
  if (g == 3.0) return q * q * q;
  if (g == 4.0) return (q * q) * (q * q);
  return std::pow(q, g);
}

struct HamSep2 {
  const NodeEnv& ne;
  double operator()(int j, double p) const {
    double h = p * p + ne.V[j];
    if (ne.trunc) h = std::max(h, (p * p) * (p * p) - ne.trunc_n);
    return h;
  }
};

struct HamSepG {
  const NodeEnv& ne;
  double operator()(int j, double p) const {
    double h = pow_abs(p, ne.gamma) + ne.V[j];
    if (ne.trunc) h = std::max(h, (p * p) * (p * p) - ne.trunc_n);
    return h;
  }
};

struct HamDoubleWell {
  const NodeEnv& ne;
  double operator()(int j, double p) const {
    const double q = p * p - 1.0;
    double h = q * q + (ne.V[j] - 1.0);  // H(x,0) = 1 + V(x)
    if (ne.trunc) h = std::max(h, (p * p) * (p * p) - ne.trunc_n);
    return h;
  }
};

struct HamPinned {
  const NodeEnv& ne;
  double operator()(int j, double p) const {
    double h = pow_abs(p, ne.gamma) - ne.c1[j] * std::abs(p) + ne.V[j];
    if (ne.trunc) h = std::max(h, (p * p) * (p * p) - ne.trunc_n);
    return h;
  }
};

struct HamGeneral {
  const NodeEnv& ne;
  double operator()(int j, double p) const {
    double h = ne.c0[j] * pow_abs(p, ne.gamma) + ne.c1[j] * std::abs(p) + ne.V[j];
    if (ne.trunc) h = std::max(h, (p * p) * (p * p) - ne.trunc_n);
    return h;
  }
};

template <class Fn>
auto dispatch_form(const NodeEnv& ne, Fn&& fn) {
  switch (ne.form) {
    case HamForm::separable:
      if (ne.gamma == 2.0) return fn(HamSep2{ne});
      return fn(HamSepG{ne});
    case HamForm::double_well: return fn(HamDoubleWell{ne});
    case HamForm::pinned: return fn(HamPinned{ne});
    case HamForm::general_sum: return fn(HamGeneral{ne});
  }
  throw ConfigError("solve_ehj: unhandled Hamiltonian form");
}

struct StepStats {
  double sigma = 0;
  double dt = 0;
};

// One explicit step: centered diffusion plus the dissipative flux, ghost cells
// by linear extension with slope theta.
template <class Ham>
StepStats step_once(std::vector<double>& u, std::vector<double>& scratch, const NodeEnv& ne,
                    const Ham& ham, const Realization& r, const Grid1D& g, double dt_cap,
                    double enlarge) {
  const int n = static_cast<int>(u.size());
  const double dx = g.dx();
  const double inv_dx = 1.0 / dx;
  const double th_l = g.slope_left(), th_r = g.slope_right();

  double p_abs = std::abs(th_l);
  for (int j = 0; j < n; ++j) {
    const double up = (j == n - 1) ? u[n - 1] + th_r * dx : u[j + 1];
    p_abs = std::max(p_abs, std::abs(up - u[j]) * inv_dx);
  }
  const double sigma = enlarge * r.dHdp_bound(p_abs);
  const double dt_stable = g.cfl_safety * dx * dx / (2 * ne.a_max + dx * sigma);
  const double dt = std::min(dt_cap, dt_stable);

  const double half_sigma = 0.5 * sigma;
  const double inv_dx2 = inv_dx * inv_dx;
  for (int j = 0; j < n; ++j) {
    const double um = (j == 0) ? u[0] - th_l * dx : u[j - 1];
    const double up = (j == n - 1) ? u[n - 1] + th_r * dx : u[j + 1];
    const double pm = (u[j] - um) * inv_dx;
    const double pp = (up - u[j]) * inv_dx;
    const double diff = ne.a[j] * (up - 2 * u[j] + um) * inv_dx2;
    const double flux = ham(j, 0.5 * (pm + pp)) + half_sigma * (pm - pp);
    scratch[j] = u[j] + dt * (diff + flux);
  }
  u.swap(scratch);
  return StepStats{sigma, dt};
}

template <class Ham>
ParabolicRun run_scheme(const Realization& r, const Grid1D& g, double t_end,
                        const std::vector<double>& sample_times, const ParabolicConfig& cfg,
                        const NodeEnv& ne, const Ham& ham, const std::vector<double>* initial) {
  ParabolicRun run;
  run.grid = g;
  run.seed = r.seed();
  run.theta = g.theta;

  std::vector<double> u(g.nx), scratch(g.nx);
  if (initial) {
    if (static_cast<int>(initial->size()) != g.nx)
      throw ConfigError("solve_ehj: initial profile size mismatch");
    u = *initial;
  } else {
    for (int i = 0; i < g.nx; ++i) u[i] = g.theta * (g.x_lo + g.dx() * i);
  }

  std::vector<double> samples = sample_times;
  std::sort(samples.begin(), samples.end());
  if (samples.empty() || samples.back() < t_end - 1e-12) samples.push_back(t_end);

  const int ci = g.center_index();
  const int lip_lo = std::max(1, g.nx / 4), lip_hi = 3 * g.nx / 4;

  double t = 0;
  double reach = 0;
  size_t si = 0;
  long steps = 0;
  while (si < samples.size()) {
    const double t_target = samples[si];
    while (t < t_target - 1e-13 * (1 + t_target)) {
      const StepStats st =
          step_once(u, scratch, ne, ham, r, g, t_target - t, cfg.sigma_enlarge);
      t += st.dt;
      reach += st.sigma * st.dt;
      run.sigma_max = std::max(run.sigma_max, st.sigma);
      ++steps;
      if (steps % cfg.nan_check_stride == 0 && !std::isfinite(u[ci]))
        throw NumericError("solve_ehj: non-finite state at step " + std::to_string(steps));
    }
    if (!std::isfinite(u[ci]))
      throw NumericError("solve_ehj: non-finite state at sample t=" +
                         std::to_string(samples[si]));
    run.times.push_back(t);
    run.u_center.push_back(u[ci]);
    run.slope.push_back(t > 0 ? u[ci] / t : 0.0);
    double lip = 0;
    for (int j = lip_lo; j < std::min(g.nx, lip_hi); ++j)
      lip = std::max(lip, std::abs(u[j] - u[j - 1]) / g.dx());
    run.lip.push_back(lip);
    run.front_reach.push_back(reach);
    ++si;
  }
  run.steps = steps;
  if (cfg.store_final_profile) run.final_u = u;
  if (run.slope.size() >= 16) {
    const auto hl_hu = estimate_HL_HU(run, 0.25);
    run.HL_est = hl_hu.first;
    run.HU_est = hl_hu.second;
  } else if (!run.slope.empty()) {
    run.HL_est = run.HU_est = run.slope.back();
  }
  return run;
}

}  // namespace

ParabolicRun solve_ehj(const Realization& r, const Grid1D& grid, double t_end,
                       const std::vector<double>& sample_times, const ParabolicConfig& cfg,
                       const std::vector<double>* initial) {
  grid.validate();
  if (!(t_end > 0)) throw ConfigError("solve_ehj: t_end must be positive");
  const NodeEnv ne = sample_nodes(r, grid);
  return dispatch_form(ne, [&](auto ham) {
    return run_scheme(r, grid, t_end, sample_times, cfg, ne, ham, initial);
  });
}

std::pair<double, double> estimate_HL_HU(const ParabolicRun& run, double tail_fraction) {
  if (!(tail_fraction > 0 && tail_fraction < 1))
    throw ConfigError("estimate_HL_HU: tail_fraction must lie in (0,1)");
  const size_t n = run.slope.size();
  const size_t i0 = static_cast<size_t>(std::floor((1.0 - tail_fraction) * n));
  if (n - i0 < 4) throw ConfigError("estimate_HL_HU: fewer than 4 samples in the tail");
  double lo = 1e300, hi = -1e300;
  for (size_t i = i0; i < n; ++i) {
    lo = std::min(lo, run.slope[i]);
    hi = std::max(hi, run.slope[i]);
  }
  return {lo, hi};
}

EpsStudy epsilon_study(const Realization& r, double theta, const std::vector<double>& eps_list,
                       double t_obs, double dx, const ParabolicConfig& cfg) {
  if (eps_list.empty()) throw ConfigError("epsilon_study: empty eps list");
  for (size_t i = 0; i + 1 < eps_list.size(); ++i)
    if (!(eps_list[i] > eps_list[i + 1]))
      throw ConfigError("epsilon_study: eps list must be strictly decreasing");
  if (!(eps_list.back() > 0)) throw ConfigError("epsilon_study: eps must be positive");

  EpsStudy study;
  const double t_max = t_obs / eps_list.back();
  const double p_pad = std::abs(theta) + 1.5;
  double half = required_halfwidth(r, p_pad, t_max, 2.0);
  int nx = 2 * static_cast<int>(std::ceil(half / dx)) + 1;
  if (static_cast<size_t>(nx) > cfg.memory_budget_nodes) {
    nx = static_cast<int>(cfg.memory_budget_nodes) | 1;
    half = 0.5 * (nx - 1) * dx;
    study.note = "window clipped to the memory budget; the largest horizon may "
                 "sit outside the numerical domain of dependence";
  }
  Grid1D g;
  g.x_lo = -half;
  g.x_hi = half;
  g.nx = nx;
  g.theta = theta;

  std::vector<double> samples;
  for (double e : eps_list) samples.push_back(t_obs / e);
  std::sort(samples.begin(), samples.end());
  ParabolicConfig run_cfg = cfg;
  run_cfg.store_final_profile = false;
  const ParabolicRun run = solve_ehj(r, g, t_max, samples, run_cfg);

  double prev = 0;
  for (size_t i = 0; i < eps_list.size(); ++i) {
    const double eps = eps_list[i];
    const double t_need = t_obs / eps;
    double u_here = 0;
    for (size_t k = 0; k < run.times.size(); ++k)
      if (std::abs(run.times[k] - t_need) < 1e-9 * (1 + t_need)) u_here = run.u_center[k];
    EpsRow row;
    row.eps = eps;
    row.u_eps = eps * u_here;
    row.diff_prev = i == 0 ? 0.0 : std::abs(row.u_eps - prev);
    prev = row.u_eps;
    study.rows.push_back(row);
  }
  if (study.rows.size() >= 2) {
    // geometric eps sequence: first-order extrapolation from the last pair
    const double u1 = study.rows[study.rows.size() - 2].u_eps;
    const double u2 = study.rows.back().u_eps;
    const double ratio = eps_list[eps_list.size() - 2] / eps_list.back();
    study.extrapolated = u2 + (u2 - u1) / (ratio - 1.0);
  } else {
    study.extrapolated = study.rows.back().u_eps;
  }
  return study;
}

ComparisonVerdict comparison_check(const Realization& r, const Grid1D& grid,
                                   const std::vector<double>& v0, const std::vector<double>& w0,
                                   double t_end, const ParabolicConfig& cfg) {
  grid.validate();
  if (static_cast<int>(v0.size()) != grid.nx || static_cast<int>(w0.size()) != grid.nx)
    throw ConfigError("comparison_check: profile size mismatch");
  double gap0 = -1e300;
  for (int i = 0; i < grid.nx; ++i) gap0 = std::max(gap0, v0[i] - w0[i]);

  const NodeEnv ne = sample_nodes(r, grid);
  const double dx = grid.dx();
  return dispatch_form(ne, [&](auto ham) -> ComparisonVerdict {
    std::vector<double> v = v0, w = w0, scratch(grid.nx);
    double t = 0;
    double worst = -1e300;
    long guard = 0;
    const double th_l = grid.slope_left(), th_r = grid.slope_right();
    auto slope_range = [&](const std::vector<double>& u) {
      double pa = std::abs(th_l);
      for (int j = 0; j < grid.nx; ++j) {
        const double up = (j == grid.nx - 1) ? u[grid.nx - 1] + th_r * dx : u[j + 1];
        pa = std::max(pa, std::abs(up - u[j]) / dx);
      }
      return pa;
    };
    while (t < t_end) {
      const double p_abs = std::max(slope_range(v), slope_range(w));
      const double sigma = cfg.sigma_enlarge * r.dHdp_bound(p_abs);
      const double dt =
          std::min(t_end - t, grid.cfl_safety * dx * dx / (2 * ne.a_max + dx * sigma));
      auto advance = [&](std::vector<double>& u) {
        for (int j = 0; j < grid.nx; ++j) {
          const double um = (j == 0) ? u[0] - th_l * dx : u[j - 1];
          const double up = (j == grid.nx - 1) ? u[grid.nx - 1] + th_r * dx : u[j + 1];
          const double pm = (u[j] - um) / dx;
          const double pp = (up - u[j]) / dx;
          scratch[j] = u[j] + dt * (ne.a[j] * (up - 2 * u[j] + um) / (dx * dx) +
                                    ham(j, 0.5 * (pm + pp)) + 0.5 * sigma * (pm - pp));
        }
        u.swap(scratch);
      };
      advance(v);
      advance(w);
      t += dt;
      double gap = -1e300;
      for (int i = 0; i < grid.nx; ++i) gap = std::max(gap, v[i] - w[i]);
      worst = std::max(worst, gap - gap0);
      if (++guard > 100000000L) throw NumericError("comparison_check: step budget exhausted");
    }
    ComparisonVerdict verdict;
    double uscale = 1.0;
    for (int i = 0; i < grid.nx; ++i) uscale = std::max(uscale, std::abs(v[i]));
    verdict.slack = 1e-12 * uscale * std::sqrt(static_cast<double>(guard) + 1.0);
    verdict.max_violation = worst;
    verdict.pass = worst <= verdict.slack;
    return verdict;
  });
}

double required_halfwidth(const Realization& r, double p_range, double t_end, double margin) {
  const double sigma = 1.2 * r.dHdp_bound(p_range);
  return sigma * t_end + margin;
}

}  // namespace vhj
