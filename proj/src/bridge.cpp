#include "vhj/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vhj {

namespace {

struct ShotSetup {
  Interval shot;              // [start, window end]
  std::vector<double> nodes;  // launch point plus f1's grid inside the range
};

ShotSetup setup_shot(const CorrectorSolution& f1, const CorrectorSolution& f2, double n) {
  if (f1.window.lo > -n || f2.window.lo > -n)
    throw ConfigError("bridge: bracketing solutions do not cover the launch window");
  ShotSetup s;
  s.shot = {-n, std::min(f1.window.hi, f2.window.hi)};
  s.nodes.push_back(s.shot.lo);
  for (double xx : f1.x)
    if (xx > s.shot.lo + 1e-12 && xx <= s.shot.hi + 1e-12) s.nodes.push_back(xx);
  if (s.nodes.size() < 8) throw ConfigError("bridge: launch window too short");
  return s;
}

BridgeResult run_shot(const Realization& r, const CorrectorSolution& f1,
                      const CorrectorSolution& f2, double mu, double n, bool descent,
                      const BridgeConfig& cfg, double tol) {
  const ShotSetup st = setup_shot(f1, f2, n);
  BridgeResult br;
  br.mu = mu;
  br.lambda = f1.lambda;
  br.descent = descent;
  br.start_x = st.shot.lo;
  br.crossing_x = BridgeResult::kNoCrossing;

  const double f0 = descent ? f2.value_at(st.shot.lo) : f1.value_at(st.shot.lo);
  const double lo = std::min(f1.min_f(), f2.min_f()) - 1.0;
  const double hi = std::max(f1.max_f(), f2.max_f()) + 1.0;

  IvpOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  auto rhs = [&](double x, double f) { return (mu - r.H(x, f)) / r.a(x); };
  const IvpTrace t =
      integrate_scalar(rhs, st.shot.lo, f0, st.shot.hi, Interval{lo, hi}, opt, &st.nodes);

  br.x = t.x;
  br.g = t.f;
  double gap_lo = 1e300, gap_up = 1e300;
  size_t cross_i = t.x.size();
  for (size_t i = 0; i < t.x.size(); ++i) {
    const double v1 = f1.value_at(t.x[i]);
    const double v2 = f2.value_at(t.x[i]);
    if (descent) {
      if (t.f[i] > v2 + cfg.grow_slack && t.x[i] > st.shot.lo)
        throw NumericError("bridge: descent trajectory rose above the launch solution");
      if (t.f[i] <= v1) {
        cross_i = i;
        break;
      }
    } else {
      if (t.f[i] < v1 - cfg.grow_slack && t.x[i] > st.shot.lo)
        throw NumericError("bridge: ascent trajectory fell below the launch solution");
      if (t.f[i] >= v2) {
        cross_i = i;
        break;
      }
    }
    if (i > 0) {  // the launch node sits on one of the solutions by construction
      gap_lo = std::min(gap_lo, t.f[i] - v1);
      gap_up = std::min(gap_up, v2 - t.f[i]);
    }
  }
  // leaving the envelope box between nodes counts as a crossing at the exit
  if (cross_i == t.x.size() && t.exit) cross_i = t.x.size();

  if (cross_i < t.x.size() || t.exit) {
    br.verdict = BridgeVerdict::crossed;
    if (t.exit && cross_i == t.x.size()) {
      br.crossing_x = t.exit->x;
    } else if (cross_i == 0) {
      br.crossing_x = t.x.empty() ? st.shot.lo : t.x[0];
    } else {
      const CorrectorSolution& target = descent ? f1 : f2;
      double xa = t.x[cross_i - 1], xb = t.x[cross_i];
      double ga = t.f[cross_i - 1], gb = t.f[cross_i];
      for (int it = 0; it < 60 && xb - xa > 1e-13 * (1 + std::abs(xb)); ++it) {
        const double xm = 0.5 * (xa + xb);
        const double gm = ga + (gb - ga) * (xm - xa) / (xb - xa);
        const double tm = target.value_at(xm);
        const bool past = descent ? (gm <= tm) : (gm >= tm);
        if (past) {
          xb = xm;
          gb = gm;
        } else {
          xa = xm;
          ga = gm;
        }
      }
      br.crossing_x = 0.5 * (xa + xb);
    }
    if (cross_i < t.x.size()) {
      br.x.resize(cross_i + 1);
      br.g.resize(cross_i + 1);
    }
  } else {
    br.verdict = BridgeVerdict::confined;
    br.min_gap_lower = gap_lo;
    br.min_gap_upper = gap_up;
  }
  if (br.g.size() > 1) {
    const size_t skip =
        std::min(static_cast<size_t>(cfg.tail_skip * br.g.size()), br.g.size() - 2);
    br.tail_mean = trapezoid_mean(br.g, skip, br.g.size());
  } else if (!br.g.empty()) {
    br.tail_mean = br.g[0];
  }
  return br;
}

BridgeResult shoot_impl(const Realization& r, const CorrectorSolution& f1,
                        const CorrectorSolution& f2, double mu, double n, bool descent,
                        const BridgeConfig& cfg) {
  const auto ord = check_ordering(f1, f2);
  if (ord.verdict == Ordering::identical)
    throw ConfigError("bridge: bracketing solutions coincide");
  if (ord.verdict != Ordering::below)
    throw ConfigError("bridge: requires f1 strictly below f2");
  if (descent && !(mu < f1.lambda))
    throw ConfigError("bridge: descent requires mu below the solutions' level");
  if (!descent && !(mu > f1.lambda))
    throw ConfigError("bridge: ascent requires mu above the solutions' level");
  try {
    return run_shot(r, f1, f2, mu, n, descent, cfg, cfg.tol);
  } catch (const NumericError&) {
    return run_shot(r, f1, f2, mu, n, descent, cfg, cfg.retry_tol);
  }
}

inline double smoothstep5(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  return t * t * t * (10 + t * (-15 + 6 * t));
}

inline double smoothstep5_deriv(double t) {
  if (t <= 0 || t >= 1) return 0;
  const double u = t * (1 - t);
  return 30 * u * u;
}

}  // namespace

BridgeResult shoot_descend(const Realization& r, const CorrectorSolution& f1,
                           const CorrectorSolution& f2, double mu, double n,
                           const BridgeConfig& cfg) {
  return shoot_impl(r, f1, f2, mu, n, true, cfg);
}

BridgeResult shoot_ascend(const Realization& r, const CorrectorSolution& f1,
                          const CorrectorSolution& f2, double mu, double n,
                          const BridgeConfig& cfg) {
  return shoot_impl(r, f1, f2, mu, n, false, cfg);
}

GluedFunction mollify_glue(const Realization& r, const CorrectorSolution& f_left,
                           const CorrectorSolution& f_right, const BridgeResult& bridge,
                           double mu, double epsilon, double r_margin, int index_cap) {
  if (!(epsilon > 0)) throw ConfigError("mollify_glue: epsilon must be positive");
  if (!(r_margin > 0)) throw ConfigError("mollify_glue: margin must be positive");
  if (bridge.verdict != BridgeVerdict::crossed)
    throw ConfigError("mollify_glue: bridge did not cross");

  GluedFunction out;
  out.mu = mu;
  out.epsilon = epsilon;
  out.descent = bridge.descent;

  // gluing a solution to itself is the identity
  if (check_ordering(f_left, f_right).verdict == Ordering::identical) {
    out.status = GlueStatus::ok;
    out.x = f_left.x;
    out.g = f_left.f;
    out.residual.resize(out.x.size());
    for (size_t i = 0; i < out.x.size(); ++i)
      out.residual[i] = r.a(out.x[i]) * f_left.f_prime[i] + r.H(out.x[i], out.g[i]) - mu;
    out.residual_min = *std::min_element(out.residual.begin(), out.residual.end());
    out.residual_max = *std::max_element(out.residual.begin(), out.residual.end());
    return out;
  }

  const double x_hat = bridge.start_x;
  const double y_hat = bridge.crossing_x;
  if (!std::isfinite(y_hat)) throw ConfigError("mollify_glue: bridge has no crossing point");
  const double dx = f_right.dx();
  const double pad = r_margin + 1.0;
  const Interval dom{x_hat - pad, y_hat + pad};
  if (f_left.window.lo > dom.lo + 1e-12 || f_right.window.hi < dom.hi - 1e-12)
    throw ConfigError("mollify_glue: outer solutions do not cover the inflated region");

  const int n_nodes = std::max(8, static_cast<int>(std::round(dom.length() / dx)));
  const std::vector<double> xs = linspace(dom.lo, dom.lo + n_nodes * dx, n_nodes + 1);

  // raw piecewise bridge: outer stationary solutions glued to the shot
  auto bridge_value = [&](double x) -> double {
    const auto& bx = bridge.x;
    const auto& bg = bridge.g;
    if (x <= bx.front()) return bg.front();
    if (x >= bx.back()) return bg.back();
    size_t j = 0;
    // bx is uniform except possibly the first interval
    if (bx.size() > 2) {
      const double h = bx[2] - bx[1];
      j = std::min(bx.size() - 2,
                   static_cast<size_t>(std::max(0.0, (x - bx[1]) / h)) + 1);
      while (j > 0 && bx[j] > x) --j;
      while (j + 2 < bx.size() && bx[j + 1] < x) ++j;
    }
    const double t = (x - bx[j]) / (bx[j + 1] - bx[j]);
    return (1 - t) * bg[j] + t * bg[j + 1];
  };
  auto g_raw = [&](double x) -> double {
    if (x < x_hat) return f_left.value_at(x);
    if (x > y_hat) return f_right.value_at(x);
    return bridge_value(x);
  };
  auto g_raw_deriv = [&](double x, double gval) -> double {
    const double level = (x < x_hat || x > y_hat) ? f_left.lambda : mu;
    return (level - r.H(x, gval)) / r.a(x);
  };

  std::vector<double> g(xs.size()), gp(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    g[i] = g_raw(xs[i]);
    gp[i] = g_raw_deriv(xs[i], g[i]);
  }
  // exact first and second antiderivatives of the piecewise-linear interpolant
  std::vector<double> S(xs.size(), 0.0), T(xs.size(), 0.0);
  for (size_t i = 1; i < xs.size(); ++i) {
    S[i] = S[i - 1] + 0.5 * (g[i] + g[i - 1]) * dx;
    // int of the quadratic S over the cell (Simpson, exact)
    const double S_mid = S[i - 1] + dx * (3 * g[i - 1] + g[i]) / 8.0;
    T[i] = T[i - 1] + dx / 6.0 * (S[i - 1] + 4 * S_mid + S[i]);
  }

  const double w_ramp = 0.5 * r_margin;
  out.cutoff_lo = x_hat - r_margin;
  out.cutoff_hi = y_hat + r_margin;
  out.ramp_width = w_ramp;
  out.cutoff_slope_sup = 1.875 / w_ramp;
  auto xi = [&](double x) -> double {
    if (x <= out.cutoff_lo || x >= out.cutoff_hi) return 0.0;
    if (x < x_hat - w_ramp) return smoothstep5((x - out.cutoff_lo) / w_ramp);
    if (x > y_hat + w_ramp) return smoothstep5((out.cutoff_hi - x) / w_ramp);
    return 1.0;
  };
  auto xi_deriv = [&](double x) -> double {
    if (x > out.cutoff_lo && x < x_hat - w_ramp)
      return smoothstep5_deriv((x - out.cutoff_lo) / w_ramp) / w_ramp;
    if (x > y_hat + w_ramp && x < out.cutoff_hi)
      return -smoothstep5_deriv((out.cutoff_hi - x) / w_ramp) / w_ramp;
    return 0.0;
  };

  int m = std::max(2, static_cast<int>(std::round(std::min(0.25 * r_margin, 0.1) / dx)));
  while (true) {
    const double w = m * dx;
    out.mollifier_index = static_cast<int>(std::round(1.0 / w));
    out.x = xs;
    out.g.assign(xs.size(), 0.0);
    out.residual.assign(xs.size(), 0.0);
    double rmin = 1e300, rmax = -1e300;
    double worst = xs.front();
    for (size_t i = 0; i < xs.size(); ++i) {
      const double x = xs[i];
      const double c = xi(x);
      double ge, gpe;
      if (c == 0.0) {
        ge = g[i];
        gpe = gp[i];
      } else {
        const size_t im = i - m, ip = i + m;  // in range: cutoff support is padded
        const double gsm = (T[ip] - 2 * T[i] + T[im]) / (w * w);
        const double dsm = (S[ip] - 2 * S[i] + S[im]) / (w * w);
        ge = c * gsm + (1 - c) * g[i];
        gpe = xi_deriv(x) * (gsm - g[i]) + c * dsm + (1 - c) * gp[i];
      }
      out.g[i] = ge;
      const double res = r.a(x) * gpe + r.H(x, ge) - mu;
      out.residual[i] = res;
      if (res < rmin) {
        rmin = res;
        if (bridge.descent) worst = x;
      }
      if (res > rmax) {
        rmax = res;
        if (!bridge.descent) worst = x;
      }
    }
    out.residual_min = rmin;
    out.residual_max = rmax;
    out.worst_x = worst;
    const bool ok = bridge.descent ? (rmin > -2 * epsilon) : (rmax < 2 * epsilon);
    if (ok) {
      out.status = GlueStatus::ok;
      return out;
    }
    if (m <= 2 || out.mollifier_index > index_cap) {
      out.status = GlueStatus::failed_residual;
      return out;
    }
    m = std::max(2, m / 2);  // shrink the kernel: sharper smoothing
  }
}

std::vector<GapLevelRow> detect_gap_level(const Realization& r, const CorrectorSolution& f1,
                                          const CorrectorSolution& f2,
                                          const std::vector<double>& mu_grid,
                                          const std::vector<int>& n_schedule,
                                          const BridgeConfig& cfg) {
  if (check_ordering(f1, f2).verdict != Ordering::below)
    throw ConfigError("detect_gap_level: requires f1 strictly below f2");
  std::vector<GapLevelRow> rows;
  rows.reserve(mu_grid.size());
  const double lambda = f1.lambda;
  for (double mu : mu_grid) {
    GapLevelRow row;
    row.mu = mu;
    if (mu == lambda) {
      row.skipped = true;  // the theorem's hypotheses exclude mu == lambda
      rows.push_back(row);
      continue;
    }
    for (int n : n_schedule) {
      if (-static_cast<double>(n) < f1.window.lo) continue;
      const BridgeResult br = (mu < lambda) ? shoot_descend(r, f1, f2, mu, n, cfg)
                                            : shoot_ascend(r, f1, f2, mu, n, cfg);
      row.window_schedule.push_back(n);
      row.verdicts.push_back(br.verdict);
      row.final_verdict = br.verdict;
      if (br.verdict == BridgeVerdict::confined) row.tail_mean = br.tail_mean;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace vhj
