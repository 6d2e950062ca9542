#include "vhj/cell.hpp"

#include <algorithm>
#include <cmath>

namespace vhj {

std::string role_name(SolutionRole r) {
  switch (r) {
    case SolutionRole::minimal: return "minimal";
    case SolutionRole::maximal: return "maximal";
    case SolutionRole::inserted: return "inserted";
    case SolutionRole::shot: return "shot";
  }
  return "?";
}

double CorrectorSolution::value_at(double xq) const {
  if (x.empty()) throw NumericError("corrector: empty grid");
  if (xq <= x.front()) return f.front();
  if (xq >= x.back()) return f.back();
  const double h = dx();
  const size_t i = std::min(x.size() - 2, static_cast<size_t>((xq - x.front()) / h));
  const double t = (xq - x[i]) / h;
  return (1 - t) * f[i] + t * f[i + 1];
}

double CorrectorSolution::min_f() const { return *std::min_element(f.begin(), f.end()); }
double CorrectorSolution::max_f() const { return *std::max_element(f.begin(), f.end()); }

double CorrectorSolution::trimmed_mean(double trim) const {
  const size_t n = f.size();
  const size_t cut = static_cast<size_t>(std::floor(0.5 * (1.0 - trim) * (n - 1)));
  return trapezoid_mean(f, cut, n - cut);
}

CorrectorSolution CorrectorSolution::restricted(Interval sub) const {
  CorrectorSolution out = *this;
  out.x.clear();
  out.f.clear();
  out.f_prime.clear();
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] >= sub.lo - 1e-12 && x[i] <= sub.hi + 1e-12) {
      out.x.push_back(x[i]);
      out.f.push_back(f[i]);
      out.f_prime.push_back(f_prime[i]);
    }
  if (out.x.empty()) throw ConfigError("restricted: empty sub-window");
  out.window = {out.x.front(), out.x.back()};
  return out;
}

namespace {

// Extreme momenta of {p : g(p) <= lambda} for a scalar slice g via scan+bisect.
// Returns false when the sublevel set looks empty on the scan grid.
template <class G>
bool slice_band(G&& g, double lambda, double P, double dp, double& lo, double& hi) {
  bool found = false;
  double prev_p = -P;
  double prev_v = g(prev_p);
  double first = 0, last = 0;
  for (double p = -P + dp; p <= P + 0.5 * dp; p += dp) {
    const double v = g(p);
    if (!found && v <= lambda) {
      // refine the left crossing within [prev_p, p]
      double a = prev_p, b = p;
      if (prev_v <= lambda) {
        first = prev_p;
      } else {
        for (int it = 0; it < 50; ++it) {
          const double m = 0.5 * (a + b);
          if (g(m) <= lambda) b = m; else a = m;
        }
        first = b;
      }
      found = true;
    }
    if (v <= lambda) last = p;
    prev_p = p;
    prev_v = v;
  }
  if (!found) return false;
  // refine the right crossing from the last admissible sample
  double a = last, b = std::min(last + dp, P);
  if (g(b) <= lambda) {
    last = b;
  } else {
    for (int it = 0; it < 50; ++it) {
      const double m = 0.5 * (a + b);
      if (g(m) <= lambda) a = m; else b = m;
    }
    last = a;
  }
  lo = first;
  hi = last;
  return true;
}

double field_extreme_over_window(Interval xw, double dx, bool want_min,
                                 const std::function<double(double)>& fn) {
  const int n = std::max(2, static_cast<int>(std::ceil(xw.length() / dx)));
  double best = fn(xw.lo);
  double bx = xw.lo;
  for (int i = 1; i <= n; ++i) {
    const double x = xw.lo + xw.length() * i / n;
    const double v = fn(x);
    if (want_min ? (v < best) : (v > best)) {
      best = v;
      bx = x;
    }
  }
  // golden refinement around the best node
  double a = std::max(xw.lo, bx - xw.length() / n), b = std::min(xw.hi, bx + xw.length() / n);
  const double gr = 0.6180339887498949;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
    const double fc = fn(c), fd = fn(d);
    const bool keep_left = want_min ? (fc < fd) : (fc > fd);
    if (keep_left) {
      b = d; d = c; c = b - gr * (b - a);
    } else {
      a = c; c = d; d = a + gr * (b - a);
    }
  }
  const double v = fn(0.5 * (a + b));
  return want_min ? std::min(best, v) : std::max(best, v);
}

}  // namespace

AdmissibleBand p_bounds(const Realization& r, double lambda, Interval xw, const CellConfig& cfg) {
  AdmissibleBand band;
  band.lambda = lambda;
  const ClassParams& k = r.klass();
  // coercivity cap from the growth envelope
  const double Pcap =
      std::pow(std::max((lambda + 1.0 / k.alpha0 + 1.0) / k.alpha0, 0.0), 1.0 / k.gamma) + 1.0;

  const HamForm form = r.spec().form;
  const bool separable_like =
      (form == HamForm::separable || form == HamForm::double_well) && !r.truncation();
  if (separable_like) {
    // H(x,p) = G(p) + V(x), so the window sublevel set decouples:
    //   {p : exists x in window with H(x,p) <= lambda} = {p : G(p) <= lambda - Vmin}.
    // With Ghat(p) := H(x*,p) - H(x*,0) = G(p) - G(0) and
    // min_x H(x,0) = G(0) + Vmin, the condition reads Ghat(p) <= lambda - min_x H(x,0).
    const double h0min = field_extreme_over_window(xw, cfg.x_scan_dx, true,
                                                   [&](double x) { return r.H(x, 0.0); });
    const double xa = xw.lo;
    auto ghat = [&, h0 = r.H(xa, 0.0)](double p) { return r.H(xa, p) - h0; };
    double lo, hi;
    if (!slice_band(ghat, lambda - h0min, Pcap, cfg.p_scan_dp, lo, hi)) {
      band.empty = true;
      return band;
    }
    band.empty = false;
    band.p_minus = lo;
    band.p_plus = hi;
    return band;
  }

  // generic path: per-x slices
  const int nx = std::max(2, static_cast<int>(std::ceil(xw.length() / cfg.x_scan_dx)));
  bool any = false;
  double lo_all = 0, hi_all = 0;
  for (int i = 0; i <= nx; ++i) {
    const double x = xw.lo + xw.length() * i / nx;
    double lo, hi;
    if (slice_band([&](double p) { return r.H(x, p); }, lambda, Pcap, cfg.p_scan_dp, lo, hi)) {
      if (!any) {
        lo_all = lo;
        hi_all = hi;
        any = true;
      } else {
        lo_all = std::min(lo_all, lo);
        hi_all = std::max(hi_all, hi);
      }
    }
  }
  band.empty = !any;
  if (any) {
    band.p_minus = lo_all;
    band.p_plus = hi_all;
  }
  return band;
}

Interval safety_box(const Realization& r, double lambda, Interval xw, const CellConfig& cfg) {
  const AdmissibleBand b = p_bounds(r, lambda + cfg.box_delta, xw, cfg);
  if (b.empty) {
    // no admissible momenta even at the inflated level: fall back to the
    // growth-envelope cap so integration can still report blow-down
    const ClassParams& k = r.klass();
    const double P =
        std::pow(std::max((lambda + cfg.box_delta + 1.0 / k.alpha0 + 1.0) / k.alpha0, 0.0),
                 1.0 / k.gamma) +
        cfg.box_margin;
    return {-P, P};
  }
  return {b.p_minus - cfg.box_margin, b.p_plus + cfg.box_margin};
}

IvpTrace integrate_ivp(const Realization& r, double lambda, double x0, double f0, int direction,
                       double x_stop, double tol, Interval box, const std::vector<double>* nodes) {
  IvpOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-2;
  auto rhs = [&r, lambda](double x, double f) { return (lambda - r.H(x, f)) / r.a(x); };
  const double x1 = direction >= 0 ? std::max(x_stop, x0) : std::min(x_stop, x0);
  return integrate_scalar(rhs, x0, f0, x1, box, opt, nodes);
}

namespace {

enum class Fate { stays, up, down };

struct Shooter {
  const Realization& r;
  double lambda;
  Interval window;
  Interval box;
  std::vector<double> nodes;
  IvpOptions coarse, fine;

  Fate classify(double s) const {
    auto rhs = [this](double x, double f) { return (lambda - r.H(x, f)) / r.a(x); };
    const IvpTrace t = integrate_scalar(rhs, window.lo, s, window.hi, box, coarse, nullptr);
    if (!t.exit) return Fate::stays;
    return t.exit->dir > 0 ? Fate::up : Fate::down;
  }

  IvpTrace shoot_fine(double s) const {
    auto rhs = [this](double x, double f) { return (lambda - r.H(x, f)) / r.a(x); };
    return integrate_scalar(rhs, window.lo, s, window.hi, box, fine, &nodes);
  }
};

// Boundary of the "exits up" set (from above) and of the "exits down" set
// (from below); both by bisection on the ordered family of trajectories.
double bisect_boundary(const Shooter& sh, double s_lo, double s_hi, Fate hi_side, int depth) {
  // invariant: classify(s_hi) == hi_side, classify(s_lo) != hi_side
  for (int i = 0; i < depth; ++i) {
    const double mid = 0.5 * (s_lo + s_hi);
    if (mid == s_lo || mid == s_hi) break;
    if (sh.classify(mid) == hi_side) s_hi = mid; else s_lo = mid;
  }
  return s_lo;
}

CorrectorSolution trace_to_solution(const Realization& r, double lambda, Interval window,
                                    const IvpTrace& t, SolutionRole role, Interval band) {
  CorrectorSolution s;
  s.lambda = lambda;
  s.window = window;
  s.x = t.x;
  s.f = t.f;
  s.f_prime = t.fp;
  s.role = role;
  s.band_lo = band.lo;
  s.band_hi = band.hi;
  s.seed = r.seed();
  double res = 0, resfd = 0;
  for (size_t i = 0; i < s.x.size(); ++i) {
    res = std::max(res, std::abs(r.a(s.x[i]) * s.f_prime[i] + r.H(s.x[i], s.f[i]) - lambda));
    if (i > 0 && i + 1 < s.x.size()) {
      const double d = (s.f[i + 1] - s.f[i - 1]) / (s.x[i + 1] - s.x[i - 1]);
      resfd = std::max(resfd, std::abs(r.a(s.x[i]) * d + r.H(s.x[i], s.f[i]) - lambda));
    }
  }
  s.residual_sup = res;
  s.residual_fd = resfd;
  return s;
}



BoundedSolveOutcome solve_maximal(const Realization& r, double lambda, Interval window,
                                  double tol, const CellConfig& cfg, bool detect_tie) {
  BoundedSolveOutcome out;
  const AdmissibleBand band = p_bounds(r, lambda + cfg.delta, window, cfg);
  if (band.empty) {
    out.status = BoundedSolveStatus::empty_band;
    return out;
  }
  const Interval box = safety_box(r, lambda, window, cfg);

  Shooter sh{r, lambda, window, box, {}, {}, {}};
  sh.coarse.rtol = cfg.ivp_coarse_rtol;
  sh.coarse.atol = cfg.ivp_coarse_rtol * 1e-2;
  sh.coarse.h_max = cfg.h_max;
  sh.fine.rtol = std::min(tol, cfg.ivp_rtol);
  sh.fine.atol = sh.fine.rtol * 1e-2;
  sh.fine.h_max = cfg.h_max;
  const int n_nodes = std::max(2, static_cast<int>(std::round(window.length() / cfg.grid_dx)));
  sh.nodes = linspace(window.lo, window.hi, n_nodes + 1);

  const Fate top = sh.classify(band.p_plus);
  double s_star;
  if (top != Fate::up) {
    s_star = band.p_plus;
  } else {
    const Fate bot = sh.classify(band.p_minus);
    if (bot == Fate::up) {
      out.status = BoundedSolveStatus::no_admissible;
      return out;
    }
    s_star = bisect_boundary(sh, band.p_minus, band.p_plus, Fate::up, cfg.bisect_depth);
  }
  if (sh.classify(s_star) != Fate::stays) {
    out.status = BoundedSolveStatus::no_admissible;
    return out;
  }

  bool tie = false;
  if (detect_tie) {
    // lower endpoint of the admissible interval, for the tie-break report
    double s_lo_adm;
    const Fate bot = sh.classify(band.p_minus);
    if (bot != Fate::down) {
      s_lo_adm = band.p_minus;
    } else {
      // boundary of the exits-down set: bisect with "down" on the low side
      double lo = band.p_minus, hi = s_star;
      for (int i = 0; i < cfg.bisect_depth; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (sh.classify(mid) == Fate::down) lo = mid; else hi = mid;
      }
      s_lo_adm = hi;
    }
    tie = std::abs(s_star - s_lo_adm) <
          cfg.tie_break_rel * std::max(band.p_plus - band.p_minus, 1e-300);
  }

  IvpTrace t = sh.shoot_fine(s_star);
  if (t.exit) {
    // fine integration left the box where the coarse one stayed: nudge inward
    const double width = band.p_plus - band.p_minus;
    t = sh.shoot_fine(s_star - 1e-12 * width);
    if (t.exit) {
      out.status = BoundedSolveStatus::no_admissible;
      return out;
    }
  }
  CorrectorSolution sol = trace_to_solution(r, lambda, window, t, SolutionRole::maximal,
                                            {band.p_minus, band.p_plus});
  sol.degenerate_extremal = tie;
  out.solution = std::move(sol);
  out.status = BoundedSolveStatus::ok;
  return out;
}

}  // namespace

BoundedSolveOutcome bounded_solution_window(const Realization& r, double lambda, Interval window,
                                            SolutionRole target, double tol,
                                            const CellConfig& cfg) {
  if (target == SolutionRole::maximal) return solve_maximal(r, lambda, window, tol, cfg, true);
  if (target != SolutionRole::minimal)
    throw ConfigError("bounded_solution_window: target must be minimal or maximal");
  // minimal solution of (a, H) == -(maximal solution of the reflected problem)(-x)
  BoundedSolveOutcome out =
      solve_maximal(r.reflected(), lambda, {-window.hi, -window.lo}, tol, cfg, true);
  if (out.solution) {
    CorrectorSolution s = reflect_solution(*out.solution);
    s.role = SolutionRole::minimal;
    out.solution = std::move(s);
  }
  return out;
}

Lambda0Estimate estimate_lambda0_detailed(const Realization& r, Interval window, double tol,
                                          const CellConfig& cfg) {
  Lambda0Estimate est;
  const ClassParams& k = r.klass();

  auto lambda0_on_window = [&](Interval w) -> double {
    CellConfig c = cfg;
    auto solvable = [&](double lam) {
      return solve_maximal(r, lam, w, std::max(tol, 1e-9), c, false).ok();
    };
    double hi = k.alpha1 + tol;
    if (!solvable(hi)) {
      // widen the shooting band once, then give up (predicate should hold here)
      c.delta = std::max(0.5, 2 * c.delta);
      c.box_margin += 1;
      if (!solvable(hi))
        throw NumericError("lambda0: upper seed is not solvable; predicate non-monotone");
    }
    const double min_h = field_extreme_over_window(w, cfg.x_scan_dx, true,
                                                   [&](double x) { return r.min_over_p(x); });
    double lo = min_h - 1.0;
    int guard = 0;
    while (solvable(lo)) {
      hi = lo;
      lo = min_h - 2.0 * (min_h - lo + 1.0);
      if (++guard > 60) throw NumericError("lambda0: lower bracket expansion failed");
    }
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (solvable(mid)) hi = mid; else lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  if (cfg.lambda0_richardson) {
    const Interval half{window.mid() - 0.25 * window.length(),
                        window.mid() + 0.25 * window.length()};
    const double lam_half = lambda0_on_window(half);
    const double lam_full = lambda0_on_window(window);
    est.per_window.push_back({half.length(), lam_half});
    est.per_window.push_back({window.length(), lam_full});
    const double q = std::pow(2.0, cfg.lambda0_exponent);
    est.value = lam_full + (lam_full - lam_half) / (q - 1.0);
    est.extrapolated = true;
  } else {
    est.value = lambda0_on_window(window);
    est.per_window.push_back({window.length(), est.value});
  }
  return est;
}

double estimate_lambda0(const Realization& r, Interval window, double tol, const CellConfig& cfg) {
  return estimate_lambda0_detailed(r, window, tol, cfg).value;
}

FuncC1 constant_fn(double c) {
  return FuncC1{[c](double) { return c; }, [](double) { return 0.0; }};
}

InsertOutcome insert_between(const Realization& r, const FuncC1& m, const FuncC1& M,
                             double lambda, Interval window, double tol, const CellConfig& cfg) {
  InsertOutcome out;
  const int n = std::max(2, static_cast<int>(std::round(window.length() / cfg.grid_dx)));
  const std::vector<double> xs = linspace(window.lo, window.hi, n + 1);

  int sign_m = 0, sign_M = 0;
  for (double x : xs) {
    const double mv = m.value(x), Mv = M.value(x);
    if (!(mv < Mv)) {
      out.status = InsertStatus::precondition_rejected;
      out.witness_x = x;
      return out;
    }
    const double rm = r.a(x) * m.deriv(x) + r.H(x, mv) - lambda;
    const double rM = r.a(x) * M.deriv(x) + r.H(x, Mv) - lambda;
    const int sm = rm > 0 ? 1 : (rm < 0 ? -1 : 0);
    const int sM = rM > 0 ? 1 : (rM < 0 ? -1 : 0);
    if (sm == 0 || sM == 0 || sm == sM) {
      out.status = InsertStatus::precondition_rejected;
      out.witness_x = x;
      return out;
    }
    if (sign_m == 0) {
      sign_m = sm;
      sign_M = sM;
    } else if (sm != sign_m || sM != sign_M) {
      out.status = InsertStatus::precondition_rejected;
      out.witness_x = x;
      return out;
    }
  }

  IvpOptions fine;
  fine.rtol = std::min(tol, cfg.ivp_rtol);
  fine.atol = fine.rtol * 1e-2;
  fine.h_max = cfg.h_max;
  auto rhs = [&](double x, double f) { return (lambda - r.H(x, f)) / r.a(x); };
  double wall_lo = 1e300, wall_hi = -1e300;
  for (double x : xs) {
    wall_lo = std::min(wall_lo, m.value(x));
    wall_hi = std::max(wall_hi, M.value(x));
  }
  const Interval hull{wall_lo - 1.0, wall_hi + 1.0};

  // classify a trajectory against the funnel walls
  auto wall_exit = [&](double s, IvpTrace* keep) -> int {
    const IvpTrace t = integrate_scalar(rhs, window.lo, s, window.hi, hull, fine, &xs);
    int res = 0;
    for (size_t i = 0; i < t.x.size(); ++i) {
      if (t.f[i] >= M.value(t.x[i])) { res = +1; break; }
      if (t.f[i] <= m.value(t.x[i])) { res = -1; break; }
    }
    if (res == 0 && t.exit) res = t.exit->dir;  // left the hull between nodes
    if (res == 0 && keep) *keep = t;
    return res;
  };

  const bool contracting = sign_m < 0;  // walls push trajectories inward
  IvpTrace chosen;
  if (contracting) {
    const double s0 = 0.5 * (m.value(window.lo) + M.value(window.lo));
    if (wall_exit(s0, &chosen) != 0)
      throw NumericError("insert_between: trajectory escaped a contracting funnel");
  } else {
    double lo = m.value(window.lo), hi = M.value(window.lo);
    // nudge inside the open funnel
    const double w = hi - lo;
    lo += 1e-12 * w;
    hi -= 1e-12 * w;
    int e_lo = wall_exit(lo, nullptr), e_hi = wall_exit(hi, nullptr);
    if (e_lo == 0) {
      wall_exit(lo, &chosen);
    } else if (e_hi == 0) {
      wall_exit(hi, &chosen);
    } else {
      if (e_lo != -1 || e_hi != 1)
        throw NumericError("insert_between: expanding funnel with inconsistent exits");
      for (int i = 0; i < cfg.bisect_depth + 10; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const int e = wall_exit(mid, nullptr);
        if (e == 0) { break; }
        if (e > 0) hi = mid; else lo = mid;
      }
      // final shot at the midpoint of the surviving bracket
      if (wall_exit(0.5 * (lo + hi), &chosen) != 0)
        throw NumericError("insert_between: bisection did not isolate a confined trajectory");
    }
  }
  if (chosen.x.empty())
    throw NumericError("insert_between: no confined trajectory recorded");
  CorrectorSolution sol = trace_to_solution(r, lambda, window, chosen, SolutionRole::inserted,
                                            {m.value(window.mid()), M.value(window.mid())});
  out.solution = std::move(sol);
  out.status = InsertStatus::ok;
  return out;
}

OrderingReport check_ordering(const CorrectorSolution& f1, const CorrectorSolution& f2) {
  OrderingReport rep;
  const Interval common{std::max(f1.window.lo, f2.window.lo),
                        std::min(f1.window.hi, f2.window.hi)};
  if (!common.valid()) throw ConfigError("check_ordering: disjoint windows");
  const double dx = std::min(f1.dx(), f2.dx());
  const int n = std::max(2, static_cast<int>(std::round(common.length() / dx)));
  double dmin = 1e300, dmax = -1e300, absmin = 1e300;
  double cross_x = common.lo;
  int sign_seen = 0;
  bool crossing = false;
  const double scale = std::max({1.0, std::abs(f1.max_f()), std::abs(f2.max_f())});
  const double tol_ident = 1e-11 * scale;
  for (int i = 0; i <= n; ++i) {
    const double x = common.lo + common.length() * i / n;
    const double d = f1.value_at(x) - f2.value_at(x);
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
    absmin = std::min(absmin, std::abs(d));
    const int s = d > tol_ident ? 1 : (d < -tol_ident ? -1 : 0);
    if (s != 0) {
      if (sign_seen == 0) sign_seen = s;
      else if (s != sign_seen && !crossing) {
        crossing = true;
        cross_x = x;
      }
    }
  }
  if (dmax <= tol_ident && dmin >= -tol_ident) {
    rep.verdict = Ordering::identical;
    rep.min_gap = 0.0;
  } else if (crossing || (dmin < -tol_ident && dmax > tol_ident)) {
    rep.verdict = Ordering::crossing;
    rep.witness_x = cross_x;
    rep.min_gap = absmin;
  } else if (dmax <= tol_ident) {
    rep.verdict = Ordering::below;
    rep.min_gap = -dmax;  // smallest separation f2 - f1
  } else {
    rep.verdict = Ordering::above;
    rep.min_gap = dmin;
  }
  return rep;
}

CorrectorPotential corrector_potential(const CorrectorSolution& f) {
  CorrectorPotential u;
  u.lambda = f.lambda;
  u.x = f.x;
  u.u.resize(f.x.size(), 0.0);
  for (size_t i = 1; i < f.x.size(); ++i)
    u.u[i] = u.u[i - 1] + 0.5 * (f.f[i] + f.f[i - 1]) * (f.x[i] - f.x[i - 1]);
  const size_t mid = f.x.size() / 2;
  const double off = u.u[mid];
  for (auto& v : u.u) v -= off;
  u.residual_sup = f.residual_sup;
  return u;
}

CorrectorSolution reflect_solution(const CorrectorSolution& in) {
  CorrectorSolution out = in;
  out.window = {-in.window.hi, -in.window.lo};
  const size_t n = in.x.size();
  for (size_t i = 0; i < n; ++i) {
    out.x[i] = -in.x[n - 1 - i];
    out.f[i] = -in.f[n - 1 - i];
    out.f_prime[i] = in.f_prime[n - 1 - i];  // d/dx(-f(-x)) = f'(-x)
  }
  out.band_lo = -in.band_hi;
  out.band_hi = -in.band_lo;
  if (in.role == SolutionRole::maximal) out.role = SolutionRole::minimal;
  else if (in.role == SolutionRole::minimal) out.role = SolutionRole::maximal;
  return out;
}

int extrema_diagnostic(const CorrectorSolution& f) {
  const double scale = std::max(1.0, std::max(std::abs(f.min_f()), std::abs(f.max_f())));
  const double eps = 1e-9 * scale;
  int count = 0;
  int last = 0;
  for (double d : f.f_prime) {
    const int s = d > eps ? 1 : (d < -eps ? -1 : 0);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

}  // namespace vhj
