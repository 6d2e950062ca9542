#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "vhj/util.hpp"

namespace vhj {

struct IvpOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_max = 0.05;
  double h_min = 1e-13;
  // Implicit-Euler fallback engages when the adaptive step collapses while the
  // local Lipschitz constant of the right-hand side is large (stiff region).
  bool allow_implicit_fallback = true;
  double stiff_lipschitz = 1e6;
};

struct BoxExit {
  int dir = 0;      // +1 exited through the top, -1 through the bottom
  double x = 0.0;   // refined exit location
  double f = 0.0;
};

struct IvpTrace {
  // Samples at the requested nodes (plus the start node). Empty if no nodes
  // were requested.
  std::vector<double> x, f, fp;
  std::optional<BoxExit> exit;
  bool stiff_fallback_used = false;
  size_t steps = 0;
  double x_end = 0.0;  // last x reached (== x1 unless exited)
  double f_end = 0.0;
};

/// Adaptive Dormand-Prince 5(4) for a scalar ODE f' = rhs(x, f), integrating
/// from x0 to x1 (either direction). Stops early when f leaves `box`, refining
/// the exit point on the cubic Hermite interpolant of the last step. When
/// `nodes` is given (sorted in march direction, within [x0,x1]), steps land
/// exactly on each node and the solution is recorded there.
template <class RHS>
IvpTrace integrate_scalar(RHS&& rhs, double x0, double f0, double x1, Interval box,
                          const IvpOptions& opt = {}, const std::vector<double>* nodes = nullptr) {
  IvpTrace tr;
  const double dir = (x1 >= x0) ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);

  auto eval = [&](double x, double f) -> double {
    const double v = rhs(x, f);
    if (!std::isfinite(v)) throw NumericError("ivp: right-hand side returned a non-finite value");
    return v;
  };

  double x = x0, f = f0;
  double k1 = eval(x, f);

  size_t node_i = 0;
  auto record = [&](double xx, double ff, double dd) {
    tr.x.push_back(xx);
    tr.f.push_back(ff);
    tr.fp.push_back(dd);
  };
  if (nodes && !nodes->empty() && std::abs((*nodes)[0] - x0) < 1e-14 * (1 + std::abs(x0))) {
    record(x0, f0, k1);
    node_i = 1;
  }

  if (!box.contains(f0)) {
    tr.exit = BoxExit{f0 > box.hi ? 1 : -1, x0, f0};
    tr.x_end = x0;
    tr.f_end = f0;
    return tr;
  }

  double h = std::min(opt.h_init, std::max(opt.h_max * 1e-3, span * 1e-6));

  // Dormand-Prince coefficients.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto hermite = [](double xa, double fa, double da, double xb, double fb, double db,
                    double xq) {
    const double hh = xb - xa;
    const double t = (xq - xa) / hh;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * fa + (t3 - 2 * t2 + t) * hh * da +
           (-2 * t3 + 3 * t2) * fb + (t3 - t2) * hh * db;
  };

  const double x_final = x1;
  while (dir * (x_final - x) > 1e-14 * (1 + std::abs(x))) {
    double target = x_final;
    if (nodes && node_i < nodes->size()) target = (*nodes)[node_i];
    double hstep = std::min({h, opt.h_max, std::abs(target - x)});
    if (hstep <= 0) hstep = opt.h_min;
    const double hs = dir * hstep;

    const double k2 = eval(x + c2 * hs, f + hs * (a21 * k1));
    const double k3 = eval(x + c3 * hs, f + hs * (a31 * k1 + a32 * k2));
    const double k4 = eval(x + c4 * hs, f + hs * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = eval(x + c5 * hs, f + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 =
        eval(x + hs, f + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double fnew = f + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = eval(x + hs, fnew);
    const double err =
        std::abs(hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7));
    const double tol = opt.atol + opt.rtol * std::max(std::abs(f), std::abs(fnew));

    if (err <= tol || hstep <= opt.h_min * 4) {
      ++tr.steps;
      const double x_new = x + hs;
      if (!box.contains(fnew)) {
        const int edir = fnew > box.hi ? 1 : -1;
        const double lev = edir > 0 ? box.hi : box.lo;
        double lo = x, hi = x_new;
        for (int it = 0; it < 60 && std::abs(hi - lo) > 1e-15 * (1 + std::abs(hi)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double fm = hermite(x, f, k1, x_new, fnew, k7, mid);
          if ((fm - lev) * edir > 0) hi = mid; else lo = mid;
        }
        const double xe = 0.5 * (lo + hi);
        tr.exit = BoxExit{edir, xe, lev};
        tr.x_end = xe;
        tr.f_end = lev;
        return tr;
      }
      x = x_new;
      f = fnew;
      k1 = k7;  // FSAL
      if (nodes && node_i < nodes->size() &&
          std::abs(x - (*nodes)[node_i]) < 1e-12 * (1 + std::abs(x))) {
        record((*nodes)[node_i], f, k1);
        ++node_i;
      }
      if (err > 0) {
        h = hstep * std::clamp(0.9 * std::pow(tol / err, 0.2), 0.25, 5.0);
      } else {
        h = hstep * 5.0;
      }
      h = std::min(h, opt.h_max);
    } else {
      h = hstep * std::max(0.9 * std::pow(tol / err, 0.2), 0.1);
      if (h < opt.h_min) {
        // Stiffness: either fall back to implicit Euler with a small fixed
        // step or report the location.
        const double dh = 1e-6 * (1 + std::abs(f));
        const double lips = std::abs(eval(x, f + dh) - eval(x, f - dh)) / (2 * dh);
        if (opt.allow_implicit_fallback && lips > opt.stiff_lipschitz) {
          tr.stiff_fallback_used = true;
          const double hie = dir * std::max(opt.h_min * 1e4, 1e-7);
          double fn = f;
          for (int it = 0; it < 50; ++it) {
            const double g = fn - f - hie * eval(x + hie, fn);
            const double dg = 1 - hie * (eval(x + hie, fn + dh) - eval(x + hie, fn - dh)) / (2 * dh);
            const double stepn = g / dg;
            fn -= stepn;
            if (std::abs(stepn) < 1e-14 * (1 + std::abs(fn))) break;
          }
          x += hie;
          f = fn;
          k1 = eval(x, f);
          h = opt.h_min * 1e4;
          continue;
        }
        throw NumericError("ivp: step size underflow (stiffness) at x=" + std::to_string(x));
      }
    }
  }
  tr.x_end = x;
  tr.f_end = f;
  // Flush any remaining nodes equal to the terminal point.
  if (nodes)
    while (node_i < nodes->size() &&
           std::abs((*nodes)[node_i] - x) < 1e-9 * (1 + std::abs(x))) {
      record((*nodes)[node_i], f, k1);
      ++node_i;
    }
  return tr;
}

}  // namespace vhj
