#pragma once

// Test-only oracles, independent of the library's solution paths:
// transfer-matrix Floquet analysis of the linearized cell problem for
// quadratic separable Hamiltonians, plus closed-form Riccati references.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracle {

using Mat2 = std::array<double, 4>;  // row-major 2x2

// Transfer matrix over one period of phi'' = -(E + V(x)) phi, fixed-step RK4.
inline Mat2 transfer_matrix(const std::function<double(double)>& V, double period, double E,
                            int steps = 200000) {
  Mat2 M{1, 0, 0, 1};
  const double h = period / steps;
  auto deriv = [&](double x, const Mat2& m) -> Mat2 {
    const double w = -(E + V(x));
    // d/dx [phi, phi'] rows: phi' = second row, phi'' = w*phi
    return Mat2{m[2], m[3], w * m[0], w * m[1]};
  };
  auto axpy = [](const Mat2& a, double c, const Mat2& b) {
    return Mat2{a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2], a[3] + c * b[3]};
  };
  double x = 0;
  for (int i = 0; i < steps; ++i) {
    const Mat2 k1 = deriv(x, M);
    const Mat2 k2 = deriv(x + h / 2, axpy(M, h / 2, k1));
    const Mat2 k3 = deriv(x + h / 2, axpy(M, h / 2, k2));
    const Mat2 k4 = deriv(x + h, axpy(M, h, k3));
    for (int j = 0; j < 4; ++j) M[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    x += h;
  }
  return M;
}

// Principal periodic eigenvalue of -phi'' - V phi = E phi: smallest E with
// discriminant tr M(E) = 2 (tr > 2 below the spectrum, decreasing through it).
inline double principal_eigenvalue(const std::function<double(double)>& V, double period,
                                   double vmax, int steps = 100000) {
  auto disc = [&](double E) {
    const Mat2 M = transfer_matrix(V, period, E, steps);
    return M[0] + M[3] - 2.0;
  };
  double lo = -vmax - 2.0;
  while (disc(lo) <= 0) lo -= 2.0;
  double hi = lo + 1.0;
  while (disc(hi) > 0) hi += 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * (1 + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (disc(mid) > 0) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

struct FloquetBranch {
  double beta = 0;              // mean of the log-derivative branch over one period
  std::vector<double> x, f;    // samples of the branch over [0, period]
};

// Positive Bloch branch of phi'' = -(E+V) phi with the larger multiplier;
// f = phi'/phi solves f' = -(E+V) - f^2 and is periodic with mean +beta.
// Requires E strictly below the principal periodic eigenvalue.
inline FloquetBranch floquet_max_branch(const std::function<double(double)>& V, double period,
                                        double E, int n_samples = 4096, int steps = 400000) {
  steps = n_samples * (steps / n_samples + 1);  // divisible: profile ends at the period
  const Mat2 M = transfer_matrix(V, period, E, steps);
  const double tr = M[0] + M[3];
  if (tr <= 2.0) throw std::runtime_error("floquet: E not below the principal eigenvalue");
  const double mult = 0.5 * (tr + std::sqrt(tr * tr - 4.0));
  // eigenvector of M for `mult`
  double v0, v1;
  if (std::abs(M[1]) > 1e-300) {
    v0 = M[1];
    v1 = mult - M[0];
  } else {
    v0 = mult - M[3];
    v1 = M[2];
  }
  FloquetBranch br;
  br.beta = std::log(mult) / period;
  double f = v1 / v0;
  const double h = period / steps;
  const int rec = steps / n_samples;
  double x = 0;
  auto rhs = [&](double xx, double ff) { return -(E + V(xx)) - ff * ff; };
  for (int i = 0; i <= steps; ++i) {
    if (i % rec == 0) {
      br.x.push_back(x);
      br.f.push_back(f);
    }
    const double k1 = rhs(x, f);
    const double k2 = rhs(x + h / 2, f + h / 2 * k1);
    const double k3 = rhs(x + h / 2, f + h / 2 * k2);
    const double k4 = rhs(x + h, f + h * k3);
    f += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    x += h;
  }
  return br;
}

inline double interp_periodic(const FloquetBranch& br, double period, double xq) {
  double t = std::fmod(xq, period);
  if (t < 0) t += period;
  const double h = br.x[1] - br.x[0];
  size_t i = std::min(br.x.size() - 2, static_cast<size_t>(t / h));
  const double w = (t - br.x[i]) / h;
  return (1 - w) * br.f[i] + w * br.f[i + 1];
}

}  // namespace oracle
