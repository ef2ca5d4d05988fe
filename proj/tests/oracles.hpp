#pragma once

// Reference implementations used only by tests. Nothing here calls into the
// library's quadrature, spline or potential code.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/factorials.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

constexpr double pi = std::numbers::pi;

// Adaptive Gauss-Kronrod over [a, b] split at the given interior points.
template <class F>
double integrate(F f, double a, double b, std::vector<double> breaks = {}, double tol = 1e-15, unsigned depth = 15) {
  std::vector<double> pts{a};
  for (double x : breaks)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, pts[i], pts[i + 1], depth, tol);
  return sum;
}

// Truncated-power form of the centered cardinal B-spline of order q.
inline double centered_bspline(int q, double u) {
  if (std::abs(u) >= 0.5 * q) return 0.0;
  double s = 0.0;
  for (int k = 0; k <= q; ++k) {
    const double t = u + 0.5 * q - k;
    if (t > 0) s += ((k % 2) ? -1.0 : 1.0) * boost::math::binomial_coefficient<double>(q, k) * std::pow(t, q - 1);
  }
  return s / boost::math::factorial<double>(q - 1);
}

// Cardinal B-spline of degree p on [0, p + 1] by the two-term recursion.
inline double cardinal(int p, double t) {
  if (t < 0.0 || t >= p + 1) return 0.0;
  if (p == 0) return 1.0;
  return (t * cardinal(p - 1, t) + (p + 1 - t) * cardinal(p - 1, t - 1)) / p;
}

// Periodic spline Λ⁰ⱼ/Λ¹ⱼ of degree p on n cells of width h.
inline double periodic_spline(int p, int j, double x, int n, double h) {
  double y = x / h - j;
  y -= n * std::floor(y / n);
  double v = 0.0;
  for (int m = -1; m <= (p + 1) / n + 1; ++m) v += cardinal(p, y + m * n);
  return v;
}

inline double laplace1d(double alpha, double r) { return std::exp(-std::abs(r) / alpha) / (2 * alpha); }

// 1D Laplace potential and derivative: |r|/2 + (α/2)e^{-|r|/α}.
inline double laplace1d_potential(double alpha, double r) { return std::abs(r) / 2 + alpha / 2 * std::exp(-std::abs(r) / alpha); }
inline double laplace1d_force(double alpha, double r) { return 0.5 * (1 - std::exp(-std::abs(r) / alpha)); }

// 2D Laplace kernel e^{-r/α}/(2πα²): V = (ln r + E₁(r/α) + e^{-r/α})/2π,
// V' = (1 - (1 + r/α)e^{-r/α})/(2πr).
inline double laplace2d_potential(double alpha, double r) {
  const double t = r / alpha;
  return (std::log(r) + boost::math::expint(1, t) + std::exp(-t)) / (2 * pi);
}
inline double laplace2d_dpotential(double alpha, double r) {
  const double t = r / alpha;
  return (1 - (1 + t) * std::exp(-t)) / (2 * pi * r);
}

// 2D Gaussian: V' = (1 - e^{-r²/2σ²})/(2πr).
inline double gaussian2d_dpotential(double sigma, double r) {
  return -std::expm1(-r * r / (2 * sigma * sigma)) / (2 * pi * r);
}

// Relative error, guarded against zero references.
inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
