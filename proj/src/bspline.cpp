#include "smoothpic/bspline.hpp"

#include <array>
#include <cmath>

#include "smoothpic/error.hpp"

namespace smoothpic {

void cardinal_bspline_cell_values(int degree, double t, std::span<double> out) {
  if (degree < 0 || degree > kMaxSplineDegree) throw InvalidArgument("spline degree out of range");
  // Cox-de Boor on integer knots. b[r] holds N_{r-k}^k(t) after step k.
  std::array<double, kMaxSplineDegree + 2> b{};
  b[0] = 1.0;
  for (int k = 1; k <= degree; ++k) {
    std::array<double, kMaxSplineDegree + 2> next{};
    for (int r = 0; r <= k; ++r) {
      const int j = r - k;
      double value = 0.0;
      if (r >= 1) value += (t - j) / k * b[r - 1];        // N_j^{k-1}
      if (r <= k - 1) value += (j + k + 1 - t) / k * b[r];  // N_{j+1}^{k-1}
      next[r] = value;
    }
    b = next;
  }
  for (int r = 0; r <= degree; ++r) out[r] = b[r];
}

double cardinal_bspline(int degree, double t) {
  if (!(t > 0.0) && !(degree == 0 && t == 0.0)) return 0.0;
  if (t >= degree + 1) return 0.0;
  const double cell = std::floor(t);
  std::array<double, kMaxSplineDegree + 1> values{};
  cardinal_bspline_cell_values(degree, t - cell, values);
  // N_0(t) = N_{-c}(t - c) sits at slot r = degree - c.
  const int r = degree - static_cast<int>(cell);
  return values[r];
}

double cardinal_bspline_derivative(int degree, double t) {
  if (degree == 0) return 0.0;
  return cardinal_bspline(degree - 1, t) - cardinal_bspline(degree - 1, t - 1.0);
}

}  // namespace smoothpic
