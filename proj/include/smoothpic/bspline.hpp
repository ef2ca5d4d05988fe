#pragma once

#include <span>

namespace smoothpic {

/// Values of the degree+1 cardinal B-splines of the given degree that are
/// nonzero on the unit cell [0, 1), evaluated at local coordinate t.
///
/// The cardinal spline N_j is supported on [j, j + degree + 1]. On the cell
/// [0, 1) the nonzero ones are N_{-degree}, ..., N_0 and out[r] holds
/// N_{r - degree}(t). The values sum to one.
void cardinal_bspline_cell_values(int degree, double t, std::span<double> out);

/// N^degree(t) for the cardinal B-spline supported on [0, degree + 1].
double cardinal_bspline(int degree, double t);

/// d/dt N^degree(t) = N^{degree-1}(t) - N^{degree-1}(t - 1).
double cardinal_bspline_derivative(int degree, double t);

constexpr int kMaxSplineDegree = 9;

}  // namespace smoothpic
