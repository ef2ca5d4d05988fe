#include "smoothpic/feec1d.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "smoothpic/bspline.hpp"
#include "smoothpic/error.hpp"
#include "smoothpic/quadrature.hpp"

namespace smoothpic {
namespace {

int wrap(int j, int n) {
  j %= n;
  return j < 0 ? j + n : j;
}

void check_space(int ell) {
  if (ell != 0 && ell != 1) throw InvalidArgument("form degree must be 0 or 1");
}

// ∫ over [a, b] with breakpoints at knots, `points` Gauss-Legendre nodes per
// piece.
template <class F>
double integrate_knot_aligned(double a, double b, double h, int points, F&& f) {
  const auto& rule = gauss_legendre(points);
  double sum = 0.0;
  double lo = a;
  while (lo < b) {
    double hi = (std::floor(lo / h + 1e-12) + 1.0) * h;
    if (hi > b || b - hi < 1e-12 * h) hi = b;
    sum += integrate(rule, lo, hi, f);
    lo = hi;
  }
  return sum;
}

}  // namespace

SplineComplex::SplineComplex(int n_cells, int degree, double domain_length)
    : n_cells_(n_cells), degree_(degree), domain_length_(domain_length), spacing_(domain_length / n_cells) {
  if (degree < 1 || degree > kMaxSplineDegree) throw InvalidArgument("spline degree must be between 1 and 9");
  if (n_cells < degree + 1) throw InvalidArgument("n_cells must be at least degree + 1");
  if (!(domain_length > 0.0)) throw InvalidArgument("domain length must be positive");
}

int SplineComplex::dim(int ell) const {
  check_space(ell);
  return n_cells_;
}

int SplineComplex::space_degree(int ell) const {
  check_space(ell);
  return ell == 0 ? degree_ : degree_ - 1;
}

double SplineComplex::greville(int j) const {
  const double g = (j + 0.5 * (degree_ + 1)) * spacing_;
  return g - domain_length_ * std::floor(g / domain_length_);
}

void SplineComplex::locate(double x, int& cell, double& t) const {
  double y = x / spacing_;
  y -= n_cells_ * std::floor(y / n_cells_);
  double c = std::floor(y);
  t = y - c;
  cell = static_cast<int>(c);
  if (cell >= n_cells_) cell -= n_cells_;
}

double SplineComplex::basis(int ell, int j, double x) const {
  const int q = space_degree(ell);
  double u = x / spacing_ - j;
  u -= n_cells_ * std::floor(u / n_cells_);
  return cardinal_bspline(q, u);
}

double SplineComplex::basis_derivative(int j, double x) const {
  return (basis(1, j, x) - basis(1, j + 1, x)) / spacing_;
}

namespace {

Eigen::MatrixXd assemble(const SplineComplex& cx, int ell_a, int ell_b) {
  const int n = cx.n_cells();
  const int qa = cx.space_degree(ell_a);
  const int qb = cx.space_degree(ell_b);
  const double h = cx.spacing();
  const auto& rule = gauss_legendre(16);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::array<double, kMaxSplineDegree + 1> va{}, vb{};
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double t = 0.5 * (rule.nodes[k] + 1.0);
    const double w = 0.5 * rule.weights[k] * h;
    cardinal_bspline_cell_values(qa, t, std::span<double>(va.data(), qa + 1));
    cardinal_bspline_cell_values(qb, t, std::span<double>(vb.data(), qb + 1));
    for (int c = 0; c < n; ++c)
      for (int r = 0; r <= qa; ++r)
        for (int s = 0; s <= qb; ++s) m(wrap(c + r - qa, n), wrap(c + s - qb, n)) += w * va[r] * vb[s];
  }
  return m;
}

}  // namespace

Eigen::MatrixXd mass_matrix(const SplineComplex& complex, int ell) {
  check_space(ell);
  return assemble(complex, ell, ell);
}

Eigen::MatrixXd mixed_mass_matrix(const SplineComplex& complex) { return assemble(complex, 0, 1); }

Eigen::MatrixXd derivative_matrix(const SplineComplex& complex) {
  const int n = complex.n_cells();
  const double inv_h = 1.0 / complex.spacing();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) += inv_h;
    g(i, wrap(i - 1, n)) -= inv_h;
  }
  return g;
}

CoeffVector dof_project(const SplineComplex& complex, int ell, const std::function<double(double)>& f) {
  check_space(ell);
  const int n = complex.n_cells();
  const double h = complex.spacing();
  Eigen::MatrixXd dual(n, n);
  Eigen::VectorXd rhs(n);
  for (int k = 0; k < n; ++k) {
    const double g = complex.greville(k);
    if (ell == 0) {
      for (int j = 0; j < n; ++j) dual(k, j) = complex.basis(0, j, g);
      rhs(k) = f(g);
    } else {
      for (int j = 0; j < n; ++j)
        dual(k, j) = integrate_knot_aligned(g, g + h, h, 16, [&](double x) { return complex.basis(1, j, x); });
      rhs(k) = integrate_knot_aligned(g, g + h, h, 64, f);
    }
  }
  CoeffVector out{ell, dual.partialPivLu().solve(rhs)};
  return out;
}

double eval_field(const SplineComplex& complex, const CoeffVector& coeffs, double x) {
  const int n = complex.n_cells();
  if (coeffs.values.size() != n) throw InvalidArgument("coefficient vector length does not match the complex");
  const int q = complex.space_degree(coeffs.space);
  int cell;
  double t;
  complex.locate(x, cell, t);
  std::array<double, kMaxSplineDegree + 1> vals{};
  cardinal_bspline_cell_values(q, t, std::span<double>(vals.data(), q + 1));
  double sum = 0.0;
  for (int r = 0; r <= q; ++r) sum += coeffs.values(wrap(cell + r - q, n)) * vals[r];
  return sum;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& matrix) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open matrix file '" + path + "'");
  char buf[32];
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", matrix(i, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
}

}  // namespace smoothpic
