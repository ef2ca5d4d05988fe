#pragma once

// Periodic 1D B-spline de Rham pair V⁰ --d/dx--> V¹ on uniform knots.

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>

namespace smoothpic {

/// V⁰ is spanned by Λ⁰ⱼ(x) = N^p(x/h - j), V¹ by Λ¹ⱼ(x) = N^{p-1}(x/h - j),
/// both periodized with period L = n_cells·h. Both spaces have dimension
/// n_cells, and d/dx Λ⁰ⱼ = (Λ¹ⱼ - Λ¹ⱼ₊₁)/h.
class SplineComplex {
 public:
  /// Requires degree in [1, 9], n_cells ≥ degree + 1 and L > 0.
  SplineComplex(int n_cells, int degree, double domain_length);

  int n_cells() const { return n_cells_; }
  int degree() const { return degree_; }
  double domain_length() const { return domain_length_; }
  double spacing() const { return spacing_; }
  int dim(int ell) const;

  /// Degree of the splines spanning V^ell.
  int space_degree(int ell) const;

  /// Greville abscissa (j + (p+1)/2)·h of Λ⁰ⱼ, reduced mod L.
  double greville(int j) const;

  /// Λ^ell_j(x) for any real x.
  double basis(int ell, int j, double x) const;

  /// d/dx Λ⁰ⱼ(x).
  double basis_derivative(int j, double x) const;

  /// Cell index c and local coordinate t ∈ [0, 1) with x ≡ (c + t)·h mod L.
  void locate(double x, int& cell, double& t) const;

  bool operator==(const SplineComplex&) const = default;

 private:
  int n_cells_;
  int degree_;
  double domain_length_;
  double spacing_;
};

/// Coefficients of a field in V⁰ (space 0) or V¹ (space 1).
struct CoeffVector {
  int space = 0;
  Eigen::VectorXd values;
};

/// (M_ell)ᵢⱼ = ∫ Λ^ell_i Λ^ell_j dx, exact Gauss-Legendre quadrature per cell.
Eigen::MatrixXd mass_matrix(const SplineComplex& complex, int ell);

/// (M₀₁)ᵢⱼ = ∫ Λ⁰ᵢ Λ¹ⱼ dx.
Eigen::MatrixXd mixed_mass_matrix(const SplineComplex& complex);

/// G with Gᵢᵢ = 1/h and Gᵢ,ᵢ₋₁ = -1/h (periodic), so that the V¹
/// coefficients of d/dx Σ cⱼΛ⁰ⱼ are G·c.
Eigen::MatrixXd derivative_matrix(const SplineComplex& complex);

/// Σ⁰ interpolates at the Greville points, σ¹ integrates over the intervals
/// between consecutive Greville points; both are followed by the dual solve
/// so that σ^ell_i(Λ^ell_j) = δᵢⱼ.
CoeffVector dof_project(const SplineComplex& complex, int ell, const std::function<double(double)>& f);

/// Σ coeffsᵢ Λ^space_i(x).
double eval_field(const SplineComplex& complex, const CoeffVector& coeffs, double x);

/// Writes a dense matrix as CSV with 17 significant digits.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& matrix);

}  // namespace smoothpic
