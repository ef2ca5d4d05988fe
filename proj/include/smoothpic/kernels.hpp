#pragma once

// Smoothing kernels, the convolution operator L and its inverse on periodic
// grids, the discrete RKHS inner product, and pair interaction potentials
// V = Δ⁻¹k in one and two dimensions.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace smoothpic {

enum class KernelFamily { Laplace, Gaussian, BSpline };

std::string to_string(KernelFamily family);
KernelFamily parse_kernel_family(const std::string& name);

/// Symmetric, isotropic, unit-mass smoothing kernel k(|r|).
///
/// `width` is α for Laplace (k = e^{-|r|/α} / 2α in 1D), σ for Gaussian, and
/// the support half-width for the centered cardinal B-spline of `order`
/// (order 4 is the cubic spline). Only even B-spline orders are accepted;
/// their Fourier transforms are non-negative, so the kernel is positive
/// definite and reproduces an RKHS.
struct KernelSpec {
  KernelFamily family = KernelFamily::Laplace;
  double width = 1.0;
  int order = 4;
  int dim = 1;

  static KernelSpec laplace(double alpha, int dim = 1) { return {KernelFamily::Laplace, alpha, 4, dim}; }
  static KernelSpec gaussian(double sigma, int dim = 1) { return {KernelFamily::Gaussian, sigma, 4, dim}; }
  static KernelSpec bspline(double half_width, int order = 4, int dim = 1) {
    return {KernelFamily::BSpline, half_width, order, dim};
  }

  /// Throws InvalidArgument unless width > 0, dim ∈ {1, 2} and (for
  /// B-splines) order ∈ {2, 4, 6, 8}.
  void validate() const;

  bool operator==(const KernelSpec&) const = default;
};

/// k(r). In 2D, r is the radial distance. Total function on the reals.
double eval_kernel(const KernelSpec& kernel, double r);

/// dk/dr for a one-dimensional kernel (signed r; 0 at r = 0).
double eval_kernel_derivative(const KernelSpec& kernel, double r);

/// Fourier transform k̂(κ) = ∫ k(r) e^{-iκr} dr of a one-dimensional kernel.
double kernel_symbol(const KernelSpec& kernel, double kappa);

/// Radius beyond which the kernel carries less than `tail_mass` of its mass
/// (the exact support radius for B-splines).
double tail_radius(const KernelSpec& kernel, double tail_mass);

/// Σ_m k(r + m·period), truncated once the neglected tail mass is < 1e-12.
double periodized_kernel(const KernelSpec& kernel, double r, double period);

/// Uniformly sampled periodic function on [0, domain_length):
/// sample i sits at x_i = i·h, h = domain_length / n.
class GridFunction {
 public:
  GridFunction(double domain_length, std::vector<double> values);
  GridFunction(double domain_length, std::size_t n, double fill = 0.0);

  static GridFunction sample(double domain_length, std::size_t n, const std::function<double(double)>& f);

  std::size_t size() const { return values_.size(); }
  double domain_length() const { return domain_length_; }
  double spacing() const { return domain_length_ / static_cast<double>(values_.size()); }
  double coordinate(std::size_t i) const { return spacing() * static_cast<double>(i); }
  bool periodic() const { return true; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  bool same_grid(const GridFunction& other) const;

  /// Trapezoidal (periodic rectangle) quadrature h·Σ values.
  double integral() const;
  /// Discrete L² norm sqrt(h·Σ values²).
  double l2_norm() const;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double scale);

 private:
  double domain_length_;
  std::vector<double> values_;
};

GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

/// L f = k * f on the periodic grid.
///
/// The convolution of the periodized kernel with the trigonometric
/// interpolant of f, evaluated mode by mode with the kernel's Fourier
/// transform: exact for band-limited f, constants are preserved and
/// ‖Lf‖₂ ≤ ‖f‖₂ holds mode-wise. Throws "kernel does not fit domain" when
/// width > L/2.
GridFunction convolve_grid(const KernelSpec& kernel, const GridFunction& f);

/// (1 - α²∂ₓ²) f̄ by spectral differentiation. Throws for n < 8.
GridFunction apply_inverse_laplace(double alpha, const GridFunction& fbar);

/// (f̄, ḡ)_H = (f̄, L⁻¹ḡ)_{L²} for the Laplace kernel of width α.
double rkhs_inner_product(double alpha, const GridFunction& fbar, const GridFunction& gbar);

/// Adds weight·K_{center} to `grid` using the mass-consistent footprint:
/// samples of the periodized kernel plus the discrete mass deficit split
/// linearly between the two nodes bracketing `center`.
void add_kernel_footprint(const KernelSpec& kernel, double center, double weight, GridFunction& grid);

/// The kernel section K_{x0} = k(· - x0) as a grid function (unit-weight
/// footprint).
GridFunction kernel_section(const KernelSpec& kernel, double center, double domain_length, std::size_t n);

/// V(r) and V'(r) for the free-space pair potential V = Δ⁻¹k.
struct PotentialValue {
  double value = 0.0;
  double derivative = 0.0;
};

/// Radial pair potential with ΔV = k (1D: V'' = k, 2D: (rV')'/r = k).
///
/// Additive constants are fixed by the far field: V(r) - r/2 → 0 in 1D and
/// V(r) - ln(r)/2π → 0 in 2D, matching the unsmoothed Green's functions.
/// Laplace and Gaussian use closed forms in 1D, the Gaussian also in 2D;
/// the remaining cases use cumulative 64-point Gauss-Legendre tables built
/// once on construction.
class PairPotential {
 public:
  /// `force_quadrature` tabulates even where a closed form exists.
  explicit PairPotential(const KernelSpec& kernel, bool force_quadrature = false);

  PotentialValue operator()(double r) const;
  const KernelSpec& kernel() const { return kernel_; }

 private:
  PotentialValue tabulated(double r) const;

  KernelSpec kernel_;
  bool closed_form_ = false;
  double panel_ = 0.0;
  double outer_radius_ = 0.0;
  std::vector<double> mass_;  // enclosed mass at panel ends
  std::vector<double> tail_;  // outer moment from panel end to infinity
};

/// Shared, cached PairPotential for this kernel (thread-safe).
const PairPotential& pair_potential(const KernelSpec& kernel);

/// Convenience wrapper around pair_potential(kernel)(r). Throws for r < 0.
PotentialValue interaction_potential(const KernelSpec& kernel, double r);

}  // namespace smoothpic
