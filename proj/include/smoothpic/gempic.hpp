#pragma once

// Filtered GEMPIC for the 1D2V Vlasov-Maxwell system (x; vx, vy; Ex, Ey, Bz).
//
// Fields live in the periodic spline complex with Ex ∈ V¹, Ey ∈ V⁰,
// Bz ∈ V¹. Particles see and source the fields through the filtered bases
// Λ̄^ell_j = k * Λ^ell_j. The discrete Hamiltonian is
//   H = ½Σ wₐ|vₐ|² + ½ExᵀM₁Ex + ½EyᵀM₀Ey + ½BzᵀM₁Bz
// and the equations of motion are
//   ẋ = vx,  v̇x = Ēx + vy B̄z,  v̇y = Ēy - vx B̄z,
//   M₁Ėx = -Σ wₐ vxₐ Λ̄¹(xₐ),  M₀Ėy = GᵀM₁Bz - Σ wₐ vyₐ Λ̄⁰(xₐ),  Ḃz = -G Ey.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <vector>

#include "smoothpic/feec1d.hpp"
#include "smoothpic/kernels.hpp"
#include "smoothpic/particles.hpp"

namespace smoothpic {

/// Indices and values of the filtered basis functions that are nonzero at a
/// point.
struct BasisStencil {
  std::vector<int> index;
  std::vector<double> value;

  std::size_t size() const { return index.size(); }
};

/// Tabulated filtered bases Λ̄⁰ⱼ, Λ̄¹ⱼ and d/dx Λ̄⁰ⱼ.
///
/// Translation invariance gives Λ̄^ell_j(x) = φ^ell(x - jh) with φ^ell periodic,
/// so one table per space suffices. Each table samples φ at `resolution`
/// points per cell (cell midpoints of a fine grid); values between samples
/// come from 6-point Lagrange interpolation kept inside one knot cell, where
/// φ is smooth. Tables are renormalized so that the bases form an exact
/// partition of unity. In unfiltered mode the cache bypasses the tables and
/// evaluates the splines themselves.
class FilteredBasisCache {
 public:
  FilteredBasisCache(const SplineComplex& complex, const KernelSpec& kernel, int resolution = 64);

  /// Cache-bypassed, unfiltered bases Λ^ell_j.
  static FilteredBasisCache unfiltered(const SplineComplex& complex);

  bool filtered() const { return kernel_.has_value(); }
  const std::optional<KernelSpec>& kernel() const { return kernel_; }
  int resolution() const { return resolution_; }

  /// Λ̄^ell_j(x) for every j that can be nonzero, in a fixed order.
  void evaluate(int ell, double x, BasisStencil& out) const;

  /// Single basis function value (for tests and diagnostics).
  double value(int ell, int j, double x) const;

  /// d/dx Λ̄⁰ⱼ(x), tabulated independently from ∫ Λ⁰ⱼ(y) k'(x - y) dy.
  double derivative(int j, double x) const;

 private:
  explicit FilteredBasisCache(const SplineComplex& complex);
  void evaluate_table(const std::vector<double>& table, const std::vector<int>& active, double x,
                      BasisStencil& out) const;

  SplineComplex complex_;
  std::optional<KernelSpec> kernel_;
  int resolution_ = 0;
  std::vector<double> phi0_, phi1_, dphi0_;
  std::vector<int> active0_, active1_, active_d0_;  // cell offsets with nonzero samples
};

/// Builds the filtered cache; throws when the kernel is wider than L/2.
FilteredBasisCache build_filtered_basis(const SplineComplex& complex, const KernelSpec& kernel, int resolution = 64);

/// Complex, filtered bases, matrices and mass-matrix factorizations shared by
/// all states of a run.
class VmDiscretization {
 public:
  VmDiscretization(const SplineComplex& complex, FilteredBasisCache cache);

  const SplineComplex& complex() const { return complex_; }
  const FilteredBasisCache& basis() const { return cache_; }
  const Eigen::MatrixXd& m0() const { return m0_; }
  const Eigen::MatrixXd& m1() const { return m1_; }
  const Eigen::MatrixXd& m01() const { return m01_; }
  const Eigen::MatrixXd& g() const { return g_; }

  Eigen::VectorXd solve_m0(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_m1(const Eigen::VectorXd& rhs) const;

 private:
  SplineComplex complex_;
  FilteredBasisCache cache_;
  Eigen::MatrixXd m0_, m1_, m01_, g_;
  Eigen::LLT<Eigen::MatrixXd> m0_llt_, m1_llt_;
};

struct EMState {
  ParticleEnsemble particles;  // 1D positions in [0, L), velocities (vx, vy)
  CoeffVector ex;              // V¹
  CoeffVector ey;              // V⁰
  CoeffVector bz;              // V¹
  double background = 0.0;     // uniform neutralizing charge density Q/L
  std::shared_ptr<const VmDiscretization> disc;
};

/// Zero fields, background Σwₐ/L. Ex is left at zero; see solve_gauss_law.
EMState make_em_state(ParticleEnsemble particles, std::shared_ptr<const VmDiscretization> disc);

/// Sets Ex to the zero-mean solution of the discrete filtered Gauss law.
void solve_gauss_law(EMState& state);

enum class FieldComponent { Ex, Ey, Bz };

/// Σ coeffᵢ Λ̄ᵢ(x) in the field's space.
double eval_filtered_field(const EMState& state, FieldComponent which, double x);

/// One Strang step H_p1(dt/2) H_p2(dt/2) H_E(dt/2) H_B(dt) H_E(dt/2)
/// H_p2(dt/2) H_p1(dt/2), in place.
void vm_advance(EMState& state, double dt);

/// Copying form of vm_advance.
EMState vm_split_step(const EMState& state, double dt);

/// The exactly solvable substeps (exposed for subsystem conservation tests).
void vm_substep_p1(EMState& state, double tau);
void vm_substep_p2(EMState& state, double tau);
void vm_substep_e(EMState& state, double tau);
void vm_substep_b(EMState& state, double tau);

struct GaussResidual {
  Eigen::VectorXd residual;
  double max_norm = 0.0;
};

/// rⱼ = (GᵀM₁Ex)ⱼ + Σₐ wₐ Λ̄⁰ⱼ(xₐ) - background·h.
GaussResidual gauss_residual(const EMState& state);

struct VmEnergy {
  double kinetic = 0.0;
  double ex = 0.0;
  double ey = 0.0;
  double bz = 0.0;
  double total() const { return kinetic + ex + ey + bz; }
};

VmEnergy vm_energy_parts(const EMState& state);
double vm_energy(const EMState& state);

/// Σ wₐ vxₐ + ∫ Ey Bz dx (diagnostic only).
double vm_momentum_x(const EMState& state);

}  // namespace smoothpic
