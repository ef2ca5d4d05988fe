#pragma once

// Particle ensembles, moments (f̄, g)_H = Σ wₐ g(zₐ), kernel density
// deposition and deterministic initial-condition samplers.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "smoothpic/kernels.hpp"

namespace smoothpic {

/// Phase-space coordinates and weights of N particles.
///
/// Coordinates are stored interleaved: particle a owns
/// positions[a*position_dim .. a*position_dim + position_dim). Vortex
/// ensembles have velocity_dim = 0 and carry circulations in `weights`.
struct ParticleEnsemble {
  int position_dim = 1;
  int velocity_dim = 1;
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> weights;
  std::string species = "electrons";

  ParticleEnsemble() = default;
  ParticleEnsemble(std::size_t n, int position_dim, int velocity_dim, std::string species = "electrons");

  std::size_t size() const { return weights.size(); }

  double& x(std::size_t a, int d = 0) { return positions[a * position_dim + d]; }
  double x(std::size_t a, int d = 0) const { return positions[a * position_dim + d]; }
  double& v(std::size_t a, int d = 0) { return velocities[a * velocity_dim + d]; }
  double v(std::size_t a, int d = 0) const { return velocities[a * velocity_dim + d]; }

  std::span<const double> position(std::size_t a) const { return {positions.data() + a * position_dim, static_cast<std::size_t>(position_dim)}; }
  std::span<const double> velocity(std::size_t a) const {
    return {velocities.data() + a * velocity_dim, static_cast<std::size_t>(velocity_dim)};
  }

  double total_weight() const;

  /// Array lengths agree and N ≥ 1. Plasma ensembles (velocity_dim > 0)
  /// need positive weights, vortex ensembles nonzero ones.
  void validate() const;

  bool operator==(const ParticleEnsemble&) const = default;
};

struct PhasePoint {
  std::span<const double> x;
  std::span<const double> v;
};

/// Σₐ wₐ g(zₐ) in index order.
double moment(const ParticleEnsemble& ensemble, const std::function<double(const PhasePoint&)>& g);

/// ρ̄(xᵢ) = Σₐ wₐ k_per(xᵢ - xₐ) on the grid of `grid_template`.
///
/// Each footprint is mass consistent (see add_kernel_footprint), so the
/// trapezoidal total equals Σ wₐ. Warns when the grid does not resolve the
/// kernel (h ≥ width / 2). Particles are processed in fixed blocks whose
/// partial grids are merged in block order, so the result does not depend
/// on the worker count.
GridFunction deposit_density(const ParticleEnsemble& ensemble, const KernelSpec& kernel, const GridFunction& grid_template);

enum class Loading { Quiet, Random };

struct ScenarioSpec {
  std::string name = "landau_damping";
  std::size_t n_particles = 10000;
  int velocity_dim = 1;  // 1 for electrostatic runs, 2 for 1D2V
  double epsilon = 0.0;
  double wavenumber = 0.5;
  double thermal_velocity = 1.0;
  double drift_velocity = 0.0;
  double circulation = 2.0 * std::numbers::pi;
  double separation = 2.0;
  double anisotropy = 1.0;
  double total_mass = 0.0;  // ≤ 0 selects the scenario default
  Loading loading = Loading::Quiet;

  double domain_length() const;

  bool operator==(const ScenarioSpec&) const = default;
};

/// Known scenario names: landau_damping, two_stream, weibel, two_vortex,
/// two_particle.
const std::vector<std::string>& scenario_names();

/// Deterministic initial ensemble for (spec, seed).
///
/// Plasma scenarios live on [0, L) with L = 2π / wavenumber and default
/// total mass L. Quiet loading inverts x + (ε/k) sin(kx) = (a + ½)L/N by
/// Newton iteration and draws velocities through the inverse normal CDF of
/// van der Corput sequences; Random loading uses a seeded Mersenne twister.
ParticleEnsemble sample_scenario(const ScenarioSpec& spec, std::uint64_t seed);

/// Solves x + (ε/k) sin(kx) = u for x (|ε| < 1).
double invert_perturbed_position(double u, double epsilon, double wavenumber);

/// Radical inverse of `index` in the given base.
double van_der_corput(std::uint64_t index, unsigned base);

/// CSV with header id,x[,y],vx[,vy],w and 17 significant digits.
void write_snapshot(const std::string& path, const ParticleEnsemble& ensemble);

}  // namespace smoothpic
