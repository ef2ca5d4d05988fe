#pragma once

// Mean-field particle Hamiltonians H[Z] = Σ wₐ h₀(zₐ) + Σ_{a≠b} wₐ w_b V(zₐ - z_b)
// with V = Δ⁻¹k, specialized to the filtered 1D Vlasov-Poisson system and to
// smoothed 2D point vortices.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smoothpic/kernels.hpp"
#include "smoothpic/particles.hpp"

namespace smoothpic {

/// Sign of the pair term in the 1D Vlasov-Poisson particle Hamiltonian.
///
/// Attractive: H = ½Σ wₐvₐ² + ½Σ_{a≠b} wₐw_b V(|xₐ - x_b|), with
/// V = |x|/2 + (α/2)e^{-|x|/α} for the Laplace kernel. Equal-sign weights
/// attract and two particles form a bound pair. Repulsive flips the pair
/// term (electrostatic like charges).
enum class PairCoupling { Attractive, Repulsive };

std::string to_string(PairCoupling coupling);
PairCoupling parse_pair_coupling(const std::string& name);

struct Vp1dEnergy {
  double kinetic = 0.0;
  double potential = 0.0;
  double total() const { return kinetic + potential; }
};

Vp1dEnergy vp1d_energy(const ParticleEnsemble& ensemble, const KernelSpec& kernel,
                       PairCoupling coupling = PairCoupling::Attractive);

double vp1d_hamiltonian(const ParticleEnsemble& ensemble, const KernelSpec& kernel,
                        PairCoupling coupling = PairCoupling::Attractive);

/// -∂H/∂xₐ per particle. The acceleration is force / wₐ. Pair contributions
/// are antisymmetric and vanish at zero separation.
std::vector<double> vp1d_forces(const ParticleEnsemble& ensemble, const KernelSpec& kernel,
                                PairCoupling coupling = PairCoupling::Attractive);

/// Σ wₐ vₐ.
double vp1d_momentum(const ParticleEnsemble& ensemble);

/// H = Σ_{a<b} ΓₐΓ_b V(|xₐ - x_b|), with V = ln(r)/2π when `kernel` is empty
/// and the smoothed 2D potential otherwise. Throws "log singularity" for
/// coincident unsmoothed vortices.
double vortex2d_hamiltonian(const ParticleEnsemble& ensemble, const std::optional<KernelSpec>& kernel);

/// (ẋₐ, ẏₐ) = Γₐ⁻¹(∂H/∂yₐ, -∂H/∂xₐ), interleaved per vortex.
std::vector<double> vortex2d_velocities(const ParticleEnsemble& ensemble, const std::optional<KernelSpec>& kernel);

struct VortexImpulse {
  double x = 0.0;        // Σ Γₐ xₐ
  double y = 0.0;        // Σ Γₐ yₐ
  double angular = 0.0;  // Σ Γₐ |xₐ|²
};

VortexImpulse vortex_impulse(const ParticleEnsemble& ensemble);

enum class SymplecticStructure { CanonicalXV, VortexXY };

/// A registered mean-field system: the registry name selects h₀ and the pair
/// term; `kernel` smooths the interaction (empty means unsmoothed).
struct MeanFieldSystem {
  std::string name;
  SymplecticStructure structure = SymplecticStructure::CanonicalXV;
  std::optional<KernelSpec> kernel;
  PairCoupling coupling = PairCoupling::Attractive;
};

MeanFieldSystem vp1d_system(const KernelSpec& kernel, PairCoupling coupling = PairCoupling::Attractive);
MeanFieldSystem vortex2d_system(const std::optional<KernelSpec>& kernel);

using MeanFieldHamiltonian = std::function<double(const MeanFieldSystem&, const ParticleEnsemble&)>;

/// Adds or replaces a specialization. "vp1d" and "vortex2d" are built in.
void register_meanfield_system(const std::string& name, MeanFieldHamiltonian hamiltonian);

/// Dispatches to the registered specialization; throws for unknown names.
double meanfield_hamiltonian(const MeanFieldSystem& system, const ParticleEnsemble& ensemble);

}  // namespace smoothpic
