#pragma once

// Geometric time steppers: kick-drift-kick leapfrog for separable particle
// Hamiltonians and implicit midpoint for first-order (vortex) systems.

#include <functional>
#include <vector>

#include "smoothpic/error.hpp"
#include "smoothpic/particles.hpp"

namespace smoothpic {

struct StepperConfig {
  double dt = 1e-3;
  double midpoint_tol = 1e-12;
  int midpoint_max_iter = 50;

  /// Throws unless dt > 0, tol > 0 and max_iter ≥ 1.
  void validate() const;
};

/// Raised when the midpoint fixed-point iteration fails to converge.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Forces -∂H/∂x, laid out like ensemble.positions.
using ForceFn = std::function<std::vector<double>(const ParticleEnsemble&)>;

/// Position velocities ż, laid out like ensemble.positions.
using VelocityFn = std::function<std::vector<double>(const ParticleEnsemble&)>;

/// Kick-drift-kick step with accelerations force / wₐ. Negative dt runs the
/// step backwards, and step(dt) followed by step(-dt) is the identity up to
/// round-off.
ParticleEnsemble leapfrog_step(const ParticleEnsemble& ensemble, const ForceFn& force, double dt);

/// z⁺ = z + dt·f((z + z⁺)/2) on the positions, solved by fixed-point
/// iteration until max|Δz⁺| < midpoint_tol.
ParticleEnsemble implicit_midpoint_step(const ParticleEnsemble& ensemble, const VelocityFn& velocity,
                                        const StepperConfig& config);

}  // namespace smoothpic
