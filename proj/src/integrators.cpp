#include "smoothpic/integrators.hpp"

#include <cmath>
#include <cstdio>

namespace smoothpic {
namespace {

void kick(ParticleEnsemble& ens, const std::vector<double>& force, double tau) {
  if (force.size() != ens.positions.size()) throw InvalidArgument("force array does not match the ensemble");
  const int dim = ens.position_dim;
  for (std::size_t a = 0; a < ens.size(); ++a) {
    const double inv_w = 1.0 / ens.weights[a];
    for (int d = 0; d < dim; ++d) ens.v(a, d) += tau * force[a * dim + d] * inv_w;
  }
}

}  // namespace

void StepperConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(midpoint_tol > 0.0)) throw InvalidArgument("midpoint tolerance must be positive");
  if (midpoint_max_iter < 1) throw InvalidArgument("midpoint iteration limit must be at least 1");
}

ParticleEnsemble leapfrog_step(const ParticleEnsemble& ensemble, const ForceFn& force, double dt) {
  if (ensemble.velocity_dim != ensemble.position_dim)
    throw InvalidArgument("leapfrog needs as many velocity as position components");
  ParticleEnsemble next = ensemble;
  kick(next, force(next), 0.5 * dt);
  for (std::size_t i = 0; i < next.positions.size(); ++i) next.positions[i] += dt * next.velocities[i];
  kick(next, force(next), 0.5 * dt);
  return next;
}

ParticleEnsemble implicit_midpoint_step(const ParticleEnsemble& ensemble, const VelocityFn& velocity,
                                        const StepperConfig& config) {
  config.validate();
  const std::size_t m = ensemble.positions.size();
  ParticleEnsemble mid = ensemble;
  std::vector<double> guess = ensemble.positions;
  double residual = 0.0;
  for (int it = 1; it <= config.midpoint_max_iter; ++it) {
    for (std::size_t i = 0; i < m; ++i) mid.positions[i] = 0.5 * (ensemble.positions[i] + guess[i]);
    const std::vector<double> f = velocity(mid);
    if (f.size() != m) throw InvalidArgument("velocity array does not match the ensemble");
    residual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double updated = ensemble.positions[i] + config.dt * f[i];
      residual = std::max(residual, std::abs(updated - guess[i]));
      guess[i] = updated;
    }
    if (residual < config.midpoint_tol) {
      ParticleEnsemble next = ensemble;
      next.positions = std::move(guess);
      return next;
    }
  }
  char msg[160];
  std::snprintf(msg, sizeof msg, "implicit midpoint did not converge in %d iterations (residual %.3e); reduce dt",
                config.midpoint_max_iter, residual);
  throw ConvergenceError(msg, residual, config.midpoint_max_iter);
}

}  // namespace smoothpic
