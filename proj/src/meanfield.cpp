#include "smoothpic/meanfield.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "smoothpic/error.hpp"
#include "smoothpic/parallel.hpp"

namespace smoothpic {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double coupling_sign(PairCoupling coupling) { return coupling == PairCoupling::Attractive ? 1.0 : -1.0; }

void require_vp1d(const ParticleEnsemble& ens, const KernelSpec& kernel) {
  if (ens.position_dim != 1 || ens.velocity_dim != 1) throw InvalidArgument("vp1d needs a 1D1V ensemble");
  if (kernel.dim != 1) throw InvalidArgument("vp1d needs a one-dimensional kernel");
}

void require_vortex(const ParticleEnsemble& ens, const std::optional<KernelSpec>& kernel) {
  if (ens.position_dim != 2) throw InvalidArgument("vortex system needs a 2D ensemble");
  if (kernel && kernel->dim != 2) throw InvalidArgument("vortex system needs a two-dimensional kernel");
}

// V(r), V'(r) of the 2D pair interaction.
PotentialValue vortex_potential(const std::optional<KernelSpec>& kernel, double r) {
  if (kernel) return pair_potential(*kernel)(r);
  if (r == 0.0) throw Error("log singularity: coincident unsmoothed vortices");
  return {std::log(r) / kTwoPi, 1.0 / (kTwoPi * r)};
}

struct Registry {
  Registry();
  std::mutex mutex;
  std::map<std::string, MeanFieldHamiltonian> entries;
};

Registry::Registry() {
  entries["vp1d"] = [](const MeanFieldSystem& s, const ParticleEnsemble& e) {
    if (!s.kernel) throw InvalidArgument("vp1d system needs a kernel");
    return vp1d_hamiltonian(e, *s.kernel, s.coupling);
  };
  entries["vortex2d"] = [](const MeanFieldSystem& s, const ParticleEnsemble& e) {
    return vortex2d_hamiltonian(e, s.kernel);
  };
}

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::string to_string(PairCoupling coupling) {
  return coupling == PairCoupling::Attractive ? "attractive" : "repulsive";
}

PairCoupling parse_pair_coupling(const std::string& name) {
  if (name == "attractive") return PairCoupling::Attractive;
  if (name == "repulsive") return PairCoupling::Repulsive;
  throw InvalidArgument("unknown pair coupling '" + name + "'");
}

Vp1dEnergy vp1d_energy(const ParticleEnsemble& ens, const KernelSpec& kernel, PairCoupling coupling) {
  require_vp1d(ens, kernel);
  const auto& V = pair_potential(kernel);
  Vp1dEnergy e;
  const std::size_t n = ens.size();
  for (std::size_t a = 0; a < n; ++a) e.kinetic += 0.5 * ens.weights[a] * ens.v(a) * ens.v(a);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      e.potential += ens.weights[a] * ens.weights[b] * V(std::abs(ens.x(a) - ens.x(b))).value;
  e.potential *= coupling_sign(coupling);
  return e;
}

double vp1d_hamiltonian(const ParticleEnsemble& ens, const KernelSpec& kernel, PairCoupling coupling) {
  return vp1d_energy(ens, kernel, coupling).total();
}

std::vector<double> vp1d_forces(const ParticleEnsemble& ens, const KernelSpec& kernel, PairCoupling coupling) {
  require_vp1d(ens, kernel);
  const auto& V = pair_potential(kernel);
  const double sign = coupling_sign(coupling);
  std::vector<double> force(ens.size(), 0.0);
  parallel_for(ens.size(), [&](std::size_t a) {
    double sum = 0.0;
    for (std::size_t b = 0; b < ens.size(); ++b) {
      if (b == a) continue;
      const double d = ens.x(a) - ens.x(b);
      if (d == 0.0) continue;
      const double dv = V(std::abs(d)).derivative;
      sum -= ens.weights[b] * dv * (d > 0.0 ? 1.0 : -1.0);
    }
    force[a] = sign * ens.weights[a] * sum;
  });
  return force;
}

double vp1d_momentum(const ParticleEnsemble& ens) {
  double p = 0.0;
  for (std::size_t a = 0; a < ens.size(); ++a) p += ens.weights[a] * ens.v(a);
  return p;
}

double vortex2d_hamiltonian(const ParticleEnsemble& ens, const std::optional<KernelSpec>& kernel) {
  require_vortex(ens, kernel);
  double h = 0.0;
  for (std::size_t a = 0; a < ens.size(); ++a)
    for (std::size_t b = a + 1; b < ens.size(); ++b) {
      const double r = std::hypot(ens.x(a, 0) - ens.x(b, 0), ens.x(a, 1) - ens.x(b, 1));
      h += ens.weights[a] * ens.weights[b] * vortex_potential(kernel, r).value;
    }
  return h;
}

std::vector<double> vortex2d_velocities(const ParticleEnsemble& ens, const std::optional<KernelSpec>& kernel) {
  require_vortex(ens, kernel);
  std::vector<double> vel(2 * ens.size(), 0.0);
  parallel_for(ens.size(), [&](std::size_t a) {
    double u = 0.0, w = 0.0;
    for (std::size_t b = 0; b < ens.size(); ++b) {
      if (b == a) continue;
      const double dx = ens.x(a, 0) - ens.x(b, 0);
      const double dy = ens.x(a, 1) - ens.x(b, 1);
      const double r = std::hypot(dx, dy);
      const double dv = vortex_potential(kernel, r).derivative;
      if (r == 0.0) continue;
      u += ens.weights[b] * dv * dy / r;
      w -= ens.weights[b] * dv * dx / r;
    }
    vel[2 * a] = u;
    vel[2 * a + 1] = w;
  });
  return vel;
}

VortexImpulse vortex_impulse(const ParticleEnsemble& ens) {
  VortexImpulse imp;
  for (std::size_t a = 0; a < ens.size(); ++a) {
    const double g = ens.weights[a];
    imp.x += g * ens.x(a, 0);
    imp.y += g * ens.x(a, 1);
    imp.angular += g * (ens.x(a, 0) * ens.x(a, 0) + ens.x(a, 1) * ens.x(a, 1));
  }
  return imp;
}

MeanFieldSystem vp1d_system(const KernelSpec& kernel, PairCoupling coupling) {
  return {"vp1d", SymplecticStructure::CanonicalXV, kernel, coupling};
}

MeanFieldSystem vortex2d_system(const std::optional<KernelSpec>& kernel) {
  return {"vortex2d", SymplecticStructure::VortexXY, kernel, PairCoupling::Attractive};
}

void register_meanfield_system(const std::string& name, MeanFieldHamiltonian hamiltonian) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.entries[name] = std::move(hamiltonian);
}

double meanfield_hamiltonian(const MeanFieldSystem& system, const ParticleEnsemble& ensemble) {
  MeanFieldHamiltonian fn;
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.entries.find(system.name);
    if (it == r.entries.end()) throw InvalidArgument("unregistered system '" + system.name + "'");
    fn = it->second;
  }
  return fn(system, ensemble);
}

}  // namespace smoothpic
