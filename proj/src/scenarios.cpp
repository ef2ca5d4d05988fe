#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "smoothpic/error.hpp"
#include "smoothpic/particles.hpp"

namespace smoothpic {
namespace {

double normal_quantile(double u) { return std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0); }

// Uniform draw strictly inside (0, 1).
double open_unit(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; }

class VelocitySource {
 public:
  VelocitySource(Loading loading, std::uint64_t seed, unsigned base_x, unsigned base_y)
      : loading_(loading), rng_(seed), base_x_(base_x), base_y_(base_y) {}

  // Standard normal deviates for velocity component d of sequence slot i.
  double normal(std::size_t slot, int d) {
    if (loading_ == Loading::Random) return normal_quantile(open_unit(rng_));
    return normal_quantile(van_der_corput(slot + 1, d == 0 ? base_x_ : base_y_));
  }

 private:
  Loading loading_;
  std::mt19937_64 rng_;
  unsigned base_x_;
  unsigned base_y_;
};

void check_plasma(const ScenarioSpec& spec) {
  if (!(spec.wavenumber > 0.0)) throw InvalidArgument("scenario.wavenumber must be positive");
  if (!(std::abs(spec.epsilon) < 1.0)) throw InvalidArgument("scenario.epsilon must satisfy |epsilon| < 1");
  if (spec.velocity_dim != 1 && spec.velocity_dim != 2) throw InvalidArgument("plasma scenarios need 1 or 2 velocity components");
  if (!(spec.thermal_velocity >= 0.0)) throw InvalidArgument("scenario.thermal_velocity must be non-negative");
}

ParticleEnsemble plasma(const ScenarioSpec& spec, std::uint64_t seed) {
  check_plasma(spec);
  const std::size_t n = spec.n_particles;
  const double L = spec.domain_length();
  const double mass = spec.total_mass > 0.0 ? spec.total_mass : L;
  ParticleEnsemble ens(n, 1, spec.velocity_dim);

  const bool two_stream = spec.name == "two_stream";
  const bool weibel = spec.name == "weibel";
  std::mt19937_64 position_rng(seed);
  VelocitySource velocity(spec.loading, seed ^ 0x9e3779b97f4a7c15ULL, two_stream ? 3 : 2, two_stream ? 5 : 3);
  const double vy_scale = weibel ? spec.thermal_velocity * std::sqrt(spec.anisotropy) : spec.thermal_velocity;

  for (std::size_t a = 0; a < n; ++a) {
    const double u = spec.loading == Loading::Quiet ? (static_cast<double>(a) + 0.5) * L / static_cast<double>(n)
                                                    : open_unit(position_rng) * L;
    double x = invert_perturbed_position(u, spec.epsilon, spec.wavenumber);
    x -= L * std::floor(x / L);
    ens.x(a) = x;
    ens.weights[a] = mass / static_cast<double>(n);

    const std::size_t slot = two_stream ? a / 2 : a;
    double vx = spec.thermal_velocity * velocity.normal(slot, 0);
    if (two_stream) vx += (a % 2 == 0 ? spec.drift_velocity : -spec.drift_velocity);
    ens.v(a, 0) = vx;
    if (spec.velocity_dim == 2) ens.v(a, 1) = vy_scale * velocity.normal(slot, 1);
  }
  return ens;
}

}  // namespace

double ScenarioSpec::domain_length() const {
  if (name == "two_vortex" || name == "two_particle") return 0.0;
  return 2.0 * std::numbers::pi / wavenumber;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"landau_damping", "two_stream", "weibel", "two_vortex", "two_particle"};
  return names;
}

double van_der_corput(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= base;
  }
  return result;
}

double invert_perturbed_position(double u, double epsilon, double wavenumber) {
  if (epsilon == 0.0) return u;
  double x = u;
  for (int it = 0; it < 100; ++it) {
    const double f = x + epsilon / wavenumber * std::sin(wavenumber * x) - u;
    const double df = 1.0 + epsilon * std::cos(wavenumber * x);
    const double step = f / df;
    x -= step;
    if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(x))) return x;
  }
  throw Error("quiet-start position inversion did not converge");
}

ParticleEnsemble sample_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
  if (spec.n_particles < 1) throw InvalidArgument("scenario.n_particles must be at least 1");

  if (spec.name == "landau_damping" || spec.name == "two_stream") return plasma(spec, seed);

  if (spec.name == "weibel") {
    if (spec.velocity_dim != 2) throw InvalidArgument("weibel scenario needs two velocity components");
    if (!(spec.anisotropy > 0.0)) throw InvalidArgument("scenario.anisotropy must be positive");
    return plasma(spec, seed);
  }

  if (spec.name == "two_vortex") {
    if (!(spec.separation > 0.0)) throw InvalidArgument("scenario.separation must be positive");
    if (spec.circulation == 0.0) throw InvalidArgument("scenario.circulation must be nonzero");
    ParticleEnsemble ens(2, 2, 0, "vortices");
    ens.x(0, 0) = -0.5 * spec.separation;
    ens.x(1, 0) = 0.5 * spec.separation;
    ens.weights = {spec.circulation, spec.circulation};
    return ens;
  }

  if (spec.name == "two_particle") {
    if (!(spec.separation >= 0.0)) throw InvalidArgument("scenario.separation must be non-negative");
    const double mass = spec.total_mass > 0.0 ? spec.total_mass : 2.0;
    ParticleEnsemble ens(2, 1, 1);
    ens.x(0) = -0.5 * spec.separation;
    ens.x(1) = 0.5 * spec.separation;
    ens.v(0) = -spec.drift_velocity;
    ens.v(1) = spec.drift_velocity;
    ens.weights = {0.5 * mass, 0.5 * mass};
    return ens;
  }

  throw InvalidArgument("unknown scenario '" + spec.name + "'");
}

}  // namespace smoothpic
