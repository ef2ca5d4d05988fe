#include "smoothpic/particles.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "smoothpic/error.hpp"
#include "smoothpic/parallel.hpp"

namespace smoothpic {

namespace {
constexpr std::size_t kDepositBlock = 256;
}

ParticleEnsemble::ParticleEnsemble(std::size_t n, int pdim, int vdim, std::string name)
    : position_dim(pdim),
      velocity_dim(vdim),
      positions(n * static_cast<std::size_t>(pdim), 0.0),
      velocities(n * static_cast<std::size_t>(vdim), 0.0),
      weights(n, 0.0),
      species(std::move(name)) {}

double ParticleEnsemble::total_weight() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

void ParticleEnsemble::validate() const {
  if (position_dim < 1 || position_dim > 2) throw InvalidArgument("ensemble position dimension must be 1 or 2");
  if (velocity_dim < 0 || velocity_dim > 2) throw InvalidArgument("ensemble velocity dimension must be 0, 1 or 2");
  const std::size_t n = weights.size();
  if (n == 0) throw InvalidArgument("ensemble is empty");
  if (positions.size() != n * position_dim || velocities.size() != n * velocity_dim)
    throw InvalidArgument("ensemble arrays have inconsistent lengths");
  for (double w : weights) {
    if (velocity_dim > 0 && !(w > 0.0)) throw InvalidArgument("plasma weights must be positive");
    if (velocity_dim == 0 && w == 0.0) throw InvalidArgument("vortex circulations must be nonzero");
  }
}

double moment(const ParticleEnsemble& ensemble, const std::function<double(const PhasePoint&)>& g) {
  double sum = 0.0;
  for (std::size_t a = 0; a < ensemble.size(); ++a) {
    PhasePoint z{ensemble.position(a), ensemble.velocity_dim > 0 ? ensemble.velocity(a) : std::span<const double>{}};
    sum += ensemble.weights[a] * g(z);
  }
  return sum;
}

GridFunction deposit_density(const ParticleEnsemble& ensemble, const KernelSpec& kernel, const GridFunction& grid_template) {
  if (ensemble.position_dim != 1) throw InvalidArgument("deposit_density needs a one-dimensional ensemble");
  kernel.validate();
  if (kernel.width > 0.5 * grid_template.domain_length()) throw Error("kernel does not fit domain");
  if (grid_template.spacing() >= 0.5 * kernel.width)
    warn("grid spacing does not resolve the kernel width (h >= width/2)");

  const std::size_t n = grid_template.size();
  const double L = grid_template.domain_length();
  const std::size_t blocks = (ensemble.size() + kDepositBlock - 1) / kDepositBlock;
  std::vector<GridFunction> partial(blocks, GridFunction(L, n));
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t end = std::min(ensemble.size(), (b + 1) * kDepositBlock);
    for (std::size_t a = b * kDepositBlock; a < end; ++a) {
      if (ensemble.weights[a] == 0.0) continue;
      add_kernel_footprint(kernel, ensemble.x(a), ensemble.weights[a], partial[b]);
    }
  });
  GridFunction out(L, n);
  for (const auto& p : partial) out += p;
  return out;
}

void write_snapshot(const std::string& path, const ParticleEnsemble& ensemble) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open snapshot file '" + path + "'");
  static const char* pos_names[] = {"x", "y"};
  static const char* vel_names[] = {"vx", "vy"};
  os << "id";
  for (int d = 0; d < ensemble.position_dim; ++d) os << ',' << pos_names[d];
  for (int d = 0; d < ensemble.velocity_dim; ++d) os << ',' << vel_names[d];
  os << ",w\n";
  char buf[32];
  auto put = [&](double value) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    os << ',' << buf;
  };
  for (std::size_t a = 0; a < ensemble.size(); ++a) {
    os << a;
    for (int d = 0; d < ensemble.position_dim; ++d) put(ensemble.x(a, d));
    for (int d = 0; d < ensemble.velocity_dim; ++d) put(ensemble.v(a, d));
    put(ensemble.weights[a]);
    os << '\n';
  }
  if (!os) throw Error("failed writing snapshot file '" + path + "'");
}

}  // namespace smoothpic
