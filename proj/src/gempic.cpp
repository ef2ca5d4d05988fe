#include "smoothpic/gempic.hpp"

#include <cmath>

#include "smoothpic/error.hpp"
#include "smoothpic/parallel.hpp"

namespace smoothpic {
namespace {

constexpr std::size_t kParticleBlock = 128;

double dot(const BasisStencil& s, const Eigen::VectorXd& c) {
  double v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) v += s.value[i] * c(s.index[i]);
  return v;
}

void scatter(const BasisStencil& s, double scale, Eigen::VectorXd& acc) {
  for (std::size_t i = 0; i < s.size(); ++i) acc(s.index[i]) += scale * s.value[i];
}

// Runs body(a, stencils, accumulator) over particles in fixed blocks and sums
// the per-block accumulators in block order.
template <class Body>
Eigen::VectorXd accumulate(std::size_t n_particles, int n, Body&& body) {
  const std::size_t blocks = (n_particles + kParticleBlock - 1) / kParticleBlock;
  std::vector<Eigen::VectorXd> partial(blocks, Eigen::VectorXd::Zero(n));
  parallel_for(blocks, [&](std::size_t b) {
    BasisStencil s0, s1;
    const std::size_t end = std::min(n_particles, (b + 1) * kParticleBlock);
    for (std::size_t a = b * kParticleBlock; a < end; ++a) body(a, s0, s1, partial[b]);
  });
  Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
  for (const auto& p : partial) total += p;
  return total;
}

void require_layout(const EMState& state) {
  if (!state.disc) throw InvalidArgument("EM state has no discretization");
  const int n = state.disc->complex().n_cells();
  if (state.ex.values.size() != n || state.ey.values.size() != n || state.bz.values.size() != n)
    throw InvalidArgument("field coefficient lengths do not match the complex");
  if (state.particles.size() > 0 && (state.particles.position_dim != 1 || state.particles.velocity_dim != 2))
    throw InvalidArgument("1D2V state needs 1D positions and 2D velocities");
}

}  // namespace

VmDiscretization::VmDiscretization(const SplineComplex& complex, FilteredBasisCache cache)
    : complex_(complex),
      cache_(std::move(cache)),
      m0_(mass_matrix(complex, 0)),
      m1_(mass_matrix(complex, 1)),
      m01_(mixed_mass_matrix(complex)),
      g_(derivative_matrix(complex)) {
  m0_llt_.compute(m0_);
  m1_llt_.compute(m1_);
  if (m0_llt_.info() != Eigen::Success || m1_llt_.info() != Eigen::Success)
    throw Error("mass matrix factorization failed");
}

Eigen::VectorXd VmDiscretization::solve_m0(const Eigen::VectorXd& rhs) const { return m0_llt_.solve(rhs); }
Eigen::VectorXd VmDiscretization::solve_m1(const Eigen::VectorXd& rhs) const { return m1_llt_.solve(rhs); }

EMState make_em_state(ParticleEnsemble particles, std::shared_ptr<const VmDiscretization> disc) {
  if (!disc) throw InvalidArgument("EM state needs a discretization");
  const int n = disc->complex().n_cells();
  const double L = disc->complex().domain_length();
  EMState s;
  s.particles = std::move(particles);
  for (auto& x : s.particles.positions) x -= L * std::floor(x / L);
  s.ex = {1, Eigen::VectorXd::Zero(n)};
  s.ey = {0, Eigen::VectorXd::Zero(n)};
  s.bz = {1, Eigen::VectorXd::Zero(n)};
  s.background = s.particles.total_weight() / L;
  s.disc = std::move(disc);
  require_layout(s);
  return s;
}

namespace {

Eigen::VectorXd deposited_charge(const EMState& state) {
  const auto& basis = state.disc->basis();
  const auto& ens = state.particles;
  return accumulate(ens.size(), state.disc->complex().n_cells(),
                    [&](std::size_t a, BasisStencil& s0, BasisStencil&, Eigen::VectorXd& acc) {
                      basis.evaluate(0, ens.x(a), s0);
                      scatter(s0, ens.weights[a], acc);
                    });
}

}  // namespace

void solve_gauss_law(EMState& state) {
  require_layout(state);
  const auto& cx = state.disc->complex();
  const int n = cx.n_cells();
  const double h = cx.spacing();
  Eigen::VectorXd rho = deposited_charge(state);
  rho.array() -= state.background * h;
  // Gᵀe = -ρ with e = M₁Ex
  Eigen::VectorXd e(n);
  e(0) = 0.0;
  for (int j = 0; j + 1 < n; ++j) e(j + 1) = e(j) + h * rho(j);
  Eigen::VectorXd ex = state.disc->solve_m1(e);
  ex.array() -= ex.mean();
  state.ex.values = ex;
}

double eval_filtered_field(const EMState& state, FieldComponent which, double x) {
  require_layout(state);
  BasisStencil s;
  switch (which) {
    case FieldComponent::Ex:
      state.disc->basis().evaluate(1, x, s);
      return dot(s, state.ex.values);
    case FieldComponent::Ey:
      state.disc->basis().evaluate(0, x, s);
      return dot(s, state.ey.values);
    case FieldComponent::Bz:
      state.disc->basis().evaluate(1, x, s);
      return dot(s, state.bz.values);
  }
  return 0.0;
}

void vm_substep_p1(EMState& state, double tau) {
  const auto& cx = state.disc->complex();
  const auto& basis = state.disc->basis();
  const int n = cx.n_cells();
  const double h = cx.spacing();
  const double L = cx.domain_length();
  auto& ens = state.particles;
  const Eigen::VectorXd& bz = state.bz.values;

  const Eigen::VectorXd current =
      accumulate(ens.size(), n, [&](std::size_t a, BasisStencil& s_old, BasisStencil& s_new, Eigen::VectorXd& acc) {
        const double x_old = ens.x(a);
        const double dx = tau * ens.v(a, 0);
        basis.evaluate(0, x_old, s_old);
        basis.evaluate(0, x_old + dx, s_new);
        // J_j = ∫ Λ̄¹_j along the path, from J_{j+1} = J_j - h·ΔΛ̄⁰_j and ΣJ = Δx.
        thread_local Eigen::VectorXd diff, path;
        diff.setZero(n);
        path.resize(n);
        scatter(s_new, 1.0, diff);
        scatter(s_old, -1.0, diff);
        double prefix = 0.0, prefix_sum = 0.0;
        for (int j = 0; j < n; ++j) {
          path(j) = -h * prefix;
          prefix_sum += prefix;
          prefix += diff(j);
        }
        const double j0 = (dx + h * prefix_sum) / n;
        path.array() += j0;
        ens.v(a, 1) -= path.dot(bz);
        acc += ens.weights[a] * path;
        double x = x_old + dx;
        ens.x(a) = x - L * std::floor(x / L);
      });
  state.ex.values -= state.disc->solve_m1(current);
}

void vm_substep_p2(EMState& state, double tau) {
  const auto& basis = state.disc->basis();
  auto& ens = state.particles;
  const Eigen::VectorXd& bz = state.bz.values;
  const Eigen::VectorXd current = accumulate(
      ens.size(), state.disc->complex().n_cells(),
      [&](std::size_t a, BasisStencil& s0, BasisStencil& s1, Eigen::VectorXd& acc) {
        basis.evaluate(1, ens.x(a), s1);
        basis.evaluate(0, ens.x(a), s0);
        const double vy = ens.v(a, 1);
        ens.v(a, 0) += tau * vy * dot(s1, bz);
        scatter(s0, ens.weights[a] * vy, acc);
      });
  state.ey.values -= tau * state.disc->solve_m0(current);
}

void vm_substep_e(EMState& state, double tau) {
  const auto& basis = state.disc->basis();
  auto& ens = state.particles;
  const Eigen::VectorXd& ex = state.ex.values;
  const Eigen::VectorXd& ey = state.ey.values;
  parallel_for((ens.size() + kParticleBlock - 1) / kParticleBlock, [&](std::size_t b) {
    BasisStencil s0, s1;
    const std::size_t end = std::min(ens.size(), (b + 1) * kParticleBlock);
    for (std::size_t a = b * kParticleBlock; a < end; ++a) {
      basis.evaluate(1, ens.x(a), s1);
      basis.evaluate(0, ens.x(a), s0);
      ens.v(a, 0) += tau * dot(s1, ex);
      ens.v(a, 1) += tau * dot(s0, ey);
    }
  });
  state.bz.values -= tau * (state.disc->g() * ey);
}

void vm_substep_b(EMState& state, double tau) {
  const auto& d = *state.disc;
  state.ey.values += tau * d.solve_m0(d.g().transpose() * (d.m1() * state.bz.values));
}

void vm_advance(EMState& state, double dt) {
  require_layout(state);
  const double half = 0.5 * dt;
  vm_substep_p1(state, half);
  vm_substep_p2(state, half);
  vm_substep_e(state, half);
  vm_substep_b(state, dt);
  vm_substep_e(state, half);
  vm_substep_p2(state, half);
  vm_substep_p1(state, half);
}

EMState vm_split_step(const EMState& state, double dt) {
  EMState next = state;
  vm_advance(next, dt);
  return next;
}

GaussResidual gauss_residual(const EMState& state) {
  require_layout(state);
  const auto& d = *state.disc;
  GaussResidual r;
  r.residual = d.g().transpose() * (d.m1() * state.ex.values) + deposited_charge(state);
  r.residual.array() -= state.background * d.complex().spacing();
  r.max_norm = r.residual.cwiseAbs().maxCoeff();
  return r;
}

VmEnergy vm_energy_parts(const EMState& state) {
  require_layout(state);
  const auto& d = *state.disc;
  const auto& ens = state.particles;
  VmEnergy e;
  for (std::size_t a = 0; a < ens.size(); ++a)
    e.kinetic += 0.5 * ens.weights[a] * (ens.v(a, 0) * ens.v(a, 0) + ens.v(a, 1) * ens.v(a, 1));
  e.ex = 0.5 * state.ex.values.dot(d.m1() * state.ex.values);
  e.ey = 0.5 * state.ey.values.dot(d.m0() * state.ey.values);
  e.bz = 0.5 * state.bz.values.dot(d.m1() * state.bz.values);
  return e;
}

double vm_energy(const EMState& state) { return vm_energy_parts(state).total(); }

double vm_momentum_x(const EMState& state) {
  require_layout(state);
  double p = 0.0;
  const auto& ens = state.particles;
  for (std::size_t a = 0; a < ens.size(); ++a) p += ens.weights[a] * ens.v(a, 0);
  return p + state.ey.values.dot(state.disc->m01() * state.bz.values);
}

}  // namespace smoothpic
