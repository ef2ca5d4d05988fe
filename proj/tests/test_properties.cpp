#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smoothpic/gempic.hpp"
#include "smoothpic/integrators.hpp"
#include "smoothpic/meanfield.hpp"

using namespace smoothpic;
using oracle::pi;

namespace {

std::mt19937_64 rng(20240607);

double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

KernelSpec random_kernel(double max_width, int dim = 1) {
  const double w = uniform(0.05, max_width);
  switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return KernelSpec::laplace(w, dim);
    case 1: return KernelSpec::gaussian(w, dim);
    default: return KernelSpec::bspline(w, 2 * std::uniform_int_distribution<int>(1, 4)(rng), dim);
  }
}

GridFunction random_grid(double L, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = uniform(-1.0, 1.0);
  return GridFunction(L, v);
}

ParticleEnsemble random_line(std::size_t n, double spread) {
  ParticleEnsemble e(n, 1, 1);
  for (std::size_t a = 0; a < n; ++a) {
    e.x(a) = uniform(-spread, spread);
    e.v(a) = uniform(-1.0, 1.0);
    e.weights[a] = uniform(0.2, 2.0);
  }
  return e;
}

double max_norm(const GridFunction& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("kernels are even and positive where supported") {
  for (int t = 0; t < 50; ++t) {
    const KernelSpec k = random_kernel(1.0);
    const double r = uniform(0.0, 3.0);
    CHECK(eval_kernel(k, r) == eval_kernel(k, -r));
    CHECK(eval_kernel(k, r) >= 0.0);
    CHECK(eval_kernel_derivative(k, r) == -eval_kernel_derivative(k, -r));
  }
}

TEST_CASE("convolution preserves constants and contracts the L2 norm") {
  for (int t = 0; t < 30; ++t) {
    const double L = uniform(1.0, 5.0);
    const std::size_t n = 64 * std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const KernelSpec k = random_kernel(0.2 * L);
    const double c = uniform(-3.0, 3.0);
    const GridFunction one = convolve_grid(k, GridFunction::sample(L, n, [&](double) { return c; }));
    for (std::size_t i = 0; i < n; ++i) CHECK(one[i] == doctest::Approx(c).epsilon(1e-12).scale(1.0));
    const GridFunction f = random_grid(L, n);
    CHECK(convolve_grid(k, f).l2_norm() <= f.l2_norm() * (1 + 1e-12));
  }
}

TEST_CASE("convolution is linear and commutes with shifts") {
  for (int t = 0; t < 20; ++t) {
    const double L = 2.0;
    const std::size_t n = 128;
    const KernelSpec k = random_kernel(0.4);
    const GridFunction f = random_grid(L, n), g = random_grid(L, n);
    const double a = uniform(-2.0, 2.0);
    const GridFunction lhs = convolve_grid(k, a * f + g);
    const GridFunction rhs = a * convolve_grid(k, f) + convolve_grid(k, g);
    CHECK(max_norm(lhs - rhs) < 1e-12);

    const std::size_t s = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
    std::vector<double> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = f[(i + s) % n];
    const GridFunction lf = convolve_grid(k, f), ls = convolve_grid(k, GridFunction(L, shifted));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(ls[i] - lf[(i + s) % n]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("rkhs inner product is symmetric and positive") {
  for (int t = 0; t < 20; ++t) {
    const double alpha = uniform(0.05, 0.5);
    const GridFunction f = random_grid(1.0, 256), g = random_grid(1.0, 256);
    const double fg = rkhs_inner_product(alpha, f, g), gf = rkhs_inner_product(alpha, g, f);
    CHECK(std::abs(fg - gf) <= 1e-10 * std::max(1.0, std::abs(fg)));
    CHECK(rkhs_inner_product(alpha, f, f) > 0.0);
  }
}

TEST_CASE("deposited mass equals total weight") {
  for (int t = 0; t < 20; ++t) {
    const double L = uniform(1.0, 4.0);
    const KernelSpec k = random_kernel(0.2 * L);
    ParticleEnsemble e = random_line(50, 2 * L);
    const GridFunction rho = deposit_density(e, k, GridFunction(L, 512));
    CHECK(rho.integral() == doctest::Approx(e.total_weight()).epsilon(1e-8));
  }
}

TEST_CASE("moments are linear in the test function") {
  for (int t = 0; t < 20; ++t) {
    const ParticleEnsemble e = random_line(30, 1.0);
    const double a = uniform(-2.0, 2.0);
    const auto f = [](const PhasePoint& z) { return std::sin(z.x[0]) * z.v[0]; };
    const auto g = [](const PhasePoint& z) { return z.x[0] * z.x[0]; };
    const double lhs = moment(e, [&](const PhasePoint& z) { return a * f(z) + g(z); });
    CHECK(lhs == doctest::Approx(a * moment(e, f) + moment(e, g)).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("vp1d forces sum to zero and match the energy gradient") {
  for (int t = 0; t < 20; ++t) {
    const KernelSpec k = random_kernel(1.0);
    const ParticleEnsemble e = random_line(std::uniform_int_distribution<std::size_t>(2, 8)(rng), 2.0);
    const PairCoupling c = t % 2 ? PairCoupling::Attractive : PairCoupling::Repulsive;
    const auto f = vp1d_forces(e, k, c);
    double sum = 0.0;
    for (std::size_t a = 0; a < e.size(); ++a) {
      sum += f[a];
      ParticleEnsemble p = e, m = e;
      p.x(a) += 1e-5;
      m.x(a) -= 1e-5;
      const double fd = -(vp1d_hamiltonian(p, k, c) - vp1d_hamiltonian(m, k, c)) / 2e-5;
      CHECK(f[a] == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
    }
    CHECK(std::abs(sum) < 1e-13);
  }
}

TEST_CASE("hamiltonians are invariant under translation and permutation") {
  for (int t = 0; t < 20; ++t) {
    const KernelSpec k = random_kernel(1.0);
    const ParticleEnsemble e = random_line(6, 2.0);
    ParticleEnsemble shifted = e, swapped = e;
    const double s = uniform(-5.0, 5.0);
    for (auto& x : shifted.positions) x += s;
    std::swap(swapped.positions[0], swapped.positions[3]);
    std::swap(swapped.velocities[0], swapped.velocities[3]);
    std::swap(swapped.weights[0], swapped.weights[3]);
    const double h = vp1d_hamiltonian(e, k);
    CHECK(vp1d_hamiltonian(shifted, k) == doctest::Approx(h).epsilon(1e-12));
    CHECK(vp1d_hamiltonian(swapped, k) == doctest::Approx(h).epsilon(1e-14));
  }
}

TEST_CASE("vortex velocities conserve linear and angular impulse") {
  for (int t = 0; t < 10; ++t) {
    const std::optional<KernelSpec> k = t % 2 ? std::optional<KernelSpec>{random_kernel(0.5, 2)} : std::nullopt;
    ParticleEnsemble e(5, 2, 0, "vortices");
    for (auto& x : e.positions) x = uniform(-2.0, 2.0);
    for (auto& g : e.weights) g = uniform(0.5, 2.0) * (uniform(-1.0, 1.0) > 0 ? 1.0 : -1.0);
    const auto v = vortex2d_velocities(e, k);
    double px = 0.0, py = 0.0, ang = 0.0;
    for (std::size_t a = 0; a < e.size(); ++a) {
      px += e.weights[a] * v[2 * a];
      py += e.weights[a] * v[2 * a + 1];
      ang += 2 * e.weights[a] * (e.x(a, 0) * v[2 * a] + e.x(a, 1) * v[2 * a + 1]);
    }
    CHECK(std::abs(px) < 1e-12);
    CHECK(std::abs(py) < 1e-12);
    CHECK(std::abs(ang) < 1e-12);
  }
}

TEST_CASE("leapfrog preserves phase-space area for random pair systems") {
  for (int t = 0; t < 10; ++t) {
    const KernelSpec k = random_kernel(1.0);
    const ForceFn f = [&](const ParticleEnsemble& s) { return vp1d_forces(s, k); };
    const ParticleEnsemble e = random_line(3, 1.0);
    const double dt = uniform(0.01, 0.2), eps = 1e-6;
    const std::size_t dim = 6;
    Eigen::MatrixXd jac(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
      ParticleEnsemble p = e, m = e;
      auto& pc = c < 3 ? p.positions[c] : p.velocities[c - 3];
      auto& mc = c < 3 ? m.positions[c] : m.velocities[c - 3];
      pc += eps;
      mc -= eps;
      const ParticleEnsemble ps = leapfrog_step(p, f, dt), ms = leapfrog_step(m, f, dt);
      for (std::size_t r = 0; r < dim; ++r) {
        const double hi = r < 3 ? ps.positions[r] : ps.velocities[r - 3];
        const double lo = r < 3 ? ms.positions[r] : ms.velocities[r - 3];
        jac(r, c) = (hi - lo) / (2 * eps);
      }
    }
    // symplectic with respect to the weighted form Σ wₐ dxₐ∧dvₐ
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
    for (int a = 0; a < 3; ++a) {
      omega(a, a + 3) = e.weights[a];
      omega(a + 3, a) = -e.weights[a];
    }
    CHECK((jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("spline complex structure for random sizes") {
  for (int t = 0; t < 20; ++t) {
    const int p = std::uniform_int_distribution<int>(1, 6)(rng);
    const int n = std::uniform_int_distribution<int>(p + 1, 40)(rng);
    const SplineComplex cx(n, p, uniform(0.5, 10.0));
    const Eigen::MatrixXd g = derivative_matrix(cx);
    CHECK((g * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g.transpose() * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::MatrixXd m0 = mass_matrix(cx, 0), m1 = mass_matrix(cx, 1);
    CHECK((m0 * Eigen::VectorXd::Ones(n)).array().sum() == doctest::Approx(cx.domain_length()).epsilon(1e-12));
    CHECK((m1 * Eigen::VectorXd::Ones(n)).array().sum() == doctest::Approx(cx.domain_length()).epsilon(1e-12));
    const double x = uniform(-20.0, 20.0);
    double s0 = 0.0, s1 = 0.0;
    for (int j = 0; j < n; ++j) {
      s0 += cx.basis(0, j, x);
      s1 += cx.basis(1, j, x);
    }
    CHECK(s0 == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s1 == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("filtered splitting conserves gauss residual for random ensembles") {
  for (int t = 0; t < 4; ++t) {
    const SplineComplex cx(16, std::uniform_int_distribution<int>(2, 4)(rng), 2 * pi);
    const std::optional<KernelSpec> k = t % 2 ? std::optional<KernelSpec>{random_kernel(1.0)} : std::nullopt;
    auto disc = std::make_shared<const VmDiscretization>(cx, k ? build_filtered_basis(cx, *k) : FilteredBasisCache::unfiltered(cx));
    ParticleEnsemble e(40, 1, 2);
    for (std::size_t a = 0; a < 40; ++a) {
      e.x(a) = uniform(0.0, 2 * pi);
      e.v(a, 0) = uniform(-1.0, 1.0);
      e.v(a, 1) = uniform(-1.0, 1.0);
      e.weights[a] = uniform(0.5, 1.5);
    }
    EMState s = make_em_state(e, disc);
    for (int j = 0; j < 16; ++j) {
      s.ey.values(j) = uniform(-0.1, 0.1);
      s.bz.values(j) = uniform(-0.1, 0.1);
    }
    s.ex.values.setRandom();
    const Eigen::VectorXd r0 = gauss_residual(s).residual;
    for (int i = 0; i < 100; ++i) vm_advance(s, 0.05);
    CHECK((gauss_residual(s).residual - r0).cwiseAbs().maxCoeff() < 1e-11);
  }
}
