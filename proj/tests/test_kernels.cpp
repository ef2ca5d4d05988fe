#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "smoothpic/error.hpp"
#include "smoothpic/kernels.hpp"

using namespace smoothpic;
using oracle::pi;

TEST_CASE("eval_kernel peak values") {
  CHECK(eval_kernel(KernelSpec::laplace(1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_kernel(KernelSpec::gaussian(1.0), 0.0) == doctest::Approx(0.39894228040143268).epsilon(1e-15));
  CHECK(eval_kernel(KernelSpec::laplace(1.0), 800.0) == 0.0);
  CHECK(eval_kernel(KernelSpec::laplace(1.0), -800.0) == 0.0);
  CHECK(eval_kernel(KernelSpec::bspline(0.7, 4), 0.7) == 0.0);
  CHECK(eval_kernel(KernelSpec::bspline(0.7, 4), -0.71) == 0.0);
}

TEST_CASE("B-spline kernel matches the truncated-power oracle") {
  for (int q : {2, 4, 6, 8}) {
    const double w = 0.9;
    const KernelSpec k = KernelSpec::bspline(w, q);
    const double s = 2 * w / q;
    for (int i = -50; i <= 50; ++i) {
      const double r = 1.1 * w * i / 50.0;
      CHECK(eval_kernel(k, r) == doctest::Approx(oracle::centered_bspline(q, r / s) / s).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("kernels are nonnegative and normalized in 1D and 2D") {
  const std::vector<KernelSpec> specs = {KernelSpec::laplace(0.3), KernelSpec::gaussian(0.4),
                                         KernelSpec::bspline(0.5, 2), KernelSpec::bspline(0.5, 4),
                                         KernelSpec::bspline(0.5, 6), KernelSpec::bspline(0.5, 8)};
  for (KernelSpec k : specs) {
    CAPTURE(to_string(k.family));
    CAPTURE(k.order);
    const double R = 60 * k.width;
    std::vector<double> breaks{0.0};
    if (k.family == KernelFamily::BSpline)
      for (int i = -k.order; i <= k.order; ++i) breaks.push_back(i * k.width / k.order);
    const double m1 = oracle::integrate([&](double r) { return eval_kernel(k, r); }, -R, R, breaks);
    CHECK(std::abs(m1 - 1.0) < 1e-10);
    k.dim = 2;
    const double m2 = oracle::integrate([&](double r) { return 2 * pi * r * eval_kernel(k, r); }, 0.0, R, breaks);
    CHECK(std::abs(m2 - 1.0) < 1e-8);
    for (double r : {0.01, 0.2, 0.7, 3.0}) {
      CHECK(eval_kernel(k, r) >= 0.0);
      CHECK(eval_kernel(k, r) == eval_kernel(k, -r));
    }
  }
}

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(KernelSpec::laplace(-1.0).validate(), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::bspline(1.0, 3).validate(), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::gaussian(1.0, 3).validate(), InvalidArgument);
  CHECK_NOTHROW(KernelSpec::bspline(1.0, 6, 2).validate());
}

TEST_CASE("kernel symbol matches the Fourier integral") {
  for (const KernelSpec& k : {KernelSpec::laplace(0.3), KernelSpec::gaussian(0.2), KernelSpec::bspline(0.4, 4)}) {
    for (double kappa : {0.0, 1.0, 7.5, 20.0}) {
      std::vector<double> breaks{0.0};
      for (int i = 1; i <= 4; ++i) breaks.push_back(i * 0.1);
      const double ref =
          2 * oracle::integrate([&](double r) { return eval_kernel(k, r) * std::cos(kappa * r); }, 0.0, 12.0, breaks);
      CHECK(kernel_symbol(k, kappa) == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
    }
  }
}

TEST_CASE("periodized kernel sums images") {
  const KernelSpec k = KernelSpec::laplace(0.4);
  const double L = 1.0;
  for (double r : {0.0, 0.1, 0.45, -0.3}) {
    double ref = 0.0;
    for (int m = -200; m <= 200; ++m) ref += oracle::laplace1d(0.4, r + m * L);
    CHECK(periodized_kernel(k, r, L) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(periodized_kernel(k, r + 3 * L, L) == doctest::Approx(ref).epsilon(1e-12));
  }
}

TEST_CASE("convolve_grid preserves constants and damps sinusoids") {
  const KernelSpec k = KernelSpec::laplace(0.5);
  const GridFunction c(1.0, 64, 2.5);
  const GridFunction lc = convolve_grid(k, c);
  for (std::size_t i = 0; i < lc.size(); ++i) CHECK(lc[i] == doctest::Approx(2.5).epsilon(1e-13));

  // dense-quadrature oracle of ∫ k_per(x - y) sin(2πy) dy
  const std::size_t n = 128;
  const GridFunction f = GridFunction::sample(1.0, n, [](double x) { return std::sin(2 * pi * x); });
  const GridFunction lf = convolve_grid(k, f);
  for (std::size_t i = 0; i < n; i += 9) {
    const double x = f.coordinate(i);
    const double ref = oracle::integrate(
        [&](double y) { return oracle::laplace1d(0.5, x - y) * std::sin(2 * pi * y); }, x - 40.0, x + 40.0, {x});
    CHECK(lf[i] == doctest::Approx(ref).epsilon(1e-10).scale(1.0));
  }
  const double amp = 1.0 / (1.0 + 0.25 * 4 * pi * pi);
  CHECK(amp == doctest::Approx(0.0920).epsilon(1e-3));
  CHECK(lf[n / 4] == doctest::Approx(amp).epsilon(1e-12));
}

TEST_CASE("convolve_grid of a spike gives kernel samples") {
  const double L = 2.0;
  const std::size_t n = 256;
  const double h = L / n;
  const KernelSpec k = KernelSpec::gaussian(4 * h);
  GridFunction spike(L, n);
  spike[0] = 1.0 / h;
  const GridFunction out = convolve_grid(k, spike);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(out[i] == doctest::Approx(periodized_kernel(k, out.coordinate(i), L)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("convolve_grid rejects kernels wider than half the domain") {
  const GridFunction f(1.0, 32, 1.0);
  CHECK_THROWS_WITH(convolve_grid(KernelSpec::gaussian(0.6), f), doctest::Contains("kernel does not fit domain"));
}

TEST_CASE("apply_inverse_laplace on constants and eigenfunctions") {
  const double alpha = 0.3;
  const GridFunction c(1.0, 32, -1.5);
  const GridFunction lc = apply_inverse_laplace(alpha, c);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(lc[i] == doctest::Approx(-1.5).epsilon(1e-13));
  const GridFunction s = GridFunction::sample(1.0, 32, [](double x) { return std::sin(2 * pi * x); });
  const GridFunction ls = apply_inverse_laplace(alpha, s);
  const double factor = 1 + alpha * alpha * 4 * pi * pi;
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(ls[i] == doctest::Approx(factor * s[i]).epsilon(1e-12).scale(1.0));
  CHECK_THROWS_WITH(apply_inverse_laplace(alpha, GridFunction(1.0, 6)),
                    doctest::Contains("grid too coarse for inverse operator"));
}

TEST_CASE("inverse operator round trip on low-frequency trigonometric polynomials") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (double alpha : {0.1, 0.5}) {
    const std::size_t n = 512;
    std::vector<double> a(n / 8), b(n / 8);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    const GridFunction f = GridFunction::sample(1.0, n, [&](double x) {
      double s = 0.0;
      for (std::size_t m = 0; m < n / 8; ++m) s += a[m] * std::cos(2 * pi * m * x) + b[m] * std::sin(2 * pi * m * x);
      return s;
    });
    const GridFunction back = apply_inverse_laplace(alpha, convolve_grid(KernelSpec::laplace(alpha), f));
    CHECK((back - f).l2_norm() / f.l2_norm() < 1e-6);
  }
}

TEST_CASE("rkhs inner product examples") {
  const GridFunction zero(1.0, 64);
  CHECK(rkhs_inner_product(0.5, zero, zero) == 0.0);
  const GridFunction s = GridFunction::sample(1.0, 64, [](double x) { return std::sin(2 * pi * x); });
  const double ref = 0.5 * (1 + 0.25 * 4 * pi * pi);
  CHECK(ref == doctest::Approx(5.4348).epsilon(1e-4));
  CHECK(rkhs_inner_product(0.5, s, s) == doctest::Approx(ref).epsilon(1e-12));
  CHECK_THROWS_AS(rkhs_inner_product(0.5, s, GridFunction(2.0, 64)), InvalidArgument);
}

TEST_CASE("reproducing property of the Laplace kernel section") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = [](double x) { return std::cos(2 * pi * x) + 0.3 * std::sin(6 * pi * x) + std::exp(std::sin(2 * pi * x)); };
  for (double alpha : {0.1, 0.5}) {
    const GridFunction gg = GridFunction::sample(1.0, 512, g);
    for (int t = 0; t < 10; ++t) {
      const double x0 = u(rng);
      const GridFunction K = kernel_section(KernelSpec::laplace(alpha), x0, 1.0, 512);
      CHECK(rkhs_inner_product(alpha, K, gg) == doctest::Approx(g(x0)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("kernel footprint is mass consistent") {
  GridFunction grid(3.0, 100);
  add_kernel_footprint(KernelSpec::laplace(0.07), 1.2345, 2.0, grid);
  CHECK(grid.integral() == doctest::Approx(2.0).epsilon(1e-14));
  GridFunction grid2(3.0, 100);
  add_kernel_footprint(KernelSpec::bspline(0.2, 4), 2.999, 1.0, grid2);
  CHECK(grid2.integral() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("1D Laplace potential closed form") {
  const KernelSpec k = KernelSpec::laplace(1.0);
  const PotentialValue p0 = interaction_potential(k, 0.0);
  CHECK(p0.value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p0.derivative == 0.0);
  const PotentialValue p1 = interaction_potential(k, 1.0);
  CHECK(p1.value == doctest::Approx(0.5 + 0.5 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(p1.value == doctest::Approx(0.683940).epsilon(1e-6));
  CHECK(p1.derivative == doctest::Approx(0.316060).epsilon(1e-6));
  CHECK_THROWS_AS(interaction_potential(k, -0.1), InvalidArgument);
}

TEST_CASE("tabulated potentials match closed forms") {
  for (const KernelSpec& k : {KernelSpec::laplace(0.4), KernelSpec::gaussian(0.3)}) {
    const PairPotential table(k, true);
    const PairPotential closed(k);
    for (double r : {0.0, 0.01, 0.2, 0.5, 1.3, 4.0, 30.0}) {
      CHECK(table(r).value == doctest::Approx(closed(r).value).epsilon(1e-12).scale(1.0));
      CHECK(table(r).derivative == doctest::Approx(closed(r).derivative).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("2D Laplace potential matches the exponential-integral form") {
  const double alpha = 0.25;
  const KernelSpec k = KernelSpec::laplace(alpha, 2);
  for (double r : {0.003, 0.05, 0.25, 0.9, 3.0, 7.0}) {
    const PotentialValue p = interaction_potential(k, r);
    CHECK(p.value == doctest::Approx(oracle::laplace2d_potential(alpha, r)).epsilon(1e-10).scale(1.0));
    CHECK(p.derivative == doctest::Approx(oracle::laplace2d_dpotential(alpha, r)).epsilon(1e-10));
  }
}

TEST_CASE("2D Gaussian potential far field") {
  const KernelSpec k = KernelSpec::gaussian(0.2, 2);
  for (double r : {0.1, 0.5, 2.0}) CHECK(interaction_potential(k, r).derivative == doctest::Approx(oracle::gaussian2d_dpotential(0.2, r)).epsilon(1e-13));
  CHECK(interaction_potential(k, 50.0).derivative == doctest::Approx(1 / (2 * pi * 50.0)).epsilon(1e-14));
  CHECK(interaction_potential(k, 50.0).value == doctest::Approx(std::log(50.0) / (2 * pi)).epsilon(1e-14));
}

TEST_CASE("B-spline potentials satisfy the radial Poisson equation") {
  for (int dim : {1, 2}) {
    const KernelSpec k = KernelSpec::bspline(0.6, 4, dim);
    for (double r : {0.1, 0.35, 0.55, 0.9}) {
      const double e = 1e-4;
      const auto V = [&](double x) { return interaction_potential(k, x).value; };
      const PotentialValue p = interaction_potential(k, r);
      CHECK((V(r + e) - V(r - e)) / (2 * e) == doctest::Approx(p.derivative).epsilon(1e-7));
      double lap = (V(r + e) - 2 * V(r) + V(r - e)) / (e * e);
      if (dim == 2) lap += p.derivative / r;
      CHECK(lap == doctest::Approx(eval_kernel(k, r)).epsilon(1e-5).scale(eval_kernel(k, 0.0)));
    }
  }
}
