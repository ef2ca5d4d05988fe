#include <algorithm>
#include <array>
#include <cmath>

#include "smoothpic/bspline.hpp"
#include "smoothpic/error.hpp"
#include "smoothpic/gempic.hpp"
#include "smoothpic/parallel.hpp"
#include "smoothpic/quadrature.hpp"

namespace smoothpic {
namespace {

constexpr int kStencil = 6;
constexpr double kBuildTail = 1e-16;

int wrap(int j, int n) {
  j %= n;
  return j < 0 ? j + n : j;
}

// Periodized unfiltered spline of degree q anchored at cell 0.
double periodic_spline(int q, double y, double h, int n) {
  double u = y / h;
  u -= n * std::floor(u / n);
  return cardinal_bspline(q, u);
}

// Breakpoints of y' ↦ N(y') k(y - y') inside the window around y.
std::vector<double> breakpoints(const KernelSpec& kernel, double y, double reach, double h) {
  std::vector<double> pts = {y - reach, y, y + reach};
  for (double knot = std::ceil((y - reach) / h) * h; knot < y + reach; knot += h) pts.push_back(knot);
  if (kernel.family == KernelFamily::BSpline) {
    const double s = 2.0 * kernel.width / kernel.order;
    for (int i = 1; i < kernel.order / 2; ++i) {
      pts.push_back(y - i * s);
      pts.push_back(y + i * s);
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (p < y - reach || p > y + reach) continue;
    if (out.empty() || p - out.back() > 1e-14 * std::max(1.0, std::abs(p))) out.push_back(p);
  }
  return out;
}

struct Samples {
  double phi0 = 0.0;
  double phi1 = 0.0;
  double dphi0 = 0.0;
};

Samples filtered_samples(const KernelSpec& kernel, int p, double h, int n, double y, double reach) {
  const auto& rule = gauss_legendre(20);
  const auto pts = breakpoints(kernel, y, reach, h);
  const double panel_cap = kernel.family == KernelFamily::BSpline ? 1e300 : 2.0 * kernel.width;
  const double n_at_y = periodic_spline(p, y, h, n);
  Samples s;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    double mid = 0.5 * (a + b) / h;
    mid -= n * std::floor(mid / n);
    const int cell = static_cast<int>(mid);
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / panel_cap)));
    const double step = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k) {
      const double lo = a + k * step, hi = lo + step;
      if (cell <= p) {
        s.phi0 += integrate(rule, lo, hi, [&](double z) { return periodic_spline(p, z, h, n) * eval_kernel(kernel, y - z); });
      }
      if (cell <= p - 1) {
        s.phi1 += integrate(rule, lo, hi, [&](double z) { return periodic_spline(p - 1, z, h, n) * eval_kernel(kernel, y - z); });
      }
      s.dphi0 += integrate(rule, lo, hi, [&](double z) {
        return (periodic_spline(p, z, h, n) - n_at_y) * eval_kernel_derivative(kernel, y - z);
      });
    }
  }
  return s;
}

// Lagrange weights on integer nodes start..start+5 at u.
std::array<double, kStencil> lagrange_weights(double u, int start) {
  std::array<double, kStencil> w{};
  for (int i = 0; i < kStencil; ++i) {
    double num = 1.0, den = 1.0;
    for (int k = 0; k < kStencil; ++k) {
      if (k == i) continue;
      num *= u - (start + k);
      den *= static_cast<double>(i - k);
    }
    w[i] = num / den;
  }
  return w;
}

std::vector<int> active_cells(const std::vector<double>& table, int n, int m) {
  std::vector<int> active;
  for (int d = 0; d < n; ++d) {
    bool nonzero = false;
    for (int k = 0; k < m && !nonzero; ++k) nonzero = table[d * m + k] != 0.0;
    if (nonzero) active.push_back(d);
  }
  return active;
}

}  // namespace

FilteredBasisCache::FilteredBasisCache(const SplineComplex& complex) : complex_(complex) {}

FilteredBasisCache FilteredBasisCache::unfiltered(const SplineComplex& complex) { return FilteredBasisCache(complex); }

FilteredBasisCache::FilteredBasisCache(const SplineComplex& complex, const KernelSpec& kernel, int resolution)
    : complex_(complex), kernel_(kernel), resolution_(resolution) {
  kernel.validate();
  if (kernel.dim != 1) throw InvalidArgument("filtered basis needs a one-dimensional kernel");
  if (kernel.width > 0.5 * complex.domain_length()) throw Error("kernel does not fit domain");
  if (resolution < kStencil) throw InvalidArgument("cache resolution must be at least 6 samples per cell");

  const int n = complex.n_cells();
  const int p = complex.degree();
  const int m = resolution;
  const double h = complex.spacing();
  const double reach = tail_radius(kernel, kBuildTail);
  const std::size_t total = static_cast<std::size_t>(n) * m;
  phi0_.assign(total, 0.0);
  phi1_.assign(total, 0.0);
  dphi0_.assign(total, 0.0);
  parallel_for(total, [&](std::size_t k) {
    const double y = (static_cast<double>(k) + 0.5) * h / m;
    const Samples s = filtered_samples(kernel, p, h, n, y, reach);
    phi0_[k] = s.phi0;
    phi1_[k] = s.phi1;
    dphi0_[k] = s.dphi0;
  });

  for (int k = 0; k < m; ++k) {
    double sum0 = 0.0, sum1 = 0.0;
    for (int d = 0; d < n; ++d) {
      sum0 += phi0_[d * m + k];
      sum1 += phi1_[d * m + k];
    }
    if (!(std::abs(sum0 - 1.0) < 1e-6) || !(std::abs(sum1 - 1.0) < 1e-6))
      throw Error("filtered basis quadrature did not converge");
    for (int d = 0; d < n; ++d) {
      phi0_[d * m + k] /= sum0;
      phi1_[d * m + k] /= sum1;
    }
  }
  active0_ = active_cells(phi0_, n, m);
  active1_ = active_cells(phi1_, n, m);
  active_d0_ = active_cells(dphi0_, n, m);
}

FilteredBasisCache build_filtered_basis(const SplineComplex& complex, const KernelSpec& kernel, int resolution) {
  return FilteredBasisCache(complex, kernel, resolution);
}

void FilteredBasisCache::evaluate_table(const std::vector<double>& table, const std::vector<int>& active, double x,
                                        BasisStencil& out) const {
  const int n = complex_.n_cells();
  const int m = resolution_;
  int cell;
  double t;
  complex_.locate(x, cell, t);
  const double u = t * m - 0.5;
  const int start = std::clamp(static_cast<int>(std::floor(u)) - 2, 0, m - kStencil);
  const auto w = lagrange_weights(u, start);
  out.index.clear();
  out.value.clear();
  for (int d : active) {
    const double* row = table.data() + static_cast<std::size_t>(d) * m + start;
    double v = 0.0;
    for (int i = 0; i < kStencil; ++i) v += w[i] * row[i];
    out.index.push_back(wrap(cell - d, n));
    out.value.push_back(v);
  }
}

void FilteredBasisCache::evaluate(int ell, double x, BasisStencil& out) const {
  if (ell != 0 && ell != 1) throw InvalidArgument("form degree must be 0 or 1");
  if (filtered()) {
    evaluate_table(ell == 0 ? phi0_ : phi1_, ell == 0 ? active0_ : active1_, x, out);
    return;
  }
  const int n = complex_.n_cells();
  const int q = complex_.space_degree(ell);
  int cell;
  double t;
  complex_.locate(x, cell, t);
  std::array<double, kMaxSplineDegree + 1> vals{};
  cardinal_bspline_cell_values(q, t, std::span<double>(vals.data(), q + 1));
  out.index.resize(q + 1);
  out.value.resize(q + 1);
  for (int r = 0; r <= q; ++r) {
    out.index[r] = wrap(cell + r - q, n);
    out.value[r] = vals[r];
  }
}

double FilteredBasisCache::value(int ell, int j, double x) const {
  BasisStencil s;
  evaluate(ell, x, s);
  double v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.index[i] == j) v += s.value[i];
  return v;
}

double FilteredBasisCache::derivative(int j, double x) const {
  if (!filtered()) return complex_.basis_derivative(j, x);
  BasisStencil s;
  evaluate_table(dphi0_, active_d0_, x, s);
  double v = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.index[i] == j) v += s.value[i];
  return v;
}

}  // namespace smoothpic
