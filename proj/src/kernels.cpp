#include "smoothpic/kernels.hpp"

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>
#include <boost/math/special_functions/erf.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "smoothpic/bspline.hpp"
#include "smoothpic/error.hpp"
#include "smoothpic/parallel.hpp"
#include "smoothpic/quadrature.hpp"

namespace smoothpic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPeriodizationTail = 1e-12;

// ∫₀^{q/2} u M_q(u) du for the centered cardinal B-spline of order q.
double bspline_radial_moment(int order) {
  static std::array<double, 10> cache = [] {
    std::array<double, 10> moments{};
    const auto& rule = gauss_legendre(20);
    for (int q = 2; q < 10; q += 2) {
      double sum = 0.0;
      for (int panel = 0; panel < q; ++panel) {
        const double a = 0.5 * panel;
        sum += integrate(rule, a, a + 0.5, [q](double u) { return u * cardinal_bspline(q - 1, u + 0.5 * q); });
      }
      moments[q] = sum;
    }
    return moments;
  }();
  return cache[order];
}

}  // namespace

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Laplace: return "laplace";
    case KernelFamily::Gaussian: return "gaussian";
    case KernelFamily::BSpline: return "bspline";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(const std::string& name) {
  if (name == "laplace") return KernelFamily::Laplace;
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "bspline") return KernelFamily::BSpline;
  throw InvalidArgument("unknown kernel family '" + name + "'");
}

void KernelSpec::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) throw InvalidArgument("kernel width must be positive");
  if (dim != 1 && dim != 2) throw InvalidArgument("kernel dimension must be 1 or 2");
  if (family == KernelFamily::BSpline && (order < 2 || order > 8 || order % 2 != 0))
    throw InvalidArgument("B-spline kernel order must be one of 2, 4, 6, 8");
}

double eval_kernel(const KernelSpec& kernel, double r) {
  const double a = std::abs(r);
  const double w = kernel.width;
  switch (kernel.family) {
    case KernelFamily::Laplace:
      return kernel.dim == 1 ? std::exp(-a / w) / (2.0 * w) : std::exp(-a / w) / (2.0 * kPi * w * w);
    case KernelFamily::Gaussian: {
      const double g = std::exp(-0.5 * (a / w) * (a / w));
      return kernel.dim == 1 ? g / (std::sqrt(2.0 * kPi) * w) : g / (2.0 * kPi * w * w);
    }
    case KernelFamily::BSpline: {
      const int q = kernel.order;
      const double s = 2.0 * w / q;
      const double m = cardinal_bspline(q - 1, a / s + 0.5 * q);
      return kernel.dim == 1 ? m / s : m / (2.0 * kPi * s * s * bspline_radial_moment(q));
    }
  }
  return 0.0;
}

double eval_kernel_derivative(const KernelSpec& kernel, double r) {
  if (kernel.dim != 1) throw InvalidArgument("kernel derivative is only available in 1D");
  if (r == 0.0) return 0.0;
  const double sign = r > 0.0 ? 1.0 : -1.0;
  const double w = kernel.width;
  switch (kernel.family) {
    case KernelFamily::Laplace: return -sign * eval_kernel(kernel, r) / w;
    case KernelFamily::Gaussian: return -r / (w * w) * eval_kernel(kernel, r);
    case KernelFamily::BSpline: {
      const int q = kernel.order;
      const double s = 2.0 * w / q;
      return sign * cardinal_bspline_derivative(q - 1, std::abs(r) / s + 0.5 * q) / (s * s);
    }
  }
  return 0.0;
}

double kernel_symbol(const KernelSpec& kernel, double kappa) {
  const double w = kernel.width;
  switch (kernel.family) {
    case KernelFamily::Laplace: return 1.0 / (1.0 + w * w * kappa * kappa);
    case KernelFamily::Gaussian: return std::exp(-0.5 * w * w * kappa * kappa);
    case KernelFamily::BSpline: {
      const double half = kappa * w / kernel.order;  // κs/2 with s = 2w/q
      const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
      return std::pow(sinc, kernel.order);
    }
  }
  return 1.0;
}

double tail_radius(const KernelSpec& kernel, double tail_mass) {
  const double w = kernel.width;
  const double log_inv = std::log(1.0 / tail_mass);
  switch (kernel.family) {
    case KernelFamily::Laplace: {
      if (kernel.dim == 1) return w * log_inv;
      // (1 + R/α) e^{-R/α} = tail
      double t = log_inv;
      for (int i = 0; i < 50; ++i) t = log_inv + std::log1p(t);
      return w * t;
    }
    case KernelFamily::Gaussian:
      if (kernel.dim == 1) return std::sqrt(2.0) * w * boost::math::erfc_inv(tail_mass);
      return w * std::sqrt(2.0 * log_inv);
    case KernelFamily::BSpline: return w;
  }
  return w;
}

double periodized_kernel(const KernelSpec& kernel, double r, double period) {
  const double reduced = r - period * std::round(r / period);
  const double reach = tail_radius(kernel, kPeriodizationTail);
  const int images = static_cast<int>(std::ceil(reach / period)) + 1;
  double sum = 0.0;
  for (int m = -images; m <= images; ++m) sum += eval_kernel(kernel, reduced + m * period);
  return sum;
}

// ---------------------------------------------------------------------------
// GridFunction

GridFunction::GridFunction(double domain_length, std::vector<double> values)
    : domain_length_(domain_length), values_(std::move(values)) {
  if (!(domain_length_ > 0.0)) throw InvalidArgument("grid domain length must be positive");
  if (values_.size() < 4) throw InvalidArgument("grid needs at least 4 samples");
}

GridFunction::GridFunction(double domain_length, std::size_t n, double fill)
    : GridFunction(domain_length, std::vector<double>(n, fill)) {}

GridFunction GridFunction::sample(double domain_length, std::size_t n, const std::function<double(double)>& f) {
  GridFunction g(domain_length, n);
  for (std::size_t i = 0; i < n; ++i) g.values_[i] = f(g.coordinate(i));
  return g;
}

bool GridFunction::same_grid(const GridFunction& other) const {
  return size() == other.size() && domain_length_ == other.domain_length_;
}

double GridFunction::integral() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return spacing() * sum;
}

double GridFunction::l2_norm() const {
  double sum = 0.0;
  for (double v : values_) sum += v * v;
  return std::sqrt(spacing() * sum);
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  if (!same_grid(other)) throw InvalidArgument("grid functions live on different grids");
  for (std::size_t i = 0; i < size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  if (!same_grid(other)) throw InvalidArgument("grid functions live on different grids");
  for (std::size_t i = 0; i < size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

// ---------------------------------------------------------------------------
// Grid operators

namespace {

double signed_mode(std::size_t m, std::size_t n) {
  return m <= n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
}

void require_fits(const KernelSpec& kernel, double domain_length) {
  kernel.validate();
  if (kernel.dim != 1) throw InvalidArgument("grid operators need a one-dimensional kernel");
  if (kernel.width > 0.5 * domain_length) throw Error("kernel does not fit domain");
}

}  // namespace

GridFunction convolve_grid(const KernelSpec& kernel, const GridFunction& f) {
  require_fits(kernel, f.domain_length());
  const std::size_t n = f.size();
  std::vector<std::complex<double>> in(n), spectrum(n), back(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = f[i];
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, in);
  const double base = 2.0 * kPi / f.domain_length();
  for (std::size_t m = 0; m < n; ++m) spectrum[m] *= kernel_symbol(kernel, base * signed_mode(m, n));
  fft.inv(back, spectrum);
  GridFunction out(f.domain_length(), n);
  for (std::size_t i = 0; i < n; ++i) out[i] = back[i].real();
  return out;
}

GridFunction apply_inverse_laplace(double alpha, const GridFunction& fbar) {
  if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  const std::size_t n = fbar.size();
  if (n < 8) throw InvalidArgument("grid too coarse for inverse operator");

  std::vector<std::complex<double>> in(n), spectrum(n), back(n);
  for (std::size_t i = 0; i < n; ++i) in[i] = fbar[i];
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, in);
  const double base = 2.0 * kPi / fbar.domain_length();
  for (std::size_t m = 0; m < n; ++m) {
    const double kappa = base * signed_mode(m, n);
    spectrum[m] *= 1.0 + alpha * alpha * kappa * kappa;
  }
  fft.inv(back, spectrum);
  GridFunction out(fbar.domain_length(), n);
  for (std::size_t i = 0; i < n; ++i) out[i] = back[i].real();
  return out;
}

double rkhs_inner_product(double alpha, const GridFunction& fbar, const GridFunction& gbar) {
  if (!fbar.same_grid(gbar)) throw InvalidArgument("rkhs_inner_product: grid functions live on different grids");
  const GridFunction lg = apply_inverse_laplace(alpha, gbar);
  double sum = 0.0;
  for (std::size_t i = 0; i < fbar.size(); ++i) sum += fbar[i] * lg[i];
  return fbar.spacing() * sum;
}

void add_kernel_footprint(const KernelSpec& kernel, double center, double weight, GridFunction& grid) {
  require_fits(kernel, grid.domain_length());
  const std::size_t n = grid.size();
  const double L = grid.domain_length();
  const double h = grid.spacing();
  double mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double k = periodized_kernel(kernel, grid.coordinate(j) - center, L);
    grid[j] += weight * k;
    mass += h * k;
  }
  const double wrapped = center - L * std::floor(center / L);
  const double cell = std::floor(wrapped / h);
  const double theta = wrapped / h - cell;
  const auto left = static_cast<std::size_t>(cell) % n;
  const auto right = (left + 1) % n;
  const double deficit = weight * (1.0 - mass) / h;
  grid[left] += deficit * (1.0 - theta);
  grid[right] += deficit * theta;
}

GridFunction kernel_section(const KernelSpec& kernel, double center, double domain_length, std::size_t n) {
  GridFunction out(domain_length, n);
  add_kernel_footprint(kernel, center, 1.0, out);
  return out;
}

}  // namespace smoothpic
