#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "smoothpic/error.hpp"
#include "smoothpic/kernels.hpp"
#include "smoothpic/quadrature.hpp"

namespace smoothpic {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kOuterTail = 1e-17;
constexpr int kGradedLevels = 48;

// Integral over [0, r] with geometric refinement toward the origin, for
// integrands carrying a ln(s) factor.
template <class F>
double integrate_graded(double r, F&& f) {
  const auto& rule = gauss_legendre(20);
  double sum = 0.0;
  double hi = r;
  for (int level = 0; level < kGradedLevels; ++level) {
    const double lo = 0.5 * hi;
    sum += integrate(rule, lo, hi, f);
    hi = lo;
  }
  return sum;
}

// Ein(x) = ∫₀^x (1 - e^{-t})/t dt = E1(x) + γ + ln x.
double entire_exponential_integral(double x) {
  if (x >= 1.0) return boost::math::expint(1, x) + kEulerGamma + std::log(x);
  double term = x;
  double sum = x;
  for (int k = 2; k < 40; ++k) {
    term *= -x / k;
    sum += term / k;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

PotentialValue laplace_1d(double alpha, double r) {
  const double e = std::exp(-r / alpha);
  return {0.5 * r + 0.5 * alpha * e, 0.5 * (1.0 - e)};
}

PotentialValue gaussian_1d(double sigma, double r) {
  const double erf = std::erf(r / (std::sqrt(2.0) * sigma));
  const double k = std::exp(-0.5 * (r / sigma) * (r / sigma)) / (std::sqrt(2.0 * kPi) * sigma);
  return {0.5 * r * erf + sigma * sigma * k, 0.5 * erf};
}

PotentialValue gaussian_2d(double sigma, double r) {
  const double x = 0.5 * (r / sigma) * (r / sigma);
  if (r == 0.0) return {(std::log(2.0 * sigma * sigma) - kEulerGamma) / (4.0 * kPi), 0.0};
  // ln r + E1(x)/2 = (ln 2σ² - γ + Ein(x))/2
  const double value = (std::log(2.0 * sigma * sigma) - kEulerGamma + entire_exponential_integral(x)) / (4.0 * kPi);
  return {value, -std::expm1(-x) / (2.0 * kPi * r)};
}

}  // namespace

PairPotential::PairPotential(const KernelSpec& kernel, bool force_quadrature) : kernel_(kernel) {
  kernel_.validate();
  const bool has_closed_form = (kernel_.dim == 1 && kernel_.family != KernelFamily::BSpline) ||
                               (kernel_.dim == 2 && kernel_.family == KernelFamily::Gaussian);
  closed_form_ = has_closed_form && !force_quadrature;
  if (closed_form_) return;

  switch (kernel_.family) {
    case KernelFamily::Laplace: panel_ = 0.5 * kernel_.width; break;
    case KernelFamily::Gaussian: panel_ = 0.5 * kernel_.width; break;
    case KernelFamily::BSpline: panel_ = kernel_.width / kernel_.order; break;
  }
  const double reach = kernel_.family == KernelFamily::BSpline ? kernel_.width : tail_radius(kernel_, kOuterTail);
  const auto panels = static_cast<std::size_t>(std::ceil(reach / panel_ - 1e-9));
  outer_radius_ = panel_ * static_cast<double>(panels);

  const auto& rule = gauss_legendre(64);
  const bool two_d = kernel_.dim == 2;
  auto density = [&](double s) { return two_d ? 2.0 * kPi * s * eval_kernel(kernel_, s) : eval_kernel(kernel_, s); };
  auto moment = [&](double s) {
    return two_d ? (s > 0.0 ? s * std::log(s) * eval_kernel(kernel_, s) : 0.0) : s * eval_kernel(kernel_, s);
  };

  mass_.assign(panels + 1, 0.0);
  tail_.assign(panels + 1, 0.0);
  for (std::size_t i = 0; i < panels; ++i) {
    const double a = panel_ * static_cast<double>(i);
    mass_[i + 1] = mass_[i] + integrate(rule, a, a + panel_, density);
  }
  for (std::size_t i = panels; i-- > 0;) {
    const double a = panel_ * static_cast<double>(i);
    const double piece = (two_d && i == 0) ? integrate_graded(panel_, moment) : integrate(rule, a, a + panel_, moment);
    tail_[i] = tail_[i + 1] + piece;
  }
}

PotentialValue PairPotential::operator()(double r) const {
  if (!(r >= 0.0)) throw InvalidArgument("pair potential needs a non-negative separation");
  if (!closed_form_) return tabulated(r);
  if (kernel_.dim == 2) return gaussian_2d(kernel_.width, r);
  return kernel_.family == KernelFamily::Laplace ? laplace_1d(kernel_.width, r) : gaussian_1d(kernel_.width, r);
}

PotentialValue PairPotential::tabulated(double r) const {
  const bool two_d = kernel_.dim == 2;
  if (r >= outer_radius_) {
    if (two_d) return {std::log(r) / (2.0 * kPi), 1.0 / (2.0 * kPi * r)};
    return {0.5 * r, 0.5};
  }
  const auto i = static_cast<std::size_t>(r / panel_);
  const double a = panel_ * static_cast<double>(i);
  const auto& rule = gauss_legendre(64);
  double mass = mass_[i];
  double tail = tail_[i];
  if (r > a) {
    if (two_d) {
      auto density = [&](double s) { return 2.0 * kPi * s * eval_kernel(kernel_, s); };
      auto moment = [&](double s) { return s > 0.0 ? s * std::log(s) * eval_kernel(kernel_, s) : 0.0; };
      mass += integrate(rule, a, r, density);
      tail -= i == 0 ? integrate_graded(r, moment) : integrate(rule, a, r, moment);
    } else {
      auto density = [&](double s) { return eval_kernel(kernel_, s); };
      auto moment = [&](double s) { return s * eval_kernel(kernel_, s); };
      mass += integrate(rule, a, r, density);
      tail -= integrate(rule, a, r, moment);
    }
  }
  if (two_d) {
    if (r == 0.0) return {tail, 0.0};
    return {mass * std::log(r) / (2.0 * kPi) + tail, mass / (2.0 * kPi * r)};
  }
  return {r * mass + tail, mass};
}

const PairPotential& pair_potential(const KernelSpec& kernel) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, int, int>, std::unique_ptr<PairPotential>> registry;
  const auto key = std::make_tuple(static_cast<int>(kernel.family), kernel.width, kernel.order, kernel.dim);
  std::lock_guard lock(mutex);
  auto& slot = registry[key];
  if (!slot) slot = std::make_unique<PairPotential>(kernel);
  return *slot;
}

PotentialValue interaction_potential(const KernelSpec& kernel, double r) {
  if (!(r >= 0.0)) throw InvalidArgument("interaction_potential: negative separation");
  return pair_potential(kernel)(r);
}

}  // namespace smoothpic
