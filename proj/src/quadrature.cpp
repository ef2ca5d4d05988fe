#include "smoothpic/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include "smoothpic/error.hpp"

namespace smoothpic {
namespace {

// Boost stores the non-negative half of the abscissae; unfold to [-1, 1].
template <int N>
QuadratureRule unfold() {
  using Rule = boost::math::quadrature::gauss<double, N>;
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  QuadratureRule rule;
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    rule.nodes.push_back(-x[i]);
    rule.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    rule.nodes.push_back(x[i]);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

}  // namespace

const QuadratureRule& gauss_legendre(int points) {
  static const QuadratureRule r8 = unfold<8>();
  static const QuadratureRule r16 = unfold<16>();
  static const QuadratureRule r20 = unfold<20>();
  static const QuadratureRule r32 = unfold<32>();
  static const QuadratureRule r64 = unfold<64>();
  switch (points) {
    case 8: return r8;
    case 16: return r16;
    case 20: return r20;
    case 32: return r32;
    case 64: return r64;
    default: throw InvalidArgument("unsupported Gauss-Legendre rule size " + std::to_string(points));
  }
}

}  // namespace smoothpic
