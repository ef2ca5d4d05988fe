#pragma once

#include <cstddef>
#include <vector>

namespace smoothpic {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// Cached Gauss-Legendre rules. Supported point counts: 8, 16, 20, 32, 64.
const QuadratureRule& gauss_legendre(int points);

/// Integrates f over [a, b] with the given rule.
template <class F>
double integrate(const QuadratureRule& rule, double a, double b, F&& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

}  // namespace smoothpic
