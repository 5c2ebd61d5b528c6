#include "ffedge/quadrature.hpp"

#include <cmath>

namespace ffedge {

QuadratureRule gauss_legendre(std::size_t n, double a, double b) {
  if (n == 0) throw ConfigError("gauss_legendre: n must be positive");
  if (!(a <= b)) throw ConfigError("gauss_legendre: need a <= b");
  QuadratureRule rule;
  rule.domain = {a, b};
  if (a == b) return rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Root i of P_n, counted from x = 1 downwards.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        // refresh derivative at the converged root
        p0 = 1;
        p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        break;
      }
    }
    double w = 2.0 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = mid;
  return rule;
}

}  // namespace ffedge
