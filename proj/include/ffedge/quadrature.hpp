#pragma once

#include "ffedge/complex.hpp"
#include "ffedge/errors.hpp"
#include "ffedge/precision.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

namespace ffedge {

struct Interval {
  double a = 0;
  double b = 0;
  bool semi_infinite() const { return std::isinf(b); }
};

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Interval domain;

  std::size_t size() const { return nodes.size(); }

  template <class F>
  double integrate(F&& f) const {
    double s = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Gauss-Legendre on [a,b]; a == b gives an empty rule (integral 0).
QuadratureRule gauss_legendre(std::size_t n, double a, double b);

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }
inline double magnitude(const Real& x) { return std::abs(to_double(x)); }
template <class T>
double magnitude(const Cplx<T>& z) { return to_double(abs(z)); }

inline double divided(double v, std::size_t n) { return v / static_cast<double>(n); }
inline std::complex<double> divided(const std::complex<double>& v, std::size_t n) {
  return v / static_cast<double>(n);
}
inline Real divided(const Real& v, std::size_t n) { return v / Real(n); }
template <class T>
Cplx<T> divided(const Cplx<T>& v, std::size_t n) { return v / T(n); }

template <class T>
T pi_of() {
  if constexpr (std::is_same_v<T, Real>) return pi_real();
  else return T(M_PI);
}

}  // namespace detail

// (1/2pi) * integral of f over [-pi, pi]. Starts with n_nodes equispaced nodes and
// doubles (reusing previous nodes) until successive means agree to ctx.rel_tol
// relative to the mean absolute value of the integrand.
template <class T, class F>
auto periodic_trapezoid(F&& f, std::size_t n_nodes, const PrecisionContext& ctx) {
  using V = decltype(f(T{}));
  if (n_nodes < 4) throw ConfigError("periodic_trapezoid: need at least 4 nodes");
  const T pi = detail::pi_of<T>();
  std::size_t n = n_nodes;
  V sum{};
  double abs_sum = 0;
  for (std::size_t j = 0; j < n; ++j) {
    V v = f(-pi + T(2) * pi * T(j) / T(n));
    abs_sum += detail::magnitude(v);
    sum += v;
  }
  V mean = detail::divided(sum, n);
  while (2 * n <= ctx.max_nodes) {
    V mid{};
    for (std::size_t j = 0; j < n; ++j) {
      V v = f(-pi + T(2 * j + 1) * pi / T(n));
      abs_sum += detail::magnitude(v);
      mid += v;
    }
    sum += mid;
    n *= 2;
    V next = detail::divided(sum, n);
    double scale = abs_sum / n;
    double diff = detail::magnitude(next - mean);
    mean = next;
    if (diff <= ctx.rel_tol * scale || scale == 0) return mean;
  }
  throw NumericalError(NumericalFailure::budget_exceeded,
                       "periodic_trapezoid did not converge within max_nodes");
}

}  // namespace ffedge
