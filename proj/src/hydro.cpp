#include "ffedge/hydro.hpp"

#include "ffedge/errors.hpp"
#include "ffedge/quadrature.hpp"

#include <cmath>
#include <limits>

namespace ffedge {

namespace {

void check_domain(double lambda, double alpha) {
  if (!(lambda > 0) || !std::isfinite(lambda)) throw ConfigError("hydro: lambda must be positive");
  if (!(alpha >= 0 && alpha <= 0.125)) throw ConfigError("hydro: alpha must lie in [0, 1/8]");
}

}  // namespace

double u_of_lambda(double lambda, double alpha) {
  check_domain(lambda, alpha);
  const double lc = 1 - 2 * alpha;
  if (lambda >= lc) return 0;
  const double disc = (1 + 4 * alpha) * (1 + 4 * alpha) - 24 * alpha * lambda;
  // (-1 + 8a + sqrt(D)) / (12 a), rationalised so that alpha = 0 is regular
  const double u2 = 2 * (lc - lambda) / (std::sqrt(disc) + 1 - 8 * alpha);
  return std::sqrt(std::min(1.0, std::max(0.0, u2)));
}

HydroParams::HydroParams(double lambda, double alpha) : lambda_(lambda), alpha_(alpha) {
  check_domain(lambda, alpha);
  u_ = u_of_lambda(lambda, alpha);
  k_c_ = std::acos(std::max(-1.0, std::min(1.0, 2 * u_ * u_ - 1)));
}

double HydroParams::k_max() const { return above_critical() ? M_PI : k_c_; }

double upsilon(double k, const HydroParams& h) {
  if (!(k >= -1e-12 && k <= h.k_max() + 1e-12)) throw ConfigError("upsilon: k outside the valid range");
  k = std::max(0.0, std::min(k, h.k_max()));
  const double a = h.alpha();
  const double c = std::cos(k);
  if (h.above_critical()) return h.lambda() + c + 2 * a * std::cos(2 * k);
  const double ckc = std::cos(h.k_c());
  return (1 + 2 * a * (2 * c + ckc - 1)) * std::sqrt(std::max(0.0, (1 + c) * (c - ckc)));
}

double upsilon_inverse(double X, const HydroParams& h, double rel_tol) {
  double lo = 0, hi = h.k_max();
  double flo = upsilon(lo, h), fhi = upsilon(hi, h);
  if (X > flo || X < fhi)
    throw NumericalError(NumericalFailure::out_of_support, "upsilon_inverse: X outside the fluctuating support");
  if (X == flo) return lo;
  if (X == fhi) return hi;
  for (int it = 0; it < 200 && hi - lo > rel_tol * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = upsilon(mid, h);
    const double slack = 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(flo));
    if (fm > flo + slack || fm < fhi - slack) throw NumericalError(NumericalFailure::non_convergence, "upsilon is not monotone");
    if (fm > X) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

Region classify(double X, const HydroParams& h) {
  const double ax = std::abs(X);
  if (ax > upsilon(0, h)) return Region::frozen_empty;
  if (h.lambda() > h.lambda_c() && ax < upsilon(M_PI, h)) return Region::frozen_full;
  return Region::fluctuating;
}

double density(double X, const HydroParams& h) {
  switch (classify(X, h)) {
    case Region::frozen_empty: return 0;
    case Region::frozen_full: return 1;
    case Region::fluctuating: break;
  }
  return upsilon_inverse(std::abs(X), h) / M_PI;
}

DensityProfile density_profile(const std::vector<double>& X, const HydroParams& h) {
  DensityProfile p;
  p.X = X;
  for (double x : X) {
    p.region.push_back(classify(x, h));
    p.rho.push_back(density(x, h));
  }
  return p;
}

double free_energy(double lambda, double alpha, const PrecisionContext& ctx) {
  check_domain(lambda, alpha);
  const double lc = 1 - 2 * alpha;
  if (lambda >= lc) return 0;
  const double d = lc - lambda;
  // s = lc - d tau^2 removes the square-root endpoint behaviour at alpha = 1/8
  auto integrand = [&](double tau) {
    const double s = lc - d * tau * tau;
    const double u = u_of_lambda(s, alpha);
    return d * (1 - tau * tau) * (-std::log1p(-u * u)) * 2 * d * tau;
  };
  const double tol = std::max(ctx.rel_tol, 1e-14);
  double prev = gauss_legendre(32, 0, 1).integrate(integrand);
  for (std::size_t n = 64; n <= 8192; n *= 2) {
    double next = gauss_legendre(n, 0, 1).integrate(integrand);
    if (std::abs(next - prev) <= tol * std::abs(next)) return next;
    prev = next;
  }
  throw NumericalError(NumericalFailure::non_convergence, "free energy quadrature did not converge");
}

EdgeCurvature edge_curvature(const HydroParams& h) {
  EdgeCurvature out;
  out.upsilon0 = upsilon(0, h);
  if (h.above_critical()) {
    out.upsilon2 = -1 - 8 * h.alpha();
    return out;
  }
  auto second = [&](double step) {
    return (-2 * upsilon(2 * step, h) + 32 * upsilon(step, h) - 30 * out.upsilon0) / (12 * step * step);
  };
  const double step = std::min(1e-2, h.k_c() / 8);
  const double a = second(step), b = second(step / 2);
  if (std::abs(a - b) > 1e-6 * std::abs(b))
    throw NumericalError(NumericalFailure::non_convergence, "edge curvature differences disagree");
  if (std::abs(b) < 1e-10) throw NumericalError(NumericalFailure::degenerate_curvature, "vanishing edge curvature");
  out.upsilon2 = b;
  return out;
}

}  // namespace ffedge
