#include "ffedge/special.hpp"

#include "ffedge/fft.hpp"

#include "ffedge/errors.hpp"
#include "ffedge/quadrature.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>

namespace ffedge {

namespace {

template <class T>
T pi_t() {
  if constexpr (std::is_same_v<T, Real>) return pi_real();
  else return M_PI;
}

template <class T>
T eps_t(const PrecisionContext& ctx) {
  if constexpr (std::is_same_v<T, Real>) return ldexp(Real(1), -static_cast<int>(ctx.bits));
  else return std::numeric_limits<double>::epsilon() / 8;
}

long floor_mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

void DeformedBesselParams::validate() const {
  if (!(std::abs(alpha) <= 0.125)) throw ConfigError("deformed Bessel: |alpha| must be <= 1/8");
  if (!std::isfinite(t)) throw ConfigError("deformed Bessel: t must be finite");
}

std::size_t bessel_node_count(double t, long n_abs_max) {
  const std::size_t need = std::max<std::size_t>(2048, 8 * static_cast<std::size_t>(std::ceil(std::abs(t) + std::abs(n_abs_max))));
  std::size_t M = 2048;
  while (M < need) M *= 2;
  return M;
}

// acc += a * b
inline void fma1(double& acc, const double& a, const double& b) { acc += a * b; }
inline void fma1(Real& acc, const Real& a, const Real& b) {
  mpfr_fma(acc.backend().data(), a.backend().data(), b.backend().data(), acc.backend().data(), MPFR_RNDN);
}

template <class T>
DeformedBesselTable<T>::DeformedBesselTable(const T& t, const T& alpha, long n_min, long n_max,
                                            const PrecisionContext& ctx)
    : n_min_(n_min), n_max_(n_max) {
  using std::abs;
  using std::cos;
  using std::sin;
  if (n_max < n_min) throw ConfigError("DeformedBesselTable: empty index range");
  if (abs(alpha) > T(0.125)) throw ConfigError("deformed Bessel: |alpha| must be <= 1/8");
  const long nabs = std::max(std::abs(n_min), std::abs(n_max));
  nodes_ = bessel_node_count(to_double(t), nabs);
  if (nodes_ > ctx.max_nodes)
    throw NumericalError(NumericalFailure::budget_exceeded, "deformed Bessel needs more nodes than max_nodes");
  const long M = static_cast<long>(nodes_);
  const T pi = pi_t<T>();
  std::vector<T> re(M), im(M);
  for (long j = 0; j < M; ++j) {
    const T th = T(2) * pi * T(j) / T(M);
    const T phi = t * (sin(th) - alpha * sin(T(2) * th));
    re[j] = cos(phi);
    im[j] = sin(phi);
  }
  Fft<T>(nodes_).run(re, im, false);
  values_.resize(n_max - n_min + 1);
  for (long n = n_min; n <= n_max; ++n) values_[n - n_min] = re[floor_mod(n, M)] / T(M);
}

template <class T>
const T& DeformedBesselTable<T>::operator()(long n) const {
  if (n < n_min_ || n > n_max_) throw ConfigError("DeformedBesselTable: index outside table");
  return values_[n - n_min_];
}

template class DeformedBesselTable<double>;
template class DeformedBesselTable<Real>;

double deformed_bessel(const DeformedBesselParams& p, const PrecisionContext& ctx) {
  p.validate();
  return DeformedBesselTable<double>(p.t, p.alpha, p.n, p.n, ctx)(p.n);
}

template <class T>
WeightMomentTable<T>::WeightMomentTable(const T& tau, const T& alpha, long n_max, const PrecisionContext& ctx)
    : n_max_(n_max) {
  using std::abs;
  using std::cos;
  using std::exp;
  if (n_max < 0) throw ConfigError("WeightMomentTable: n_max must be >= 0");
  const T pi = pi_t<T>();
  const T eps = eps_t<T>(ctx);
  std::size_t M = 64;
  while (M < 2 * static_cast<std::size_t>(n_max + 1)) M *= 2;
  for (;; M *= 2) {
    if (M > ctx.max_nodes)
      throw NumericalError(NumericalFailure::budget_exceeded, "weight moments need more nodes than max_nodes");
    const long Ml = static_cast<long>(M);
    const long half = Ml / 2;
    std::vector<T> cr(Ml), f(half + 1);
    for (long r = 0; r < Ml; ++r) cr[r] = cos(T(2) * pi * T(r) / T(Ml));
    for (long j = 0; j <= half; ++j) f[j] = exp(tau * (cr[j] + alpha * cr[floor_mod(2 * j, Ml)]));
    auto moment = [&](long n) {
      T acc = 0;
      for (long j = 1; j < half; ++j) fma1(acc, f[j], cr[floor_mod(n * j, Ml)]);
      T s = f[0] + T(2) * acc + ((n % 2 == 0) ? f[half] : T(-f[half]));
      return T(s / T(Ml));
    };
    T c0 = moment(0);
    T nyquist = moment(half);
    if (abs(nyquist) > eps * abs(c0)) continue;
    nodes_ = M;
    values_.resize(n_max + 1);
    if (n_max < 8) {
      values_[0] = c0;
      for (long n = 1; n <= n_max; ++n) values_[n] = moment(n);
      return;
    }
    std::vector<T> re(Ml), im(Ml, T(0));
    for (long j = 0; j < Ml; ++j) re[j] = f[j <= half ? j : Ml - j];
    Fft<T>(M).run(re, im, false);
    for (long n = 0; n <= n_max; ++n) values_[n] = re[n] / T(Ml);
    return;
  }
}

template <class T>
const T& WeightMomentTable<T>::operator()(long n) const {
  const long a = std::abs(n);
  if (a > n_max_) throw ConfigError("WeightMomentTable: index outside table");
  return values_[a];
}

template class WeightMomentTable<double>;
template class WeightMomentTable<Real>;

long weight_moment_tail(const Real& tau, const Real& alpha, const Real& rel, long n_from, const PrecisionContext& ctx) {
  n_from = std::max(n_from, 1L);
  long span = n_from + static_cast<long>(std::ceil(M_E * std::abs(tau.convert_to<double>()) *
                                                   (1 + 2 * std::abs(alpha.convert_to<double>())))) + 64;
  for (int attempt = 0; attempt < 16; ++attempt, span *= 2) {
    WeightMomentTable<Real> m(tau, alpha, span + 1, ctx);
    for (long n = n_from; n + 1 <= span + 1; ++n)
      if (abs(m(n)) < rel * m(0) && abs(m(n + 1)) < rel * m(0)) return n;
  }
  throw NumericalError(NumericalFailure::budget_exceeded, "weight moments do not reach the requested tail");
}

Real weight_moment(long n, double R, double alpha, const PrecisionContext& ctx) {
  if (!(R > 0)) throw ConfigError("weight_moment: R must be positive");
  PrecisionScope scope(ctx.bits);
  return WeightMomentTable<Real>(Real(2 * R), Real(alpha), std::abs(n), ctx)(n);
}

void HigherAiryOrder::validate() const {
  if (m < 1) throw ConfigError("higher Airy order needs m >= 1");
}

HigherAiry::HigherAiry(HigherAiryOrder order, double s_min, double s_max, double tol) : order_(order) {
  order.validate();
  if (s_max < s_min) std::swap(s_min, s_max);
  const int q = order.order();
  const double theta = M_PI / (2.0 * q);
  c_ = std::cos(theta);
  sn_ = std::sin(theta);
  // growth rate of the integrand on the ray for the most negative s
  const double a = std::max(0.0, -s_min) * sn_;
  const double ustar = std::pow(a, 1.0 / (q - 1));
  const double peak = a > 0 ? a * ustar - std::pow(ustar, q) / q : 0.0;
  double U = 1;
  for (int it = 0; it < 100; ++it) U = std::pow(q * (50.0 + peak + a * U), 1.0 / q);
  cutoff_ = U;

  std::vector<double> probes;
  for (int i = 0; i <= 8; ++i) probes.push_back(s_min + (s_max - s_min) * i / 8.0);
  if (s_min < 0 && s_max > 0) probes.push_back(0.0);

  auto eval = [&](const QuadratureRule& r, double s) {
    double acc = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double u = r.nodes[i];
      acc += r.weights[i] * std::exp(-s * sn_ * u - std::pow(u, q) / q) * std::cos(s * c_ * u + theta);
    }
    return acc / M_PI;
  };
  for (std::size_t n = 32; n <= 8192; n *= 2) {
    auto r1 = gauss_legendre(n, 0, U);
    auto r2 = gauss_legendre(2 * n, 0, U);
    double worst = 0;
    for (double s : probes) worst = std::max(worst, std::abs(eval(r1, s) - eval(r2, s)));
    if (worst <= tol) {
      nodes_ = r1.nodes;
      weights_ = r1.weights;
      // store the integrand factors that do not depend on s
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        weights_[i] *= std::exp(-std::pow(nodes_[i], q) / q) / M_PI;
      return;
    }
  }
  throw NumericalError(NumericalFailure::non_convergence, "higher Airy ray quadrature did not converge");
}

double HigherAiry::operator()(double s) const {
  const double theta = M_PI / (2.0 * order_.order());
  double acc = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double u = nodes_[i];
    acc += weights_[i] * std::exp(-s * sn_ * u) * std::cos(s * c_ * u + theta);
  }
  return acc;
}

double higher_airy(double s, HigherAiryOrder order, const PrecisionContext& ctx) {
  return HigherAiry(order, s, s, std::max(ctx.rel_tol, 1e-15))(s);
}

AiryPair airy_maclaurin(double s) {
  PrecisionScope scope(320);
  const Real x(s);
  const Real x3 = x * x * x;
  const Real tiny = ldexp(Real(1), -330);
  Real f = 1, g = x, fp = 0, gp = 1;
  Real a = 1, b = x, d = x * x / 2, e = 1;
  fp = d;
  for (int k = 1; k < 2000; ++k) {
    a *= x3 / Real((3 * k - 1) * (3 * k));
    b *= x3 / Real((3 * k) * (3 * k + 1));
    e *= x3 / Real((3 * k) * (3 * k - 2));
    f += a;
    g += b;
    gp += e;
    if (k >= 2) {
      d *= x3 / Real((3 * k - 1) * (3 * k - 3));
      fp += d;
    }
    if (k > 4 && abs(a) + abs(b) + abs(d) + abs(e) < tiny * (abs(f) + abs(g) + abs(fp) + abs(gp))) break;
  }
  Real g23, g13;
  mpfr_gamma(g23.backend().data(), Real(Real(2) / 3).backend().data(), MPFR_RNDN);
  mpfr_gamma(g13.backend().data(), Real(Real(1) / 3).backend().data(), MPFR_RNDN);
  const Real c1 = 1 / (pow(Real(3), Real(2) / 3) * g23);
  const Real c2 = 1 / (pow(Real(3), Real(1) / 3) * g13);
  return {to_double(c1 * f - c2 * g), to_double(c1 * fp - c2 * gp)};
}

AiryScalingSample airy_scaling_check(double t, double s, double alpha, const PrecisionContext& ctx) {
  if (!(alpha >= 0 && alpha <= 0.125)) throw ConfigError("airy_scaling_check: alpha must lie in [0, 1/8]");
  if (!(t > 0)) throw ConfigError("airy_scaling_check: t must be positive");
  const bool higher = alpha >= 0.125;
  AiryScalingSample out;
  double centre;
  HigherAiryOrder order{higher ? 2 : 1};
  if (higher) {
    out.scale = std::pow(t / 8, 0.2);
    centre = 0.75 * t;
  } else {
    out.scale = std::cbrt(t * (1 - 8 * alpha) / 2);
    centre = t * (1 - 2 * alpha);
  }
  out.index = static_cast<long>(std::floor(centre + s * out.scale));
  out.s_effective = (out.index - centre) / out.scale;
  out.rescaled = out.scale * deformed_bessel({out.index, t, alpha}, ctx);
  HigherAiry ai(order, std::min(s, out.s_effective), std::max(s, out.s_effective));
  out.limit = ai(s);
  out.limit_effective = ai(out.s_effective);
  return out;
}

}  // namespace ffedge
