#include "ffedge/opuc.hpp"

#include "ffedge/errors.hpp"
#include "ffedge/hydro.hpp"
#include "ffedge/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ffedge {

namespace {

Real sign_pow(long n) { return (n % 2 == 0) ? Real(1) : Real(-1); }

CplxR horner(const std::vector<Real>& p, const CplxR& z) {
  CplxR acc(Real(0), Real(0));
  for (std::size_t j = p.size(); j-- > 0;) acc = acc * z + CplxR(p[j], Real(0));
  return acc;
}

CplxR horner_reversed(const std::vector<Real>& p, const CplxR& z) {
  CplxR acc(Real(0), Real(0));
  for (std::size_t j = 0; j < p.size(); ++j) acc = acc * z + CplxR(p[j], Real(0));
  return acc;
}

void require_degree(const VerblunskySequence& seq, std::size_t n) {
  if (seq.nmax() < n) throw ConfigError("Verblunsky sequence does not cover degree " + std::to_string(n));
}

}  // namespace

void WeightSpec::validate() const {
  if (!(R > 0) || !std::isfinite(R)) throw ConfigError("weight: R must be positive");
  if (!(std::abs(alpha) <= 0.125)) throw ConfigError("weight: |alpha| must be <= 1/8");
}

const char* to_string(VerblunskySource s) {
  return s == VerblunskySource::determinant_ratio ? "determinant-ratio" : "recursion";
}

Real VerblunskySequence::alpha_coef(long n) const {
  if (n == -1) return Real(-1);
  if (n < -1) return Real(0);
  if (static_cast<std::size_t>(n + 1) > nmax()) throw ConfigError("alpha_coef: index beyond the sequence");
  return sign_pow(n) * u[n + 1];
}

MatR toeplitz_matrix(std::size_t n, const WeightSpec& w, const PrecisionContext& ctx) {
  w.validate();
  WeightMomentTable<Real> c(Real(2 * w.R), Real(w.alpha), static_cast<long>(n), ctx);
  MatR t(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) t(j, l) = c(static_cast<long>(j) - static_cast<long>(l));
  return t;
}

Real toeplitz_det(std::size_t n, const WeightSpec& w, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.bits);
  if (n == 0) return Real(1);
  MatR t = toeplitz_matrix(n, w, ctx);
  checked_inverse(t, ctx.rel_tol, "toeplitz_det");
  return determinant(t);
}

Real dpii_residual(const VerblunskySequence& seq, std::size_t N) {
  if (N < 2 || N + 2 > seq.nmax()) throw ConfigError("dPII residual needs 2 <= N <= nmax - 2");
  const auto& u = seq.u;
  const Real R(seq.weight.R), a(seq.weight.alpha);
  const Real lhs = Real(N) * u[N] / (R * (1 - u[N] * u[N]));
  const Real s = u[N - 1] + u[N + 1];
  const Real rhs = s - 2 * a * (u[N - 2] * (1 - u[N - 1] * u[N - 1]) - u[N] * s * s + u[N + 2] * (1 - u[N + 1] * u[N + 1]));
  return lhs - rhs;
}

VerblunskySequence verblunsky(std::size_t nmax, const WeightSpec& w, const PrecisionContext& ctx,
                              VerblunskySource source) {
  w.validate();
  if (nmax < 2) throw ConfigError("verblunsky: nmax must be >= 2");
  PrecisionScope scope(ctx.bits);
  VerblunskySequence seq;
  seq.weight = w;
  seq.source = source;
  seq.bits = ctx.bits;
  seq.u.assign(nmax + 1, Real(0));
  seq.dets.assign(nmax + 1, Real(0));
  seq.u[0] = 1;
  seq.dets[0] = 1;
  WeightMomentTable<Real> c(Real(2 * w.R), Real(w.alpha), static_cast<long>(nmax) + 1, ctx);

  if (source == VerblunskySource::determinant_ratio) {
    MatR t(nmax, nmax), shifted(nmax, nmax);
    for (std::size_t j = 0; j < nmax; ++j)
      for (std::size_t l = 0; l < nmax; ++l) {
        const long d = static_cast<long>(j) - static_cast<long>(l);
        t(j, l) = c(d);
        shifted(j, l) = c(d + 1);
      }
    // leading principal minors of the positive definite moment matrix
    Eigen::LLT<MatR> llt(t);
    if (llt.info() != Eigen::Success)
      throw NumericalError(NumericalFailure::precision_insufficient, "moment matrix not numerically positive definite");
    const MatR lower = llt.matrixL();
    for (std::size_t k = 1; k <= nmax; ++k) seq.dets[k] = seq.dets[k - 1] * lower(k - 1, k - 1) * lower(k - 1, k - 1);
    for (std::size_t n = 1; n <= nmax; ++n) seq.u[n] = determinant(MatR(shifted.topLeftCorner(n, n))) / seq.dets[n];
  } else {
    std::vector<Real> phi{Real(1)};
    Real norm2 = c(0);
    for (std::size_t n = 0; n < nmax; ++n) {
      seq.dets[n + 1] = seq.dets[n] * norm2;
      Real acc = 0;
      for (std::size_t j = 0; j <= n; ++j) acc += phi[j] * c(static_cast<long>(j) + 1);
      const Real a = acc / norm2;
      seq.u[n + 1] = sign_pow(static_cast<long>(n)) * a;
      std::vector<Real> next(n + 2, Real(0));
      for (std::size_t j = 0; j <= n + 1; ++j) {
        if (j >= 1) next[j] += phi[j - 1];
        if (j <= n) next[j] -= a * phi[n - j];
      }
      phi = std::move(next);
      norm2 *= 1 - a * a;
    }
  }

  for (std::size_t n = 1; n <= nmax; ++n)
    if (!(abs(seq.u[n]) < 1))
      throw NumericalError(NumericalFailure::residual_blowup, "Verblunsky coefficient with |u| >= 1 at n = " + std::to_string(n));
  for (std::size_t n = 0; n + 2 <= nmax; ++n) {
    const Real r = 1 - seq.u[n + 1] * seq.u[n + 1] - seq.dets[n + 2] * seq.dets[n] / (seq.dets[n + 1] * seq.dets[n + 1]);
    seq.rho_check = std::max(seq.rho_check, std::abs(to_double(r)));
  }
  seq.residuals.assign(nmax + 1, 0.0);
  for (std::size_t N = 2; N + 2 <= nmax; ++N) {
    seq.residuals[N] = std::abs(to_double(dpii_residual(seq, N)));
    seq.max_residual = std::max(seq.max_residual, seq.residuals[N]);
  }
  if (seq.max_residual > ctx.rel_tol || seq.rho_check > ctx.rel_tol)
    throw NumericalError(NumericalFailure::residual_blowup,
                         "Verblunsky residuals exceed tolerance (dPII " + sci(seq.max_residual) +
                             ", rho " + sci(seq.rho_check) + ")");
  return seq;
}

std::vector<std::vector<Real>> poly_coefficients(std::size_t lmax, const VerblunskySequence& seq) {
  require_degree(seq, lmax);
  PrecisionScope scope(seq.bits);
  std::vector<std::vector<Real>> p(lmax + 1);
  p[0] = {1 / sqrt(seq.dets[1])};
  for (std::size_t l = 0; l < lmax; ++l) {
    const Real a = seq.alpha_coef(static_cast<long>(l));
    const Real inv_rho = 1 / sqrt(1 - a * a);
    p[l + 1].assign(l + 2, Real(0));
    for (std::size_t j = 0; j <= l + 1; ++j) {
      Real v = 0;
      if (j >= 1) v += p[l][j - 1];
      if (j <= l) v -= a * p[l][l - j];
      p[l + 1][j] = v * inv_rho;
    }
  }
  return p;
}

std::pair<CplxR, CplxR> ortho_poly(std::size_t n, const CplxR& z, const VerblunskySequence& seq) {
  require_degree(seq, n);
  PrecisionScope scope(seq.bits);
  const Real p0 = 1 / sqrt(seq.dets[1]);
  CplxR p(p0, Real(0)), ps(p0, Real(0));
  for (std::size_t k = 0; k < n; ++k) {
    const Real a = seq.alpha_coef(static_cast<long>(k));
    const Real inv_rho = 1 / sqrt(1 - a * a);
    CplxR zp = z * p;
    CplxR next = (zp - a * ps) * inv_rho;
    ps = (ps - a * zp) * inv_rho;
    p = next;
  }
  return {p, ps};
}

CplxR ortho_poly_three_term(std::size_t n, const CplxR& z, const VerblunskySequence& seq) {
  require_degree(seq, n);
  PrecisionScope scope(seq.bits);
  const Real p0 = 1 / sqrt(seq.dets[1]);
  CplxR prev(p0, Real(0));
  if (n == 0) return prev;
  auto rho = [&](long k) {
    const Real a = seq.alpha_coef(k);
    return Real(sqrt(1 - a * a));
  };
  CplxR cur = (z - CplxR(seq.alpha_coef(0), Real(0))) * prev / rho(0);
  for (std::size_t k = 1; k < n; ++k) {
    const long kk = static_cast<long>(k);
    const Real am = seq.alpha_coef(kk - 1), a = seq.alpha_coef(kk);
    if (am == 0) throw NumericalError(NumericalFailure::singular_operator, "three-term recurrence hit alpha = 0");
    CplxR next = ((am * z + CplxR(a, Real(0))) * cur - (a * rho(kk - 1)) * z * prev) / (am * rho(kk));
    prev = cur;
    cur = next;
  }
  return cur;
}

CplxR cd_kernel_sum(std::size_t n, const CplxR& z, const CplxR& w, const VerblunskySequence& seq) {
  auto p = poly_coefficients(n, seq);
  PrecisionScope scope(seq.bits);
  CplxR sum(Real(0), Real(0));
  for (std::size_t l = 0; l <= n; ++l) sum += horner(p[l], z) * horner(p[l], w);
  return sum;
}

CplxR cd_kernel_closed(std::size_t n, const CplxR& z, const CplxR& w, const VerblunskySequence& seq) {
  auto [pz, psz] = ortho_poly(n + 1, z, seq);
  auto [pw, psw] = ortho_poly(n + 1, w, seq);
  PrecisionScope scope(seq.bits);
  return (psz * psw - pz * pw) / (CplxR(Real(1), Real(0)) - z * w);
}

MatR toeplitz_inverse_cd(std::size_t n, const VerblunskySequence& seq) {
  if (n == 0) return MatR(0, 0);
  auto p = poly_coefficients(n - 1, seq);
  PrecisionScope scope(seq.bits);
  MatR inv = MatR::Zero(n, n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t j = 0; j <= m; ++j)
      for (std::size_t l = 0; l <= m; ++l) inv(j, l) += p[m][j] * p[m][l];
  return inv;
}

Real WaveFunctionTable::at(long x) const {
  if (!window.contains(x)) return Real(0);
  return values[x - window.lo];
}

WaveFunctions wavefunctions(std::size_t lmax, long L, Window window, const VerblunskySequence& seq,
                            const PrecisionContext& ctx, bool cross_check) {
  require_degree(seq, lmax);
  if (window.size() == 0) throw ConfigError("wavefunctions: empty window");
  PrecisionScope scope(seq.bits);
  const double R = seq.weight.R, alpha = seq.weight.alpha;
  const Real eps = ldexp(Real(1), 10 - static_cast<int>(seq.bits));

  // moments of e^{R eps(k)} and the index beyond which they are negligible
  const long tail = weight_moment_tail(Real(R), Real(alpha), eps,
                                       static_cast<long>(std::ceil(R * (1 + 2 * std::abs(alpha)))), ctx);
  WeightMomentTable<Real> m(Real(R), Real(alpha), tail + static_cast<long>(lmax) + 2, ctx);

  const long dlo = -L - tail, dhi = -L + static_cast<long>(lmax) + tail;
  const std::size_t dn = static_cast<std::size_t>(dhi - dlo + 1);
  std::vector<Real> cur(dn), next(dn);
  const Real p0 = 1 / sqrt(seq.dets[1]);
  for (long x = dlo; x <= dhi; ++x) cur[x - dlo] = p0 * m(L + x);
  auto get = [&](const std::vector<Real>& v, long x) { return (x < dlo || x > dhi) ? Real(0) : v[x - dlo]; };

  WaveFunctions out;
  out.tables.resize(lmax + 1);
  const bool three_point = alpha == 0;
  Real tp_residual = 0;
  double boundary = 0;
  for (std::size_t l = 0; l <= lmax; ++l) {
    const long ll = static_cast<long>(l);
    auto& tab = out.tables[l];
    tab.l = l;
    tab.window = window;
    tab.values.resize(window.size());
    for (long x = window.lo; x <= window.hi; ++x) tab.values[x - window.lo] = get(cur, x);
    boundary = std::max({boundary, std::abs(to_double(cur.front())), std::abs(to_double(cur.back()))});
    if (three_point && l + 1 <= seq.nmax()) {
      const Real ul = seq.u[l], ul1 = seq.u[l + 1];
      const Real sg = sign_pow(ll);
      for (long x = window.lo; x <= window.hi; ++x) {
        const Real r = Real(L + x) / R * get(cur, x) - (get(cur, x - 1) + get(cur, x + 1)) / 2 -
                       (Real(ll) + R * ul * ul1) / R * get(cur, x) +
                       sg * (ul * get(cur, ll - 2 * L - x - 1) + ul1 * get(cur, ll - 2 * L - x));
        if (abs(r) > tp_residual) tp_residual = abs(r);
      }
    }
    if (l == lmax) break;
    const Real u1 = seq.u[l + 1];
    const Real inv_rho = 1 / sqrt(1 - u1 * u1);
    const Real su = sign_pow(ll + 1) * u1;
    for (long x = dlo; x <= dhi; ++x) next[x - dlo] = (get(cur, x - 1) + su * get(cur, ll - 2 * L - x)) * inv_rho;
    std::swap(cur, next);
  }
  out.boundary_mass = boundary;
  if (three_point) out.three_point_residual = to_double(tp_residual);
  if (boundary > ctx.rel_tol)
    throw NumericalError(NumericalFailure::window_too_small, "wave functions reach the domain boundary");

  if (cross_check) {
    auto p = poly_coefficients(lmax, seq);
    Real worst = 0;
    for (std::size_t l = 0; l <= lmax; ++l)
      for (long x = window.lo; x <= window.hi; ++x) {
        Real direct = 0;
        for (std::size_t j = 0; j <= l; ++j) {
          const long idx = L + x - static_cast<long>(j);
          if (std::abs(idx) <= m.n_max()) direct += p[l][j] * m(idx);
        }
        const Real d = abs(direct - out.tables[l].values[x - window.lo]);
        if (d > worst) worst = d;
      }
    out.recursion_discrepancy = to_double(worst);
  }
  return out;
}

GcboResult gcbo_check(std::size_t n, const WeightSpec& w, std::size_t truncation, const PrecisionContext& ctx) {
  w.validate();
  if (truncation == 0) throw ConfigError("gcbo_check: truncation must be positive");
  PrecisionScope scope(ctx.bits);
  const Real dn = toeplitz_det(n, w, ctx);
  const long lo = static_cast<long>(n) + 1;
  const long hi = static_cast<long>(n + 2 * truncation) + 1;
  DeformedBesselTable<Real> J(Real(2 * w.R), Real(w.alpha), lo, hi, ctx);
  const long T = static_cast<long>(truncation);
  MatR a = MatR::Identity(T, T);
  for (long j = 0; j < T; ++j)
    for (long l = 0; l <= j; ++l) {
      Real s = 0;
      for (long p = 0; p < T; ++p) s += J(lo + j + p) * J(lo + l + p);
      a(j, l) -= s;
      if (l != j) a(l, j) -= s;
    }
  const Real pref = exp(Real(w.R) * Real(w.R) * (1 + 2 * Real(w.alpha) * Real(w.alpha)));
  GcboResult out;
  out.rel_error = std::abs(to_double(dn / (pref * determinant(a)) - 1));
  out.tail = std::max(std::abs(to_double(J(lo + T))), std::abs(to_double(J(hi))));
  out.truncation_ok = out.tail < ctx.rel_tol;
  return out;
}

LaxResidual lax_residual(std::size_t n, std::complex<double> zd, const WeightSpec& w, const PrecisionContext& ctx) {
  w.validate();
  if (zd == 0.0) throw ConfigError("lax_residual: z must be nonzero");
  auto seq = verblunsky(n + 2, w, ctx);
  auto p = poly_coefficients(n, seq);
  PrecisionScope scope(ctx.bits);
  const CplxR z = from_std<Real>(zd);
  const auto& pn = p[n];
  const CplxR P = horner(pn, z);
  const CplxR Ps = horner_reversed(pn, z);
  const Real h("1e-30");
  const CplxR dP = (horner(pn, z + CplxR(h, Real(0))) - horner(pn, z - CplxR(h, Real(0)))) / (2 * h);

  const long nn = static_cast<long>(n);
  auto A = [&](long k) { return seq.alpha_coef(k); };
  auto X = [&](long k) { return Real(A(k - 1) * A(k - 1) * (A(k) + A(k - 2)) - A(k - 2)); };
  auto beta = [&](long k) { return Real(A(k) * X(k) - (1 - A(k) * A(k)) * A(k - 1) * A(k + 1)); };
  const Real gamma = A(nn - 3) * (A(nn - 2) * A(nn - 2) - 1) + A(nn - 1) * (A(nn - 2) * A(nn - 2) - beta(nn - 1) - beta(nn));
  const Real R(w.R), al(w.alpha);
  const CplxR one(Real(1), Real(0));
  const CplxR iz = one / z, iz2 = iz * iz, iz3 = iz2 * iz;
  const Real aa = A(nn - 1) * A(nn);
  const CplxR an = R * (CplxR(-2 * al * aa, Real(0)) + (Real(nn) / R - aa + 2 * al * beta(nn)) * iz +
                        (1 - 2 * al * aa) * iz2 + (2 * al) * iz3);
  const Real xn = X(nn);
  const CplxR bn = R * (CplxR(2 * al * A(nn), Real(0)) + (xn - Real(nn) * A(nn - 1) / R + 2 * al * gamma) * iz +
                        (2 * al * xn - A(nn - 1)) * iz2 - (2 * al * A(nn - 1)) * iz3);
  LaxResidual out;
  out.derivative = to_double(abs(dP - (an * P - bn * Ps)));

  WeightMomentTable<Real> c(Real(2 * w.R), Real(w.alpha), nn + 2, ctx);
  Real direct = 0;
  for (long i = 0; i <= nn; ++i)
    for (long j = 0; j <= nn; ++j) direct += pn[i] * pn[nn - j] * c(i - j - 2);
  out.gamma = std::abs(to_double(direct - gamma));
  return out;
}

std::complex<double> ratio_limit(std::complex<double> z, double u) {
  const double u2 = u * u;
  return (z - 1.0 + std::sqrt((z + 1.0) * (z + 1.0) - 4 * u2 * z)) / (2 * std::sqrt(1 - u2));
}

RatioSample ratio_check(std::size_t n, std::complex<double> z, const WeightSpec& w, const PrecisionContext& ctx,
                        VerblunskySource source) {
  w.validate();
  if (!(std::abs(z) > 1)) throw ConfigError("ratio_check: need |z| > 1");
  auto seq = verblunsky(std::max<std::size_t>(n + 1, 2), w, ctx, source);
  PrecisionScope scope(ctx.bits);
  const CplxR zz = from_std<Real>(z);
  auto pn = ortho_poly(n, zz, seq).first;
  auto pn1 = ortho_poly(n + 1, zz, seq).first;
  RatioSample out;
  out.finite = to_std(pn1 / pn);
  out.limit = ratio_limit(z, u_of_lambda(n / (2 * w.R), w.alpha));
  return out;
}

}  // namespace ffedge
