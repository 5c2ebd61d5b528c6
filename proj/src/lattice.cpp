#include "ffedge/lattice.hpp"

#include "ffedge/fft.hpp"
#include "ffedge/hydro.hpp"
#include "ffedge/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ffedge {

namespace {

// a few hundred ulps: below this the tables are at their round-off floor
Real working_eps(unsigned bits) { return ldexp(Real(1), 10 - static_cast<int>(bits)); }

void check_window(const Window& w) {
  if (w.size() == 0) throw ConfigError("empty x-window");
}

void finish(CorrelationMatrix& c, const PrecisionContext& ctx) {
  const std::size_t W = c.window.size();
  c.edge_mass = std::max(std::abs(to_double(c.values(0, 0))), std::abs(to_double(c.values(W - 1, W - 1))));
  if (c.edge_mass > ctx.rel_tol) c.warnings.push_back("window clipped: correlator mass at the window edge");
}

double round_half_away(double v) { return std::round(v); }

// Bessel values on [lo, hi]; zero outside.
template <class T>
class BesselStrip {
 public:
  BesselStrip(const T& t, const T& alpha, long lo, long hi, const PrecisionContext& ctx)
      : lo_(lo), hi_(hi), table_(t, alpha, lo, hi, ctx) {}
  T operator()(long n) const { return (n < lo_ || n > hi_) ? T(0) : table_(n); }

 private:
  long lo_, hi_;
  DeformedBesselTable<T> table_;
};

template <class T>
T tabs(const T& v) {
  using std::abs;
  return abs(v);
}

// n past t_eff with (e t_eff / 2n)^n below eps
long bessel_tail_estimate(double t_eff, double log_eps) {
  long n = static_cast<long>(std::ceil(t_eff)) + 1;
  while (n * std::log(2.0 * n / (M_E * std::max(t_eff, 1e-300))) < -log_eps) ++n;
  return n;
}

template <class T>
double log_of(const T& v) {
  using std::log;
  return static_cast<double>(log(v));
}

// |J_n(t)| < eps for |n| >= returned index
template <class T>
long bessel_tail(double t, double alpha, const T& eps, const PrecisionContext& ctx) {
  const long turn = static_cast<long>(std::ceil(std::abs(t) * (1 + 2 * std::abs(alpha))));
  long span = bessel_tail_estimate(std::abs(t) * (1 + 2 * std::abs(alpha)), log_of(eps)) + 16;
  for (int attempt = 0; attempt < 12; ++attempt, span *= 2) {
    DeformedBesselTable<T> J(T(t), T(alpha), -span, span, ctx);
    for (long n = turn; n + 1 <= span; ++n)
      if (tabs(J(n)) < eps && tabs(J(n + 1)) < eps && tabs(J(-n)) < eps && tabs(J(-n - 1)) < eps) return n;
  }
  throw NumericalError(NumericalFailure::budget_exceeded, "Bessel tail not reached");
}

Mat<double> mat_mul(const Mat<double>& a, const Mat<double>& b) { return a * b; }
MatR mat_mul(const MatR& a, const MatR& b) { return multiply(a, b); }

Mat<double> solve_spd(const Mat<double>& a, const Mat<double>& b) {
  Eigen::LLT<Mat<double>> llt(a);
  if (llt.info() != Eigen::Success)
    throw NumericalError(NumericalFailure::singular_operator, "1 - K_N is not positive definite");
  return llt.solve(b);
}
MatR solve_spd(const MatR& a, const MatR& b) { return spd_solve(a, b); }

template <class T>
double residual_floor() { return 0; }
template <>
double residual_floor<double>() { return 1e3 * std::numeric_limits<double>::epsilon(); }

// Many-Bessel representation on a list of sites.
template <class T>
struct ManyBessel {
  Mat<T> first_particle, first_hole, a, z;
  std::vector<long> xs;

  ManyBessel(const ModelParams& p, std::vector<long> sites, const PrecisionContext& ctx, const T& eps) : xs(std::move(sites)) {
    const long L = p.L, N = p.N();
    const long W = static_cast<long>(xs.size());
    const long xmin = *std::min_element(xs.begin(), xs.end());
    const long xmax = *std::max_element(xs.begin(), xs.end());
    const long xabs = std::max(std::abs(xmin), std::abs(xmax));

    // truncation of the semi-infinite index past the Bessel turning point
    const long pmin = std::max(0L, static_cast<long>(std::ceil(2 * p.R * (1 + 2 * std::abs(p.alpha)))) - N);
    long P = -1;
    const long est = bessel_tail_estimate(2 * p.R * (1 + 2 * std::abs(p.alpha)), log_of(eps));
    for (long span = std::max(pmin, est - N) + 16; P < 0; span *= 2) {
      if (span > (1L << 20)) throw NumericalError(NumericalFailure::budget_exceeded, "K_N truncation not reached");
      DeformedBesselTable<T> J2(T(2 * p.R), T(p.alpha), N, N + span + 1, ctx);
      for (long q = pmin; q + 1 <= span; ++q)
        if (tabs(J2(N + q)) < eps && tabs(J2(N + q + 1)) < eps) {
          P = q + 1;
          break;
        }
    }
    const long Q = bessel_tail<T>(p.R, p.alpha, eps, ctx);
    BesselStrip<T> J2(T(2 * p.R), T(p.alpha), N + 1, N + 2 * P, ctx);
    BesselStrip<T> J(T(p.R), T(p.alpha), -Q - xabs - L - 2, std::max(Q, L + P + xabs) + 2, ctx);

    Mat<T> A(P, P);
    for (long j = 0; j < P; ++j)
      for (long q = 0; q < P; ++q) A(j, q) = J2(N + 1 + j + q);
    // K_{jl} = sum_{q<P} h_{j+q} h_{l+q} with h_n = J_{N+1+n}(2R): first row, then the Hankel shift
    // K_{j+1,l+1} = K_{jl} - h_j h_l + h_{j+P} h_{l+P}
    auto h = [&](long n) { return J2(N + 1 + n); };
    Mat<T> K(P, P);
    for (long l = 0; l < P; ++l) {
      T s = 0;
      for (long q = 0; q < P; ++q) s += h(q) * h(l + q);
      K(0, l) = s;
    }
    for (long j = 1; j < P; ++j)
      for (long l = j; l < P; ++l) K(j, l) = K(j - 1, l - 1) - h(j - 1) * h(l - 1) + h(j - 1 + P) * h(l - 1 + P);
    Mat<T> IK(P, P);
    for (long j = 0; j < P; ++j)
      for (long l = j; l < P; ++l) IK(j, l) = IK(l, j) = (j == l ? T(1) : T(0)) - K(j, l);

    Mat<T> w(P, W);
    for (long i = 0; i < W; ++i)
      for (long q = 0; q < P; ++q) w(q, i) = J(L + q + 1 - xs[i]);
    a = -mat_mul(A, w);
    for (long i = 0; i < W; ++i)
      for (long j = 0; j < P; ++j) a(j, i) += J(j + L + xs[i] + 1);
    z = solve_spd(IK, a);
    Mat<T> r = mat_mul(IK, z) - a;
    T rn = 0, an = 0;
    for (long j = 0; j < r.rows(); ++j)
      for (long i = 0; i < r.cols(); ++i) {
        rn = std::max(rn, tabs(r(j, i)));
        an = std::max(an, tabs(a(j, i)));
      }
    if (rn > T(std::max(ctx.rel_tol, residual_floor<T>())) * std::max(an, T(1)))
      throw NumericalError(NumericalFailure::singular_operator, "resolvent of K_N failed its residual check");

    // J^{(-alpha)}_n(R) = (-1)^n J^{(alpha)}_{-n}(R)
    auto Jm = [&](long n) { return (n % 2 == 0) ? J(-n) : T(-J(-n)); };
    first_particle.resize(W, W);
    first_hole.resize(W, W);
    for (long i = 0; i < W; ++i)
      for (long k = 0; k < W; ++k) {
        const long x = xs[i], xp = xs[k];
        T sp = 0, sh = 0;
        for (long n = x - L; n <= Q + 1 && n + xp - x <= Q + 1; ++n) sp += Jm(n) * Jm(n + xp - x);
        for (long q = 1; q + L - std::max(x, xp) <= Q + 1; ++q) sh += J(q + L - x) * J(q + L - xp);
        first_particle(i, k) = sp;
        first_hole(i, k) = sh;
      }
  }

  Mat<T> particle() const {
    Mat<T> c = first_particle;
    Mat<T> at = a.transpose();
    Mat<T> corr = mat_mul(at, z);
    for (long i = 0; i < c.rows(); ++i)
      for (long k = 0; k < c.cols(); ++k) c(i, k) -= ((xs[i] - xs[k]) % 2 == 0 ? T(1) : T(-1)) * corr(i, k);
    return c;
  }

  Mat<T> hole() const {
    Mat<T> at = a.transpose();
    return first_hole + mat_mul(at, z);
  }
};

std::vector<long> window_sites(const Window& w) {
  std::vector<long> xs;
  for (long x = w.lo; x <= w.hi; ++x) xs.push_back(x);
  return xs;
}

}  // namespace

void ModelParams::validate() const {
  if (!(R > 0) || !std::isfinite(R)) throw ConfigError("model: R must be positive");
  if (!(std::abs(alpha) <= 0.125)) throw ConfigError("model: |alpha| must be <= 1/8");
  if (L < 0) throw ConfigError("model: L must be nonnegative");
}

ModelParams ModelParams::from_lambda(double lambda, double alpha, double R) {
  if (!(lambda > 0)) throw ConfigError("model: lambda must be positive");
  ModelParams p{alpha, R, static_cast<long>(round_half_away(lambda * R))};
  p.validate();
  return p;
}

const char* to_string(CorrelatorMethod m) {
  switch (m) {
    case CorrelatorMethod::toeplitz_inverse: return "toeplitz-inverse";
    case CorrelatorMethod::opuc_sum: return "opuc-sum";
    case CorrelatorMethod::contour: return "contour";
    case CorrelatorMethod::fredholm: return "fredholm";
  }
  return "?";
}

Window default_window(const ModelParams& p) {
  const long h = p.L + static_cast<long>(std::ceil(4 * p.R));
  return {-h, h};
}

CorrelationMatrix correlator_toeplitz(const ModelParams& p, double y, Window window, const PrecisionContext& ctx) {
  p.validate();
  ctx.validate();
  check_window(window);
  if (!(std::abs(y) <= p.R)) throw ConfigError("correlator_toeplitz: |y| must be <= R");
  PrecisionScope scope(ctx.bits);
  const long N = p.N(), L = p.L, W = static_cast<long>(window.size());
  const long span = std::max(std::abs(window.lo), std::abs(window.hi)) + L;

  WeightMomentTable<Real> c2(Real(2 * p.R), Real(p.alpha), N, ctx);
  MatR t2(N, N);
  for (long j = 0; j < N; ++j)
    for (long l = 0; l < N; ++l) t2(j, l) = c2(j - l);
  auto inv = checked_inverse(t2, ctx.rel_tol, "correlator_toeplitz");

  WeightMomentTable<Real> cp(Real(p.R + y), Real(p.alpha), span, ctx);
  WeightMomentTable<Real> cm(Real(p.R - y), Real(p.alpha), span, ctx);
  MatR A(W, N), B(N, W);
  for (long i = 0; i < W; ++i)
    for (long m = 0; m < N; ++m) {
      const long x = window.lo + i, site = m - L;
      A(i, m) = cp(x - site);
      B(m, i) = cm(site - x);
    }
  CorrelationMatrix out;
  out.window = window;
  out.y = y;
  out.method = CorrelatorMethod::toeplitz_inverse;
  out.values = (A * inv.inverse * B).transpose();
  finish(out, ctx);
  return out;
}

ToeplitzDensity::ToeplitzDensity(const ModelParams& p, const PrecisionContext& ctx) : p_(p), ctx_(ctx) {
  p.validate();
  ctx.validate();
  PrecisionScope scope(ctx.bits);
  const long N = p.N();
  WeightMomentTable<Real> c2(Real(2 * p.R), Real(p.alpha), N, ctx);
  MatR t2(N, N);
  for (long j = 0; j < N; ++j)
    for (long l = 0; l < N; ++l) t2(j, l) = c2(j - l);
  auto inv = checked_inverse(t2, ctx.rel_tol, "ToeplitzDensity");
  inverse_ = std::move(inv.inverse);
  residual_ = inv.residual;
}

std::vector<Real> ToeplitzDensity::density(double y, Window window) const {
  check_window(window);
  if (!(std::abs(y) <= p_.R)) throw ConfigError("density: |y| must be <= R");
  PrecisionScope scope(ctx_.bits);
  const long N = p_.N(), L = p_.L, W = static_cast<long>(window.size());
  const long span = std::max(std::abs(window.lo), std::abs(window.hi)) + L;
  WeightMomentTable<Real> cp(Real(p_.R + y), Real(p_.alpha), span, ctx_);
  WeightMomentTable<Real> cm(Real(p_.R - y), Real(p_.alpha), span, ctx_);
  MatR A(W, N), B(N, W);
  for (long i = 0; i < W; ++i)
    for (long m = 0; m < N; ++m) {
      const long x = window.lo + i, site = m - L;
      A(i, m) = cp(x - site);
      B(m, i) = cm(site - x);
    }
  MatR AT = A * inverse_;
  std::vector<Real> rho(W);
  for (long i = 0; i < W; ++i) rho[i] = AT.row(i).dot(B.col(i));
  return rho;
}

DensityMap density_map(const ModelParams& p, const std::vector<long>& xs, const std::vector<double>& ys,
                       const PrecisionContext& ctx) {
  if (xs.empty() || ys.empty()) throw ConfigError("density_map: empty grid");
  for (double y : ys)
    if (!(std::abs(y) <= p.R)) throw ConfigError("density_map: y outside [-R, R]");
  ToeplitzDensity td(p, ctx);
  DensityMap out;
  out.x = xs;
  out.y = ys;
  out.residual = td.inverse_residual();
  const long lo = *std::min_element(xs.begin(), xs.end());
  const long hi = *std::max_element(xs.begin(), xs.end());
  const double tol = std::max(ctx.rel_tol, 1e-10);
  for (double y : ys) {
    auto row = td.density(y, {lo, hi});
    for (long x : xs) {
      const double v = to_double(row[x - lo]);
      out.rho.push_back(v);
      const bool crazy = v < -tol || v > 1 + tol;
      out.crazy.push_back(crazy ? 1 : 0);
      out.crazy_count += crazy;
    }
  }
  return out;
}

CorrelationMatrix correlator_opuc(const ModelParams& p, Window window, const PrecisionContext& ctx,
                                  VerblunskySource source) {
  p.validate();
  ctx.validate();
  check_window(window);
  const long N = p.N();
  auto seq = verblunsky(std::max<std::size_t>(N, 2), {p.R, p.alpha}, ctx, source);
  auto wf = wavefunctions(N - 1, p.L, window, seq, ctx, false);
  PrecisionScope scope(ctx.bits);
  const long W = static_cast<long>(window.size());
  MatR phi(W, N);
  for (long l = 0; l < N; ++l)
    for (long i = 0; i < W; ++i) phi(i, l) = wf.tables[l].values[i];
  CorrelationMatrix out;
  out.window = window;
  out.method = CorrelatorMethod::opuc_sum;
  out.values = phi * phi.transpose();
  finish(out, ctx);
  return out;
}

namespace {

struct ContourGrid {
  MatR re, im;
};

// (1/M^2) sum_{a,b} [A1 D B1 - A2 D B2] for rows xs and columns cols.
ContourGrid contour_eval(const ModelParams& p, const std::vector<Real>& pn, std::size_t M,
                         const std::vector<long>& xs, const std::vector<long>& cols) {
  const long L = p.L;
  const long Ml = static_cast<long>(M);
  // e^{i pi j / M}, j = 0..2M-1
  std::vector<Real> cr(2 * M), sr(2 * M);
  const Real pi = pi_real();
  for (std::size_t j = 0; j < 2 * M; ++j) {
    cr[j] = cos(pi * Real(static_cast<long>(j)) / Real(Ml));
    sr[j] = sin(pi * Real(static_cast<long>(j)) / Real(Ml));
  }
  auto root = [&](long e) {
    const long m = ((e % (2 * Ml)) + 2 * Ml) % (2 * Ml);
    return std::pair<const Real&, const Real&>(cr[m], sr[m]);
  };
  // k_a = -pi + 2 pi a / M  -> e^{i k_a n} = (-1)^n root(2 a n)
  // q_b = k_b + pi / M      -> e^{i q_b n} = (-1)^n root((2 b + 1) n)
  auto phase = [&](long grid_index, long n, bool shifted) {
    const long e = (2 * grid_index + (shifted ? 1 : 0)) * n;
    auto [c, s] = root(e);
    const Real sign = (n % 2 == 0) ? Real(1) : Real(-1);
    return CplxR(sign * c, sign * s);
  };
  const Real alpha(p.alpha), R(p.R);
  auto grid_values = [&](bool shifted, std::vector<CplxR>& poly, std::vector<Real>& weight) {
    poly.resize(M);
    weight.resize(M);
    for (long a = 0; a < Ml; ++a) {
      CplxR z = phase(a, 1, shifted);
      CplxR acc(Real(0), Real(0));
      for (std::size_t j = pn.size(); j-- > 0;) acc = acc * z + CplxR(pn[j], Real(0));
      poly[a] = acc;
      CplxR z2 = phase(a, 2, shifted);
      weight[a] = exp(R * (z.re + alpha * z2.re));
    }
  };
  std::vector<CplxR> pk, pq;
  std::vector<Real> wk, wq;
  grid_values(false, pk, wk);
  grid_values(true, pq, wq);

  const long W = static_cast<long>(xs.size()), C = static_cast<long>(cols.size());
  MatR a1r(W, M), a1i(W, M), a2r(W, M), a2i(W, M);
  for (long i = 0; i < W; ++i)
    for (long a = 0; a < Ml; ++a) {
      CplxR v1 = wk[a] * phase(a, xs[i] - L - 1, false) * pk[a];
      CplxR v2 = wk[a] * phase(a, xs[i] + L, false) * conj(pk[a]);
      a1r(i, a) = v1.re;
      a1i(i, a) = v1.im;
      a2r(i, a) = v2.re;
      a2i(i, a) = v2.im;
    }
  // D(a, b) = 1 / (1 - e^{i (q_b - k_a)}) depends on (b - a) mod M; with d'[r] = D at b - a = -r
  // the column sums sum_b D(a, b) B(b) are circular convolutions d' * B.
  std::vector<Real> dre(M), dim(M);
  for (long r = 0; r < Ml; ++r) {
    auto [c, s] = root(2 * ((Ml - r) % Ml) + 1);
    const Real den = (1 - c) * (1 - c) + s * s;
    dre[r] = (1 - c) / den;
    dim[r] = s / den;
  }
  Fft<Real> fft(M);
  fft.run(dre, dim, false);
  std::vector<Real> br(M), bi(M);
  MatR e1r(M, C), e1i(M, C), e2r(M, C), e2i(M, C);
  auto convolve = [&](MatR& er, MatR& ei, long j) {
    fft.run(br, bi, false);
    fft.multiply(br, bi, dre, dim);
    fft.run(br, bi, true);
    for (long a = 0; a < Ml; ++a) {
      er(a, j) = br[a] / Real(Ml);
      ei(a, j) = bi[a] / Real(Ml);
    }
  };
  for (long j = 0; j < C; ++j) {
    for (long b = 0; b < Ml; ++b) {
      CplxR v = wq[b] * phase(b, L + 1 - cols[j], true) * conj(pq[b]);
      br[b] = v.re;
      bi[b] = v.im;
    }
    convolve(e1r, e1i, j);
    for (long b = 0; b < Ml; ++b) {
      CplxR v = wq[b] * phase(b, -L - cols[j], true) * pq[b];
      br[b] = v.re;
      bi[b] = v.im;
    }
    convolve(e2r, e2i, j);
  }
  ContourGrid g;
  const Real norm = Real(Ml) * Real(Ml);
  g.re = (multiply(a1r, e1r) - multiply(a1i, e1i) - multiply(a2r, e2r) + multiply(a2i, e2i)) / norm;
  g.im = (multiply(a1r, e1i) + multiply(a1i, e1r) - multiply(a2r, e2i) - multiply(a2i, e2r)) / norm;
  return g;
}

}  // namespace

CorrelationMatrix correlator_contour(const ModelParams& p, Window window, const PrecisionContext& ctx) {
  p.validate();
  ctx.validate();
  check_window(window);
  const long N = p.N();
  auto seq = verblunsky(std::max<std::size_t>(N, 2), {p.R, p.alpha}, ctx);
  auto pn = poly_coefficients(N, seq)[N];
  PrecisionScope scope(ctx.bits);

  // trigonometric bandwidth of the integrand in each variable
  const long tail = weight_moment_tail(Real(p.R), Real(p.alpha), working_eps(ctx.bits), 1, ctx);
  const long xabs = std::max(std::abs(window.lo), std::abs(window.hi));
  std::size_t M = 16;
  while (M < static_cast<std::size_t>(2 * (xabs + p.L + N + tail + 2))) M *= 2;

  const auto xs = window_sites(window);
  std::vector<long> probe{window.lo, std::clamp(0L, window.lo, window.hi), window.hi};
  for (;;) {
    if (2 * M > ctx.max_nodes)
      throw NumericalError(NumericalFailure::budget_exceeded, "contour: node budget exceeded");
    auto g = contour_eval(p, pn, M, xs, xs);
    auto fine = contour_eval(p, pn, 2 * M, xs, probe);
    Real diff = 0, scale = 1;
    for (long i = 0; i < static_cast<long>(xs.size()); ++i)
      for (std::size_t j = 0; j < probe.size(); ++j) {
        const Real& coarse = g.re(i, probe[j] - window.lo);
        diff = std::max(diff, Real(abs(coarse - fine.re(i, j))));
        scale = std::max(scale, Real(abs(coarse)));
      }
    if (diff <= Real(ctx.rel_tol) * scale) {
      CorrelationMatrix out;
      out.window = window;
      out.method = CorrelatorMethod::contour;
      out.values = g.re;
      Real im = 0;
      for (long i = 0; i < g.im.rows(); ++i)
        for (long j = 0; j < g.im.cols(); ++j) im = std::max(im, Real(abs(g.im(i, j))));
      out.max_imag = to_double(im);
      finish(out, ctx);
      return out;
    }
    M *= 2;
  }
}

CorrelationMatrix correlator_fredholm(const ModelParams& p, Window window, const PrecisionContext& ctx) {
  p.validate();
  ctx.validate();
  check_window(window);
  PrecisionScope scope(ctx.bits);
  ManyBessel<Real> mb(p, window_sites(window), ctx, working_eps(ctx.bits));
  CorrelationMatrix out;
  out.window = window;
  out.method = CorrelatorMethod::fredholm;
  out.values = mb.particle();
  finish(out, ctx);
  return out;
}

CorrelationMatrix correlator(CorrelatorMethod m, const ModelParams& p, Window window, const PrecisionContext& ctx) {
  switch (m) {
    case CorrelatorMethod::toeplitz_inverse: return correlator_toeplitz(p, 0, window, ctx);
    case CorrelatorMethod::opuc_sum: return correlator_opuc(p, window, ctx);
    case CorrelatorMethod::contour: return correlator_contour(p, window, ctx);
    case CorrelatorMethod::fredholm: return correlator_fredholm(p, window, ctx);
  }
  throw ConfigError("unknown correlator method");
}

Mat<double> hole_correlator(const ModelParams& p, const std::vector<long>& xs, const PrecisionContext& ctx) {
  p.validate();
  if (xs.empty()) throw ConfigError("hole_correlator: no sites");
  ManyBessel<double> mb(p, xs, ctx, std::numeric_limits<double>::epsilon() / 16);
  return mb.hole();
}

double PartitionScan::z_tilde(std::size_t N) const { return std::exp(log_z_tilde.at(N)); }

PartitionScan partition_scan(double R, double alpha, std::size_t n_max, const PrecisionContext& ctx) {
  auto seq = verblunsky(std::max<std::size_t>(n_max, 2), {R, alpha}, ctx, VerblunskySource::recursion);
  PrecisionScope scope(ctx.bits);
  PartitionScan out;
  out.R = R;
  out.alpha = alpha;
  out.max_residual = seq.max_residual;
  for (std::size_t N = 0; N <= n_max; ++N) {
    const Real lz = log(seq.dets[N]);
    out.log_z.push_back(to_double(lz));
    out.log_z_tilde.push_back(to_double(lz - Real(R) * Real(R) * (1 + 2 * Real(alpha) * Real(alpha))));
    out.hex_log_z.push_back(hex_string(lz));
  }
  return out;
}

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::exterior_airy: return "exterior-airy";
    case EdgeKind::tacnode: return "tacnode";
    case EdgeKind::higher_tacnode: return "higher-tacnode";
  }
  return "?";
}

namespace {

struct CenterLaw {
  double base_slope;  // L ~ base_slope R + sigma (r_slope R)^e
  double r_slope;
  double exponent;
};

CenterLaw center_law(EdgeKind kind, double alpha) {
  if (kind == EdgeKind::tacnode) {
    if (!(alpha >= 0 && alpha < 0.125)) throw ConfigError("tacnode scaling needs 0 <= alpha < 1/8");
    return {1 - 2 * alpha, (1 - 8 * alpha) / 2, 1.0 / 3};
  }
  if (kind == EdgeKind::higher_tacnode) {
    if (alpha != 0.125) throw ConfigError("higher-tacnode scaling needs alpha = 1/8");
    return {0.75, 0.125, 0.2};
  }
  throw ConfigError("not a center edge kind");
}

EdgeSetup center_from(EdgeKind kind, double alpha, double R, long L, double sigma, double L_requested,
                      std::vector<double> s_grid) {
  const auto law = center_law(kind, alpha);
  EdgeSetup out;
  out.params = {alpha, R, L};
  out.params.validate();
  out.L_requested = L_requested;
  auto& sc = out.scaling;
  sc.kind = kind;
  sc.sigma = sigma;
  sc.exponent = law.exponent;
  sc.r_tilde = law.r_slope * R;
  sc.sigma_effective = (L - law.base_slope * R) / std::pow(sc.r_tilde, law.exponent);
  sc.s_grid = std::move(s_grid);
  sc.center = 0;
  return out;
}

EdgeSetup exterior_from(const ModelParams& p, double lambda_requested, std::vector<double> s_grid) {
  if (!(p.alpha >= 0)) throw ConfigError("exterior edge scaling needs alpha >= 0");
  HydroParams h(p.lambda(), p.alpha);
  auto curv = edge_curvature(h);
  if (!(curv.upsilon2 < 0)) throw NumericalError(NumericalFailure::degenerate_curvature, "exterior edge is not quadratic");
  EdgeSetup out;
  out.params = p;
  out.L_requested = lambda_requested * p.R;
  auto& sc = out.scaling;
  sc.kind = EdgeKind::exterior_airy;
  sc.exponent = 1.0 / 3;
  sc.r_tilde = -curv.upsilon2 * p.R / 2;
  sc.center = p.R * curv.upsilon0;
  sc.s_grid = std::move(s_grid);
  return out;
}

}  // namespace

EdgeSetup exterior_edge(double alpha, double lambda, double R, std::vector<double> s_grid) {
  return exterior_from(ModelParams::from_lambda(lambda, alpha, R), lambda, std::move(s_grid));
}

EdgeSetup exterior_edge_at_L(double alpha, double lambda, long L, std::vector<double> s_grid) {
  if (!(lambda > 0)) throw ConfigError("exterior edge: lambda must be positive");
  ModelParams p{alpha, (2 * L + 1) / (2 * lambda), L};
  p.validate();
  return exterior_from(p, lambda, std::move(s_grid));
}

EdgeSetup center_edge(EdgeKind kind, double alpha, double R, double sigma, std::vector<double> s_grid) {
  const auto law = center_law(kind, alpha);
  if (!(R > 0)) throw ConfigError("center edge: R must be positive");
  const double Lreq = law.base_slope * R + sigma * std::pow(law.r_slope * R, law.exponent);
  if (!(Lreq >= 0)) throw ConfigError("center edge: prescription gives L < 0");
  return center_from(kind, alpha, R, static_cast<long>(round_half_away(Lreq)), sigma, Lreq, std::move(s_grid));
}

EdgeSetup center_edge_at_L(EdgeKind kind, double alpha, long L, double sigma, std::vector<double> s_grid) {
  const auto law = center_law(kind, alpha);
  if (L <= 0) throw ConfigError("center edge: L must be positive");
  auto f = [&](double R) { return law.base_slope * R + sigma * std::pow(law.r_slope * R, law.exponent) - L; };
  double lo = 1e-9, hi = 4.0 * L / law.base_slope + 64;
  while (f(hi) < 0) hi *= 2;
  if (f(lo) > 0) throw ConfigError("center edge: no R matches the requested L and sigma");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return center_from(kind, alpha, 0.5 * (lo + hi), L, sigma, static_cast<double>(L), std::move(s_grid));
}

EdgeSample edge_rescaled_correlator(const EdgeSetup& setup, const PrecisionContext& ctx) {
  const auto& sc = setup.scaling;
  const auto& p = setup.params;
  if (sc.s_grid.empty()) throw ConfigError("edge: empty s-grid");
  EdgeSample out;
  out.setup = setup;
  const double scale = std::pow(sc.r_tilde, sc.exponent);
  for (double s : sc.s_grid) {
    const long x = static_cast<long>(round_half_away(sc.center + s * scale));
    out.x.push_back(x);
    out.s_effective.push_back((x - sc.center) / scale);
  }
  const long W = static_cast<long>(out.x.size());
  out.values.resize(W, W);
  if (sc.kind == EdgeKind::exterior_airy) {
    PrecisionContext c = ctx;
    c.bits = std::max(ctx.bits, lattice_bits(p.R));
    const long lo = *std::min_element(out.x.begin(), out.x.end());
    const long hi = *std::max_element(out.x.begin(), out.x.end());
    auto seq = verblunsky(std::max<std::size_t>(p.N(), 2), {p.R, p.alpha}, c, VerblunskySource::recursion);
    auto wf = wavefunctions(p.N() - 1, p.L, {lo, hi}, seq, c, false);
    PrecisionScope scope(c.bits);
    for (long i = 0; i < W; ++i)
      for (long j = 0; j <= i; ++j) {
        Real s = 0;
        for (const auto& tab : wf.tables) s += tab.at(out.x[i]) * tab.at(out.x[j]);
        out.values(i, j) = out.values(j, i) = scale * to_double(s);
      }
  } else {
    out.values = scale * hole_correlator(p, out.x, ctx);
  }
  return out;
}

QuenchTable::QuenchTable(double t, long L, long x_max, const PrecisionContext& ctx) : t_(t), L_(L) {
  if (!(t >= 0) || !std::isfinite(t)) throw ConfigError("quench: t must be nonnegative");
  if (L < 0 || x_max < 0) throw ConfigError("quench: L and x range must be nonnegative");
  const double eps = std::numeric_limits<double>::epsilon() / 16;
  // |J_n(t)| <= (e t / 2n)^n; double FFT values do not resolve the tail below roundoff
  const long tail = t == 0 ? 1 : bessel_tail_estimate(t, std::log(eps)) + 16;
  n_lo_ = -(x_max + L + 1);
  n_hi_ = std::max(x_max + L + 1, tail + 1);
  DeformedBesselTable<double> J(t, 0.0, n_lo_, n_hi_, ctx);
  values_.resize(n_hi_ - n_lo_ + 1);
  for (long n = n_lo_; n <= n_hi_; ++n) values_[n - n_lo_] = J(n);
  tail_ = std::max(std::abs(J(n_hi_)), std::abs(J(n_hi_ - 1)));
}

double QuenchTable::J(long n) const { return (n < n_lo_ || n > n_hi_) ? 0.0 : values_[n - n_lo_]; }

double QuenchTable::density(long x) const {
  double s = 0;
  for (long j = -L_; j <= L_; ++j) s += J(x - j) * J(x - j);
  return s;
}

double QuenchTable::hole(long x, long xp) const {
  const double sign = ((x - xp) % 2 == 0) ? 1.0 : -1.0;
  double s = 0;
  for (long j = 1; j + L_ - std::max(std::abs(x), std::abs(xp)) <= n_hi_; ++j)
    s += J(j + L_ + x) * J(j + L_ + xp) + sign * J(j + L_ - x) * J(j + L_ - xp);
  return s;
}

double quench_correlator(long x, long xp, double t, long L, const PrecisionContext& ctx) {
  return QuenchTable(t, L, std::max(std::abs(x), std::abs(xp)), ctx).hole(x, xp);
}

double quench_density(long x, double t, long L, const PrecisionContext& ctx) {
  return QuenchTable(t, L, std::abs(x), ctx).density(x);
}

}  // namespace ffedge
