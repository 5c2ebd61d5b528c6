#include <doctest.h>

#include "ffedge/opuc.hpp"

#include <cmath>
#include <random>

using namespace ffedge;

namespace {

PrecisionContext ctx_bits(unsigned bits, double tol = 1e-12) {
  PrecisionContext c;
  c.bits = bits;
  c.rel_tol = tol;
  return c;
}

Real bessel_i(long n, const Real& x) {
  n = std::abs(n);
  Real half = x / 2;
  Real term = pow(half, n);
  for (long j = 1; j <= n; ++j) term /= j;
  Real sum = term;
  for (long k = 1; k < 400; ++k) {
    term *= half * half / Real(k * (k + n));
    sum += term;
  }
  return sum;
}

// moments of e^{2R(cos k + alpha cos 2k)} as a Bessel convolution
Real moment_oracle(long n, double R, double alpha) {
  Real s = 0;
  const Real x(2 * R), y(2 * R * alpha);
  if (alpha == 0) return bessel_i(n, x);
  for (long m = -60; m <= 60; ++m) s += bessel_i(n - 2 * m, x) * bessel_i(m, y);
  return s;
}

Real gauss_det(std::vector<std::vector<Real>> a) {
  const std::size_t n = a.size();
  Real det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(a[i][k]) > abs(a[piv][k])) piv = i;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      det = -det;
    }
    det *= a[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      Real f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
  }
  return det;
}

}  // namespace

TEST_CASE("Toeplitz determinants") {
  auto ctx = ctx_bits(256);
  PrecisionScope scope(256);
  CHECK(to_double(toeplitz_det(0, {1, 0}, ctx)) == 1.0);
  CHECK(to_double(toeplitz_det(1, {1, 0}, ctx)) == doctest::Approx(2.2795853023).epsilon(1e-10));
  CHECK(std::abs(to_double(toeplitz_det(16, {1, 0}, ctx)) - std::exp(1.0)) < 1e-10);

  const double R = 1.5, alpha = 1.0 / 16;
  const std::size_t n = 8;
  std::vector<std::vector<Real>> t(n, std::vector<Real>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) t[j][l] = moment_oracle(long(j) - long(l), R, alpha);
  Real expect = gauss_det(t);
  CHECK(to_double(abs(toeplitz_det(n, {R, alpha}, ctx) / expect - 1)) < 1e-40);
}

TEST_CASE("unit weight limit") {
  auto ctx = ctx_bits(256);
  auto seq = verblunsky(6, {1e-8, 0}, ctx);
  CHECK(to_double(seq.u[0]) == 1.0);
  CHECK(std::abs(to_double(seq.u[1]) - 1e-8) < 1e-15);
  for (std::size_t n = 2; n <= 6; ++n) CHECK(std::abs(to_double(seq.u[n])) < 1e-15);
  CHECK(std::abs(to_double(seq.dets[6]) - 1) < 1e-14);
}

TEST_CASE("first coefficient is c_1 / c_0") {
  auto ctx = ctx_bits(256);
  PrecisionScope scope(256);
  for (double alpha : {0.0, 1.0 / 16, 1.0 / 8}) {
    auto seq = verblunsky(4, {0.7, alpha}, ctx);
    Real expect = moment_oracle(1, 0.7, alpha) / moment_oracle(0, 0.7, alpha);
    CHECK(to_double(abs(seq.u[1] - expect)) < 1e-60);
  }
}

TEST_CASE("determinant ratio and recursion agree") {
  auto ctx = ctx_bits(512);
  for (double alpha : {0.0, 1.0 / 16, 1.0 / 8}) {
    auto a = verblunsky(20, {2, alpha}, ctx, VerblunskySource::determinant_ratio);
    auto b = verblunsky(20, {2, alpha}, ctx, VerblunskySource::recursion);
    PrecisionScope scope(512);
    for (std::size_t n = 0; n <= 20; ++n) {
      CHECK(to_double(abs(a.u[n] - b.u[n])) < 1e-40);
      CHECK(to_double(abs(a.dets[n] / b.dets[n] - 1)) < 1e-40);
    }
  }
}

TEST_CASE("dPII and Z recursion hold across parameters") {
  auto ctx = ctx_bits(512, 1e-10);
  for (double alpha : {0.0, 1.0 / 16, 1.0 / 8})
    for (double R : {0.5, 1.0, 2.0, 4.0}) {
      auto seq = verblunsky(24, {R, alpha}, ctx, VerblunskySource::recursion);
      CHECK(seq.max_residual < 1e-10);
      CHECK(seq.rho_check < 1e-12);
      for (std::size_t n = 1; n <= 24; ++n) CHECK(std::abs(to_double(seq.u[n])) < 1.0);
    }
  auto seq = verblunsky(24, {4, 1.0 / 16}, ctx);
  CHECK(seq.max_residual < 1e-10);
  CHECK(std::abs(to_double(dpii_residual(seq, 12))) < 1e-10);
  CHECK_THROWS_AS(dpii_residual(seq, 23), ConfigError);
}

TEST_CASE("Verblunsky coefficients follow the hydrodynamic value") {
  auto ctx = ctx_bits(512);
  auto seq = verblunsky(98, {64, 0}, ctx, VerblunskySource::recursion);
  CHECK(std::abs(std::abs(to_double(seq.u[96])) - 0.5) < 0.02);
}

TEST_CASE("critical coefficients at alpha = 1/8 decay like R^{-1/5}") {
  double prev = 1, scaled_prev = 0;
  for (double R : {16.0, 32.0, 64.0}) {
    auto ctx = ctx_bits(lattice_bits(R), 1e-10);
    const std::size_t n = std::size_t(1.5 * R);
    auto seq = verblunsky(n + 2, {R, 1.0 / 8}, ctx, VerblunskySource::recursion);
    const double u = std::abs(to_double(seq.u[n]));
    CHECK(u < prev);
    const double scaled = u * std::pow(R / 8, 0.2);
    if (scaled_prev > 0) CHECK(std::abs(scaled / scaled_prev - 1) < 1e-3);
    prev = u;
    scaled_prev = scaled;
  }
}

TEST_CASE("input validation") {
  auto ctx = ctx_bits(256);
  CHECK_THROWS_AS(verblunsky(8, {-1, 0}, ctx), ConfigError);
  CHECK_THROWS_AS(verblunsky(8, {1, 0.2}, ctx), ConfigError);
  CHECK_THROWS_AS(verblunsky(1, {1, 0}, ctx), ConfigError);
  auto seq = verblunsky(4, {1, 0}, ctx);
  CHECK_THROWS_AS(poly_coefficients(5, seq), ConfigError);
  CHECK(to_double(seq.alpha_coef(-1)) == -1.0);
  CHECK(to_double(seq.alpha_coef(-3)) == 0.0);
}

TEST_CASE("orthonormality of the polynomials") {
  auto ctx = ctx_bits(256);
  const double R = 2, alpha = 1.0 / 16;
  auto seq = verblunsky(6, {R, alpha}, ctx);
  auto p = poly_coefficients(6, seq);
  PrecisionScope scope(256);
  std::vector<Real> c(13);
  for (long n = 0; n <= 12; ++n) c[n] = moment_oracle(n, R, alpha);
  for (std::size_t n = 0; n <= 6; ++n)
    for (std::size_t m = 0; m <= 6; ++m) {
      Real s = 0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= m; ++j) s += p[n][i] * p[m][j] * c[std::abs(long(i) - long(j))];
      CHECK(to_double(abs(s - (n == m ? 1 : 0))) < 1e-40);
    }
}

TEST_CASE("reverse polynomial and three-term recurrence") {
  auto ctx = ctx_bits(256);
  auto seq = verblunsky(13, {1.5, 1.0 / 16}, ctx);
  PrecisionScope scope(256);
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> d(-1.2, 1.2);
  for (int trial = 0; trial < 8; ++trial) {
    CplxR z(Real(d(gen)), Real(d(gen)));
    CplxR zi = CplxR(Real(1), Real(0)) / z;
    CplxR zn(Real(1), Real(0));
    for (std::size_t n = 0; n <= 12; ++n) {
      auto [p, ps] = ortho_poly(n, z, seq);
      auto pinv = ortho_poly(n, zi, seq).first;
      CHECK(to_double(abs(ps - zn * pinv)) < 1e-30 * std::max(1.0, to_double(abs(ps))));
      CHECK(to_double(abs(ortho_poly_three_term(n, z, seq) - p)) < 1e-10);
      zn = zn * z;
    }
  }
  CplxR z(Real("1.5"), Real(0));
  auto [p, ps] = ortho_poly(5, z, seq);
  CHECK(to_double(abs(ps - pow(Real("1.5"), 5) * ortho_poly(5, CplxR(Real(1) / Real("1.5"), Real(0)), seq).first)) <
        1e-30);
}

TEST_CASE("Christoffel-Darboux formula and Toeplitz inverse") {
  auto ctx = ctx_bits(256);
  auto seq = verblunsky(13, {2, 1.0 / 8}, ctx);
  PrecisionScope scope(256);
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> d(-0.9, 0.9);
  for (std::size_t n = 0; n <= 12; ++n) {
    CplxR z(Real(d(gen)), Real(d(gen))), w(Real(d(gen)), Real(d(gen)));
    CplxR a = cd_kernel_sum(n, z, w, seq), b = cd_kernel_closed(n, z, w, seq);
    CHECK(to_double(abs(a - b)) < 1e-10 * std::max(1.0, to_double(abs(a))));
    MatR inv = toeplitz_inverse_cd(n, seq);
    if (n == 0) continue;
    MatR direct = toeplitz_matrix(n, seq.weight, ctx).inverse();
    CHECK(to_double(inf_norm(MatR(inv - direct))) < 1e-10);
  }
}

TEST_CASE("wave functions: recursion, direct sums and orthonormality") {
  auto ctx = ctx_bits(512);
  const double R = 4;
  const long L = 5;
  const std::size_t lmax = 6;
  for (double alpha : {0.0, 1.0 / 16}) {
    auto seq = verblunsky(lmax + 1, {R, alpha}, ctx);
    Window win{-L - 60, -L + long(lmax) + 60};
    auto wf = wavefunctions(lmax, L, win, seq, ctx);
    CHECK(wf.recursion_discrepancy >= 0);
    CHECK(wf.recursion_discrepancy < 1e-15);
    CHECK(wf.boundary_mass < 1e-30);
    if (alpha == 0) {
      CHECK(wf.three_point_residual >= 0);
      CHECK(wf.three_point_residual < 1e-15);
    } else {
      CHECK(wf.three_point_residual == -1);
    }
    PrecisionScope scope(512);
    for (std::size_t l = 0; l <= lmax; ++l)
      for (std::size_t m = 0; m <= lmax; ++m) {
        Real s = 0;
        for (long x = win.lo; x <= win.hi; ++x) s += wf.tables[l].at(x) * wf.tables[m].at(x);
        CHECK(to_double(abs(s - (l == m ? 1 : 0))) < 1e-20);
      }
    CHECK(to_double(wf.tables[0].at(win.hi + 1)) == 0.0);
  }
}

TEST_CASE("determinant as a Fredholm determinant of Bessel kernels") {
  auto ctx = ctx_bits(256);
  auto a = gcbo_check(4, {1, 0}, 40, ctx);
  CHECK(a.rel_error < 1e-10);
  CHECK(a.truncation_ok);
  auto b = gcbo_check(6, {2, 1.0 / 8}, 60, ctx);
  CHECK(b.rel_error < 1e-8);
  auto c = gcbo_check(6, {2, 1.0 / 8}, 2, ctx);
  CHECK_FALSE(c.truncation_ok);
}

TEST_CASE("Lax pair derivative identity") {
  auto ctx = ctx_bits(256);
  auto r0 = lax_residual(0, {2.0, 0.0}, {1, 0}, ctx);
  CHECK(r0.derivative < 1e-40);
  auto r3 = lax_residual(3, {2.0, 0.0}, {1, 0}, ctx);
  CHECK(r3.derivative < 1e-12);
  CHECK(r3.gamma < 1e-12);
  for (std::size_t n : {1u, 2u, 4u, 6u}) {
    auto r = lax_residual(n, {1.5, 0.5}, {1.3, 1.0 / 16}, ctx);
    CHECK(r.derivative < 1e-10);
    CHECK(r.gamma < 1e-10);
  }
  auto r8 = lax_residual(5, {-0.4, 1.1}, {0.8, 1.0 / 8}, ctx);
  CHECK(r8.derivative < 1e-10);
}

TEST_CASE("ratio asymptotics") {
  CHECK(std::abs(ratio_limit({2.0, 0.5}, 0.0) - std::complex<double>(2.0, 0.5)) < 1e-15);
  CHECK(std::abs(ratio_limit({2.0, 0.0}, std::sqrt(0.5)) - (1 + std::sqrt(5.0)) / std::sqrt(2.0)) < 1e-14);

  double prev = 1e9;
  for (double R : {24.0, 48.0, 96.0}) {
    auto ctx = ctx_bits(lattice_bits(R));
    auto s = ratio_check(std::size_t(R), {2.0, 0.0}, {R, 0}, ctx, VerblunskySource::recursion);
    double err = std::abs(s.finite - s.limit);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 0.05);
}
