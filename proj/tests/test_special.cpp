#include <doctest.h>

#include "ffedge/special.hpp"

#include <cmath>

using namespace ffedge;

namespace {

// sum_k s^k (x/2)^{2k+n} / (k! (k+n)!) with s = -1 for J_n and +1 for I_n, n >= 0
Real bessel_series(int n, double x, int sign) {
  PrecisionScope scope(256);
  Real half = Real(x) / 2;
  Real term = pow(half, n);
  for (int j = 1; j <= n; ++j) term /= j;
  Real sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= Real(sign) * half * half / Real(k * (k + n));
    sum += term;
  }
  return sum;
}

double classical_j(int n, double x) {
  if (n >= 0) return to_double(bessel_series(n, x, -1));
  return (n % 2 == 0 ? 1 : -1) * to_double(bessel_series(-n, x, -1));
}

}  // namespace

TEST_CASE("deformed Bessel trivial and classical values") {
  PrecisionContext ctx;
  CHECK(deformed_bessel({0, 0.0, 0.1}, ctx) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(deformed_bessel({1, 2.0, 0.0}, ctx) == doctest::Approx(0.5767248078).epsilon(1e-10));
  CHECK(deformed_bessel({1, 2.0, 0.0}, ctx) == doctest::Approx(classical_j(1, 2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(deformed_bessel({1, 2.0, 0.2}, ctx), ConfigError);
}

TEST_CASE("deformed Bessel at alpha = 0 matches the ascending series") {
  PrecisionContext ctx;
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    DeformedBesselTable<double> table(t, 0.0, -20, 20, ctx);
    for (int n = -20; n <= 20; ++n) CHECK(std::abs(table(n) - classical_j(n, t)) < 1e-12);
  }
}

TEST_CASE("deformed Bessel reflection relation") {
  PrecisionContext ctx;
  const double a = deformed_bessel({-3, 5.0, 1.0 / 16}, ctx);
  const double b = -deformed_bessel({3, 5.0, -1.0 / 16}, ctx);
  CHECK(a == doctest::Approx(b).epsilon(1e-13));
  CHECK(std::abs(a) > 1e-3);
}

TEST_CASE("deformed Bessel Parseval sum") {
  PrecisionContext ctx;
  for (double alpha : {0.0, 1.0 / 16, 1.0 / 8, -1.0 / 8}) {
    for (double t : {1.0, 10.0, 40.0}) {
      const long cut = static_cast<long>(2 * t + 40);
      DeformedBesselTable<double> table(t, alpha, -cut, cut, ctx);
      double s = 0;
      for (long n = -cut; n <= cut; ++n) s += table(n) * table(n);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("extended precision deformed Bessel table") {
  PrecisionScope scope(512);
  PrecisionContext ctx;
  ctx.bits = 512;
  DeformedBesselTable<Real> table(Real(2), Real(0), 0, 30, ctx);
  for (int n = 0; n <= 30; ++n) {
    Real want = bessel_series(n, 2.0, -1);  // 256-bit oracle
    CHECK(to_double(abs(table(n) - want)) < 1e-70);
  }
}

TEST_CASE("weight moments") {
  PrecisionContext ctx;
  ctx.bits = 256;
  CHECK(to_double(weight_moment(0, 1, 0, ctx)) == doctest::Approx(2.2795853023).epsilon(1e-10));
  CHECK(to_double(weight_moment(1, 1, 0, ctx)) == doctest::Approx(1.5906368546).epsilon(1e-10));
  for (int n = 0; n < 12; ++n)
    CHECK(to_double(abs(weight_moment(n, 1, 0, ctx) - bessel_series(n, 2.0, +1))) < 1e-70);
  CHECK(to_double(abs(weight_moment(4, 3, 0.125, ctx) - weight_moment(-4, 3, 0.125, ctx))) == 0.0);
  CHECK_THROWS_AS(weight_moment(0, 0, 0, ctx), ConfigError);
}

TEST_CASE("weight moments decay monotonically past the band edge") {
  PrecisionScope scope(256);
  PrecisionContext ctx;
  ctx.bits = 256;
  for (double alpha : {0.0, 1.0 / 16, 1.0 / 8}) {
    const double R = 4;
    WeightMomentTable<Real> m(Real(2 * R), Real(alpha), 80, ctx);
    const long start = static_cast<long>(std::ceil(2 * R * (1 + 2 * alpha)));
    for (long n = start; n < 80; ++n) CHECK(m(n + 1) < m(n));
    CHECK(to_double(m(80) / m(0)) < 1e-40);
  }
}

TEST_CASE("classical Airy function from the ray quadrature") {
  PrecisionContext ctx;
  const double ai0 = std::pow(3.0, -2.0 / 3) / std::tgamma(2.0 / 3);
  CHECK(higher_airy(0, {1}, ctx) == doctest::Approx(ai0).epsilon(1e-12));
  CHECK(higher_airy(0, {1}, ctx) == doctest::Approx(0.3550280539).epsilon(1e-9));
  CHECK(higher_airy(1, {1}, ctx) == doctest::Approx(0.1352924163).epsilon(1e-9));
}

TEST_CASE("Maclaurin oracle values") {
  CHECK(airy_maclaurin(0).ai == doctest::Approx(std::pow(3.0, -2.0 / 3) / std::tgamma(2.0 / 3)).epsilon(1e-15));
  CHECK(airy_maclaurin(0).aip == doctest::Approx(-std::pow(3.0, -1.0 / 3) / std::tgamma(1.0 / 3)).epsilon(1e-15));
  CHECK(airy_maclaurin(1).ai == doctest::Approx(0.1352924163).epsilon(1e-9));
}

TEST_CASE("ray quadrature agrees with the Maclaurin series on [-5, 5]") {
  HigherAiry ai({1}, -5, 5);
  for (int i = 0; i <= 100; ++i) {
    const double s = -5 + 0.1 * i;
    const double want = airy_maclaurin(s).ai;
    CHECK(std::abs(ai(s) - want) < 1e-10);
  }
}

TEST_CASE("fifth-order Airy function at the origin") {
  PrecisionContext ctx;
  ctx.rel_tol = 1e-12;
  const double coarse = HigherAiry({2}, 0, 0, 1e-8)(0);
  const double fine = higher_airy(0, {2}, ctx);
  CHECK(std::abs(coarse - fine) < 1e-8);
  const double closed = std::tgamma(1.2) * std::pow(5.0, 0.2) * std::cos(M_PI / 10) / M_PI;
  CHECK(fine == doctest::Approx(closed).epsilon(1e-10));
}

TEST_CASE("Airy scaling of the deformed Bessel function") {
  PrecisionContext ctx;
  auto a = airy_scaling_check(2000, 0, 0, ctx);
  CHECK(std::abs(a.rescaled - a.limit) < 1e-2);
  auto b = airy_scaling_check(2000, 6, 0, ctx);
  CHECK(std::abs(b.rescaled) < 1e-4);
  CHECK(std::abs(b.limit) < 1e-4);
  auto c = airy_scaling_check(2000, 0, 0.125, ctx);
  CHECK(std::abs(c.rescaled - c.limit) < 5e-2);
  CHECK(c.index == 1500);
}
