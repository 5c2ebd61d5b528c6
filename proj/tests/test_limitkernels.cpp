#include <doctest.h>

#include "ffedge/lattice.hpp"
#include "ffedge/limitkernels.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

using namespace ffedge;

namespace {

PrecisionContext dctx() {
  PrecisionContext c;
  c.rel_tol = 1e-12;
  return c;
}

// composite Simpson on [0, b] with n panels
template <class F>
double simpson(F&& f, double b, int n) {
  const double h = b / n;
  double s = f(0.0) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(i * h);
  return s * h / 3;
}

double ai(double x) { return boost::math::airy_ai(x); }

}  // namespace

TEST_CASE("shifted airy kernel") {
  auto ctx = dctx();
  auto a = airy_kernel(0.3, -0.7, {1, 0}, ctx);
  auto b = airy_kernel(-0.7, 0.3, {1, 0}, ctx);
  CHECK(std::abs(a.value - b.value) < 1e-14);
  CHECK(a.warnings.empty());
  auto d = airy_kernel(0, 0, {1, 0}, ctx);
  CHECK(std::abs(d.value - airy_kernel_cd(0, 0, 0)) < 1e-10);
  // K_Ai(0, 0) = Ai'(0)^2
  CHECK(d.value == doctest::Approx(std::pow(boost::math::airy_ai_prime(0.0), 2)).epsilon(1e-12));
  CHECK(std::abs(airy_kernel(1.5, -0.4, {1, -1}, ctx).value - airy_kernel_cd(1.5, -0.4, -1)) < 1e-10);

  // Cauchy-Schwarz against the diagonal at the smallest shifted argument
  const double bound = airy_kernel_cd(-2, -2, 10);
  CHECK(bound < 1e-8);
  for (double s = -2; s <= 2; s += 0.5)
    for (double sp = -2; sp <= 2; sp += 0.5) CHECK(std::abs(airy_kernel(s, sp, {1, 10}, ctx).value) <= bound * (1 + 1e-9));

  auto h = airy_kernel(0.4, -0.9, {2, 0}, ctx);
  CHECK(h.value == doctest::Approx(airy_kernel(-0.9, 0.4, {2, 0}, ctx).value).epsilon(1e-13));
  CHECK_THROWS_AS(airy_kernel(0, 0, {0, 0}, ctx), ConfigError);
}

TEST_CASE("airy kernel tables are contractions") {
  auto ctx = dctx();
  std::vector<double> s;
  for (int i = 0; i <= 24; ++i) s.push_back(-3 + 0.25 * i);
  for (int m : {1, 2}) {
    auto K = airy_kernel_table({m, 0}, s, ctx);
    CHECK((K - K.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    // Nystrom matrix with the uniform weight h is the discretised operator
    Eigen::MatrixXd A = 0.25 * K;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK(es.eigenvalues().maxCoeff() < 1 + 1e-10);
  }
}

TEST_CASE("tracy-widom distribution") {
  auto ctx = dctx();
  auto f0 = tw_distribution(0, 1, ctx);
  // oracle: generic Nystrom driver on the CD form of the kernel
  KernelFn cd = [](double x, double y) {
    if (x == y) return std::pow(boost::math::airy_ai_prime(x), 2) - x * ai(x) * ai(x);
    return (ai(x) * boost::math::airy_ai_prime(y) - boost::math::airy_ai_prime(x) * ai(y)) / (x - y);
  };
  auto oracle = fredholm_det(cd, {0, INFINITY}, 16, ctx);
  CHECK(std::abs(f0.value - oracle.value) < 1e-10);
  auto f2 = tw_distribution(2, 1, ctx), f4 = tw_distribution(4, 1, ctx);
  CHECK(f0.value < f2.value);
  CHECK(f2.value < f4.value);
  CHECK(std::abs(tw_distribution(8, 1, ctx).value - 1) < 1e-10);
  CHECK(tw_distribution(INFINITY, 2, ctx).value == 1.0);
  double prev = 0;
  for (double sg : {-3.0, -1.5, 0.0, 1.5, 3.0}) {
    auto v = tw_distribution(sg, 2, ctx);
    CHECK(v.value > prev);
    CHECK(v.value < 1);
    prev = v.value;
  }
  CHECK_THROWS_AS(tw_distribution(0, 3, ctx), ConfigError);
}

TEST_CASE("ancillary function") {
  auto ctx = dctx();
  auto brute = [&](int n) { return ai(0) - simpson([&](double v) { return ai(v) * ai(std::cbrt(2.0) * v); }, 16, n); };
  CHECK(std::abs(brute(4000) - brute(8000)) < 1e-10);
  auto a = a_function(0, 0, {1, 0}, ctx);
  CHECK(std::abs(a.value - brute(8000)) < 1e-8);

  HigherAiry f5({2}, -1, 20);
  const double k1 = std::pow(2.0, 0.2);
  auto brute5 = [&](int n) { return f5(0) - simpson([&](double v) { return f5(v) * f5(k1 * v); }, 16, n); };
  CHECK(std::abs(brute5(4000) - brute5(8000)) < 1e-10);
  CHECK(std::abs(a_function(0, 0, {2, 0}, ctx).value - brute5(8000)) < 1e-8);

  CHECK(std::abs(a_function(0.5, 0.3, {1, 12}, ctx).value) < 1e-8);
  CHECK(std::abs(a_function(0.5, 0.3, {2, 30}, ctx).value) < 1e-8);
  CHECK_THROWS_AS(a_function(0, -1, {1, 0}, ctx), ConfigError);
}

TEST_CASE("tacnode kernel") {
  auto ctx = dctx();
  SUBCASE("symmetries") {
    for (int m : {1, 2}) {
      TacnodeKernel K({m, 0}, -1.2, 1.2, ctx, 128);
      const double k = K(0.5, -1.2);
      CHECK(std::abs(k - K(-1.2, 0.5)) < 1e-8);
      CHECK(std::abs(k - K(-0.5, 1.2)) < 1e-8);
    }
  }
  SUBCASE("resolution doubling at the origin") {
    auto v = tacnode_kernel(0, 0, {1, 0}, ctx);
    CHECK(v.discrepancy < 1e-6);
    CHECK(v.warnings.empty());
    auto v5 = tacnode_kernel(0, 0, {2, 0}, ctx);
    CHECK(v5.discrepancy < 1e-6);
    CHECK(v5.value > 0);
  }
  SUBCASE("repulsive limit decouples into two airy kernels") {
    TacnodeKernel K({1, 6}, -2, 2, ctx, 128);
    for (double s = -2; s <= 2; s += 1)
      for (double sp = -2; sp <= 2; sp += 1) CHECK(std::abs(K(s, sp) - two_airy_sum(s, sp, 6, 1, ctx)) < 1e-4);
  }
  SUBCASE("diagonal is nonnegative") {
    std::vector<double> s;
    for (int i = 0; i <= 32; ++i) s.push_back(-4 + 0.25 * i);
    for (double sg : {-2.0, 0.0, 2.0}) {
      auto t = kernel_table({1, sg}, s, ctx);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(t.values(i, i) > -1e-10);
      CHECK(t.discrepancy < 1e-6);
      CHECK(t.spectral_radius < 1);
    }
  }
  SUBCASE("generic order formulas at m = 1") {
    for (double sg : {-1.0, 0.0, 2.0}) {
      TacnodeKernel classic({1, sg}, -2, 2, ctx, 96);
      TacnodeKernel generic({1, sg}, -2, 2, ctx, 96, 16, true);
      for (double s : {-2.0, -0.5, 0.0, 1.3})
        for (double sp : {-1.0, 0.0, 2.0}) CHECK(std::abs(classic(s, sp) - generic(s, sp)) < 1e-10);
    }
  }
  SUBCASE("resolvent consistency") {
    TacnodeKernel K({2, -1}, -2, 2, ctx, 96);
    auto a = K.a_vector(0.7);
    auto z = K.resolved(a);
    auto rule = gauss_legendre(96, 0, 16);
    HigherAiry f({2}, -10, 40);
    const double c2 = std::pow(2.0, 0.8);
    Eigen::VectorXd back = z;
    for (int i = 0; i < 96; ++i)
      for (int j = 0; j < 96; ++j) {
        double kij = 0;
        for (int k = 0; k < 96; ++k)
          kij += rule.weights[k] * f(rule.nodes[i] + rule.nodes[k] - c2) * f(rule.nodes[j] + rule.nodes[k] - c2);
        back(i) -= kij * rule.weights[j] * z(j);
      }
    CHECK((back - a).norm() < 1e-10 * a.norm());
  }
  SUBCASE("tables") {
    auto one = kernel_table({1, 0.5}, {0.3}, ctx);
    CHECK(one.values(0, 0) == doctest::Approx(tacnode_kernel(0.3, 0.3, {1, 0.5}, ctx).value).epsilon(1e-12));
    std::vector<double> s{-1.5, -0.5, 0.0, 0.5, 1.5};
    auto t1 = kernel_table({2, 0}, s, ctx, 1);
    auto t2 = kernel_table({2, 0}, s, ctx, 2);
    CHECK((t1.values - t2.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t1.values - t1.values.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    CHECK_THROWS_AS(kernel_table({3, 0}, s, ctx), ConfigError);
    CHECK_THROWS_AS(kernel_table({1, 0}, {}, ctx), ConfigError);
  }
}

TEST_CASE("partition function approaches the tracy-widom value") {
  PrecisionContext ctx = lattice_context(32);
  const double R = 32;
  auto scan = partition_scan(R, 0, 80, ctx);
  for (double sg : {-1.0, 0.0, 1.0}) {
    const auto N = static_cast<std::size_t>(std::floor(2 * R + sg * std::cbrt(R)));
    // compare at the sigma implied by the integer N
    const double s_eff = (static_cast<double>(N) - 2 * R) / std::cbrt(R);
    CHECK(std::abs(scan.z_tilde(N) - tw_distribution(s_eff, 1, dctx()).value) < 0.01);
  }
}
