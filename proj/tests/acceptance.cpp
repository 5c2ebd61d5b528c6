// Acceptance criteria 1-12. Usage: acceptance [N ...]; no argument runs all.
#include "ffedge/hydro.hpp"
#include "ffedge/lattice.hpp"
#include "ffedge/limitkernels.hpp"
#include "ffedge/opuc.hpp"
#include "ffedge/special.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

using namespace ffedge;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PrecisionContext double_ctx() {
  PrecisionContext c;
  c.rel_tol = 1e-12;
  return c;
}

std::vector<double> range(double a, double b, double h) {
  std::vector<double> v;
  for (double x = a; x <= b + 1e-12; x += h) v.push_back(x);
  return v;
}

// least squares y = a + b x
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {(sy - b * sx) / n, b};
}

Verdict criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  PrecisionContext ctx;
  ctx.bits = 512;
  ctx.rel_tol = 1e-30;
  double worst = 0;
  for (double R : {2.0, 4.0})
    for (long L : {1L, 3L})
      for (double alpha : {0.0, 0.0625, 0.125}) {
        ModelParams p{alpha, R, L};
        const long w = static_cast<long>(3 * R);
        Window win{-w, w};
        auto ref = correlator_toeplitz(p, 0, win, ctx);
        for (auto m : {CorrelatorMethod::opuc_sum, CorrelatorMethod::contour, CorrelatorMethod::fredholm}) {
          auto c = correlator(m, p, win, ctx);
          PrecisionScope scope(512);
          for (long i = 0; i < ref.values.rows(); ++i)
            for (long j = 0; j < ref.values.cols(); ++j) {
              const Real a = ref.values(i, j), b = c.values(i, j);
              const Real scale = std::max(Real(abs(a)), Real(abs(b)));
              if (scale > Real("1e-100")) worst = std::max(worst, to_double(abs(a - b) / scale));
            }
        }
      }
  const double secs = seconds_since(t0);
  return {worst < 1e-18 && secs < 60, fmt("max relative gap %.3e (tol 1e-18), %.1f s (limit 60 s)", worst, secs)};
}

Verdict criterion_2() {
  double number = 0, spill = 0, sym = 0;
  for (double R : {4.0, 8.0})
    for (double alpha : {0.0, 0.0625, 0.125}) {
      ModelParams p = ModelParams::from_lambda(0.75, alpha, R);
      auto ctx = lattice_context(R, 1e-30);
      for (double y : {0.0, R / 2}) {
        auto c = correlator_toeplitz(p, y, default_window(p), ctx);
        PrecisionScope scope(ctx.bits);
        Real total = 0;
        for (long x = c.window.lo; x <= c.window.hi; ++x) total += c.at(x, x);
        number = std::max(number, std::abs(to_double(total) - p.N()));
        if (y != 0) continue;
        const long W = c.values.rows();
        Eigen::MatrixXd a(W, W);
        for (long i = 0; i < W; ++i)
          for (long j = 0; j < W; ++j) {
            a(i, j) = to_double(c.values(i, j));
            sym = std::max(sym, to_double(abs(c.values(i, j) - c.values(j, i))));
            sym = std::max(sym, to_double(abs(c.values(i, j) - c.values(W - 1 - i, W - 1 - j))));
          }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
        spill = std::max({spill, -es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff() - 1});
      }
    }
  return {number < 1e-10 && spill <= 1e-10 && sym < 1e-14,
          fmt("|sum n - N| %.2e, eigenvalue spill %.2e, symmetry %.2e", number, spill, sym)};
}

Verdict criterion_3() {
  PrecisionContext ctx;
  ctx.bits = 256;
  double worst = 0;
  bool truncation = true;
  for (double R : {0.5, 1.0, 2.0})
    for (double alpha : {0.0, 0.125})
      for (std::size_t n = 1; n <= 6; ++n) {
        auto r = gcbo_check(n, {R, alpha}, 60, ctx);
        worst = std::max(worst, r.rel_error);
        truncation = truncation && r.truncation_ok;
      }
  return {worst < 1e-10 && truncation, fmt("max relative error %.3e (tol 1e-10)", worst)};
}

Verdict criterion_4() {
  PrecisionContext ctx;
  ctx.bits = 256;
  ctx.rel_tol = 1e-10;
  double worst = 0;
  for (double R : {0.5, 1.0, 2.0, 4.0})
    for (double alpha : {0.0, 0.0625, 0.125}) {
      auto seq = verblunsky(24, {R, alpha}, ctx, VerblunskySource::determinant_ratio);
      worst = std::max(worst, seq.max_residual);
    }
  return {worst < 1e-10, fmt("max dPII residual %.3e (tol 1e-10)", worst)};
}

// support boundaries of the analytic profile, for the excluded edge windows
std::vector<double> edge_points(const HydroParams& h) {
  std::vector<double> pts{upsilon(0, h)};
  if (h.above_critical()) pts.push_back(upsilon(M_PI, h));
  if (std::abs(h.lambda() - h.lambda_c()) < 1e-12) pts.push_back(0);
  return pts;
}

Verdict criterion_5() {
  const double R = 64;
  std::string detail;
  bool pass = true;
  const std::pair<double, double> cases[] = {{0.0625, 0.75}, {0.0625, 0.875}, {0.125, 0.625}, {0.125, 0.75}};
  for (auto [alpha, lambda] : cases) {
    ModelParams p = ModelParams::from_lambda(lambda, alpha, R);
    HydroParams h(p.lambda(), alpha);
    // lambda = lambda_c up to the rounding of L
    const bool critical = std::abs(lambda - h.lambda_c()) < 1e-12;
    auto pts = edge_points(h);
    if (critical) pts.push_back(0);
    ToeplitzDensity td(p, lattice_context(R));
    const long xm = static_cast<long>(std::ceil((upsilon(0, h) + 0.3) * R));
    auto rho = td.density(0, {-xm, xm});
    double worst = 0;
    for (long x = -xm; x <= xm; ++x) {
      const double X = x / R;
      bool excluded = false;
      for (double e : pts) excluded = excluded || std::abs(std::abs(X) - e) <= 0.1;
      if (excluded) continue;
      worst = std::max(worst, std::abs(to_double(rho[x + xm]) - density(X, h)));
    }
    pass = pass && worst < 0.05;
    detail += fmt("a=%.4g l=%.4g: %.4f; ", alpha, lambda, worst);
  }
  return {pass, detail + "(tol 0.05)"};
}

Verdict criterion_6() {
  std::vector<double> lx, ly16, ly8;
  for (double lg = -4; lg <= -2 + 1e-12; lg += 0.1) {
    const double X = std::pow(10.0, lg);
    lx.push_back(std::log(X));
    ly16.push_back(std::log(1 - density(X, HydroParams(0.875, 0.0625))));
    ly8.push_back(std::log(1 - density(X, HydroParams(0.75, 0.125))));
  }
  const double b16 = line_fit(lx, ly16).second;
  const double b8 = line_fit(lx, ly8).second;
  // amplitude of the X^{1/4} term: least squares of 1 - rho against X^{1/4}
  double num = 0, den = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double q = std::exp(0.25 * lx[i]);
    num += q * std::exp(ly8[i]);
    den += q * q;
  }
  const double amp = num / den, target = std::pow(8.0, 0.25) / M_PI;
  const double amp_err = std::abs(amp / target - 1);
  return {std::abs(b16 - 0.5) <= 0.01 && std::abs(b8 - 0.25) <= 0.01 && amp_err <= 0.02,
          fmt("exponents %.4f (0.50), %.4f (0.25); ", b16, b8) + fmt("amplitude %.4f vs %.4f", amp, target)};
}

Verdict criterion_7() {
  const double R = 64;
  auto dctx = double_ctx();
  auto scan = partition_scan(R, 0, 140, lattice_context(R));
  double worst = 0;
  for (double sg : {-1.0, 0.0, 1.0}) {
    const auto N = static_cast<std::size_t>(std::floor(2 * R + sg * std::cbrt(R)));
    worst = std::max(worst, std::abs(scan.z_tilde(N) - tw_distribution(sg, 1, dctx).value));
  }
  auto scan8 = partition_scan(R, 0.125, 110, lattice_context(R));
  const auto N8 = static_cast<std::size_t>(std::floor(1.5 * R));
  const double higher = std::abs(scan8.z_tilde(N8) - tw_distribution(0, 2, dctx).value);
  return {worst < 0.02 && higher < 0.05, fmt("alpha=0: %.4f (tol 0.02); alpha=1/8 m=2: %.4f (tol 0.05)", worst, higher)};
}

Verdict criterion_8() {
  const double R = 64;
  auto dctx = double_ctx();
  double worst = 0;
  for (double alpha : {0.0, 0.0625, 0.125}) {
    auto scan = partition_scan(R, alpha, static_cast<std::size_t>(2 * R), lattice_context(R));
    for (double lambda : {0.25, 0.5, 0.625, 0.75, 0.875, 1.0}) {
      const auto N = static_cast<std::size_t>(std::lround(2 * lambda * R));
      worst = std::max(worst, std::abs(scan.free_energy(N) - free_energy(lambda, alpha, dctx)));
    }
  }
  std::string detail = fmt("finite-size gap %.2e (tol 1e-3); ", worst);
  bool pass = worst < 1e-3;
  for (double alpha : {0.0, 0.0625}) {
    const double lc = 1 - 2 * alpha;
    std::vector<double> dx, fy;
    for (double d = 1e-3; d <= 1e-2 + 1e-12; d += 1e-3) {
      dx.push_back(d * d * d);
      fy.push_back(free_energy(lc - d, alpha, dctx));
    }
    // f = c d^3 + O(d^4): slope of f against d^3 through the origin
    double num = 0, den = 0;
    for (std::size_t i = 0; i < dx.size(); ++i) {
      num += dx[i] * fy[i];
      den += dx[i] * dx[i];
    }
    const double c = num / den, target = 1 / (6 * (1 - 8 * alpha));
    pass = pass && std::abs(c / target - 1) < 0.05;
    detail += fmt("a=%.4g cubic %.5f vs %.5f; ", alpha, c, target);
  }
  std::vector<double> lx, ly;
  for (double lg = -3; lg <= -2 + 1e-12; lg += 0.1) {
    const double d = std::pow(10.0, lg);
    lx.push_back(std::log(d));
    ly.push_back(std::log(free_energy(0.75 - d, 0.125, dctx)));
  }
  const double slope = line_fit(lx, ly).second;
  pass = pass && std::abs(slope - 2.5) <= 0.02;
  return {pass, detail + fmt("a=1/8 exponent %.4f (2.5 +- 0.02)", slope)};
}

Verdict criterion_9() {
  auto dctx = double_ctx();
  std::vector<double> xs, ys;
  for (long L : {64L, 128L, 256L}) {
    auto setup = center_edge_at_L(EdgeKind::tacnode, 0, L, 0, {0.0});
    auto sample = edge_rescaled_correlator(setup, lattice_context(setup.params.R));
    xs.push_back(std::pow(static_cast<double>(L), -1.0 / 3));
    ys.push_back(sample.values(0, 0));
  }
  const bool monotone = (ys[0] < ys[1] && ys[1] < ys[2]) || (ys[0] > ys[1] && ys[1] > ys[2]);
  const double intercept = line_fit(xs, ys).first;
  auto k = tacnode_kernel(0, 0, {1, 0}, dctx);
  const double rel = std::abs(intercept / k.value - 1);
  double decouple = 0;
  const auto s = range(-4, 4, 0.25);
  auto table = kernel_table({1, 2}, s, dctx);
  for (std::size_t i = 0; i < s.size(); ++i)
    decouple = std::max(decouple, std::abs(table.values(i, i) - two_airy_sum(s[i], s[i], 2, 1, dctx)));
  return {monotone && rel < 0.02 && k.discrepancy < 1e-6 && decouple < 1e-3,
          fmt("center %.6f %.6f %.6f, ", ys[0], ys[1], ys[2]) +
              fmt("intercept %.6f vs K_tac %.10f (doubling %.1e), ", intercept, k.value, k.discrepancy) +
              fmt("rel %.4f (tol 0.02); sigma=2 decoupling %.2e (tol 1e-3)", rel, decouple)};
}

Verdict criterion_10() {
  auto dctx = double_ctx();
  const auto s = range(-3, 3, 0.25);
  bool pass = true;
  std::string detail;
  for (double sigma : {0.0, -2.0}) {
    double dev[2];
    int k = 0;
    for (long L : {64L, 256L}) {
      auto setup = center_edge_at_L(EdgeKind::higher_tacnode, 0.125, L, sigma, s);
      auto sample = edge_rescaled_correlator(setup, lattice_context(setup.params.R));
      auto table = kernel_table({2, setup.scaling.sigma_effective}, sample.s_effective, dctx);
      double gap = 0, top = 0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        gap = std::max(gap, std::abs(sample.values(i, i) - table.values(i, i)));
        top = std::max(top, std::abs(table.values(i, i)));
      }
      dev[k++] = gap / top;
    }
    pass = pass && dev[1] <= 0.1 && dev[1] < dev[0];
    detail += fmt("sigma=%g: dev L=64 %.4f, L=256 %.4f; ", sigma, dev[0], dev[1]);
  }
  return {pass, detail + "(tol 0.1 at L=256, decreasing)"};
}

Verdict criterion_11() {
  PrecisionContext ctx;
  ctx.bits = 256;
  double worst[3] = {0, 0, 0};
  const double alphas[3] = {0, 0.0625, 0.125};
  for (int a = 0; a < 3; ++a)
    for (double s : range(-2, 2, 0.25)) {
      auto r = airy_scaling_check(2000, s, alphas[a], ctx);
      worst[a] = std::max(worst[a], std::abs(r.rescaled - r.limit_effective));
    }
  return {worst[0] < 1e-2 && worst[1] < 1e-2 && worst[2] < 5e-2,
          fmt("alpha=0 %.4f, alpha=1/16 %.4f (tol 1e-2); ", worst[0], worst[1]) +
              fmt("alpha=1/8 %.4f (tol 5e-2)", worst[2])};
}

Verdict criterion_12() {
  auto dctx = double_ctx();
  QuenchTable q(400, 400, 200, dctx);
  double profile = 0;
  for (long x = -200; x <= 200; ++x) {
    const double X = std::abs(x / 400.0);
    profile = std::max(profile, std::abs(q.density(x) - std::acos(X - 1) / M_PI));
  }
  const double t = 2000, scale = std::cbrt(t / 2);
  QuenchTable c(t, static_cast<long>(t), 40, dctx);
  double center = 0;
  for (double s : range(-2, 2, 0.25)) {
    const long x = std::lround(s * scale);
    const double se = x / scale;
    center = std::max(center, std::abs(scale * c.hole(x, x) - two_airy_sum(se, se, 0, 1, dctx)));
  }
  return {profile < 0.02 && center < 5e-2, fmt("profile %.4f (tol 0.02); center %.4f (tol 5e-2)", profile, center)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Verdict()>> criteria = {criterion_1, criterion_2,  criterion_3,  criterion_4,
                                                          criterion_5, criterion_6,  criterion_7,  criterion_8,
                                                          criterion_9, criterion_10, criterion_11, criterion_12};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 12; ++i) which.push_back(i);
  int failed = 0;
  for (int n : which) {
    if (n < 1 || n > 12) {
      std::printf("acceptance_%02d FAIL no such criterion\n", n);
      ++failed;
      continue;
    }
    Verdict v{false, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = criteria[n - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("acceptance_%02d %s %s [%.1f s]\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
