#include "ffedge/limitkernels.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace ffedge {

namespace {

constexpr double kTruncation = 16;

PrecisionContext double_context(const PrecisionContext& ctx) {
  PrecisionContext d = ctx;
  d.rel_tol = std::max(ctx.rel_tol, 1e-12);
  return d;
}

double abs_tol(const PrecisionContext& ctx) { return std::max(ctx.rel_tol, 1e-13); }

void check_m(int m) {
  if (m < 1 || m > 2) throw ConfigError("limit kernels: order m must be 1 or 2");
}

// 2^{1/q} and 2^{2m/q}
double c1_of(int m) { return std::pow(2.0, 1.0 / (2 * m + 1)); }
double c2_of(int m) { return std::pow(2.0, 2.0 * m / (2 * m + 1)); }

// int_0^V F(a+v) F(b+v) dv at n nodes
double product_integral(const AiryFunction& f, double a, double b, double V, std::size_t n) {
  auto r = gauss_legendre(n, 0, V);
  return r.integrate([&](double v) { return f(a + v) * f(b + v); });
}

// upper limit so that both arguments pass the truncation point
double upper_limit(double lo) { return std::max(kTruncation, kTruncation - lo); }

KernelValue doubled_product(const AiryFunction& f, double a, double b, const PrecisionContext& ctx) {
  KernelValue out;
  const double V = upper_limit(std::min(a, b));
  const double tol = abs_tol(ctx);
  double prev = product_integral(f, a, b, V, 32);
  for (std::size_t n = 64; n <= 4096; n *= 2) {
    const double next = product_integral(f, a, b, V, n);
    out.discrepancy = std::abs(next - prev);
    out.value = next;
    if (out.discrepancy <= tol) break;
    prev = next;
  }
  if (out.discrepancy > tol) out.warnings.push_back("airy kernel: node doubling did not settle");
  out.tail = std::max(std::abs(f(a + V)), std::abs(f(b + V)));
  if (out.tail > tol) out.warnings.push_back("airy kernel: tail above tolerance");
  return out;
}

template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

void AiryFamily::validate() const {
  if (m < 1) throw ConfigError("airy family: m must be positive");
  if (!std::isfinite(sigma)) throw ConfigError("airy family: sigma must be finite");
}

void TacnodeParams::validate() const {
  check_m(m);
  if (!std::isfinite(sigma)) throw ConfigError("tacnode: sigma must be finite");
}

double airy_ai(double s) { return boost::math::airy_ai(s); }
double airy_ai_prime(double s) { return boost::math::airy_ai_prime(s); }

AiryFunction::AiryFunction(int m, double s_min, double s_max, bool generic) : m_(m) {
  HigherAiryOrder order{m};
  order.validate();
  if (m > 1 || generic) higher_.emplace(order, s_min, s_max, 1e-14);
}

double AiryFunction::operator()(double s) const { return higher_ ? (*higher_)(s) : airy_ai(s); }

KernelValue airy_kernel(double s, double sp, const AiryFamily& fam, const PrecisionContext& ctx) {
  fam.validate();
  const double a = s + fam.sigma, b = sp + fam.sigma;
  const double lo = std::min(a, b);
  AiryFunction f(fam.m, lo, std::max(a, b) + upper_limit(lo));
  KernelValue out = doubled_product(f, a, b, ctx);
  if (fam.m == 1) {
    out.cd_gap = std::abs(out.value - airy_kernel_cd(s, sp, fam.sigma));
    if (out.cd_gap > 1e-10) out.warnings.push_back("airy kernel: quadrature and CD forms disagree");
  }
  return out;
}

double airy_kernel_cd(double s, double sp, double sigma) {
  const double a = s + sigma, b = sp + sigma;
  const AiryPair pa = airy_maclaurin(a);
  if (a == b) return pa.aip * pa.aip - a * pa.ai * pa.ai;
  const AiryPair pb = airy_maclaurin(b);
  return (pa.ai * pb.aip - pa.aip * pb.ai) / (a - b);
}

FredholmResult tw_distribution(double sigma, int m, const PrecisionContext& ctx) {
  check_m(m);
  if (std::isinf(sigma) && sigma > 0) return FredholmResult{1.0, 0, 0, 0, {}};
  if (!std::isfinite(sigma)) throw ConfigError("tw_distribution: sigma must be finite or +inf");
  const double X = upper_limit(sigma);
  AiryFunction f(m, sigma, sigma + 2 * X);
  const double tol = abs_tol(ctx);
  auto det_at = [&](std::size_t n) {
    auto rule = gauss_legendre(n, 0, X);
    Eigen::MatrixXd b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) b(i, k) = f(rule.nodes[i] + sigma + rule.nodes[k]);
    Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), n);
    Eigen::MatrixXd K = b * w.asDiagonal() * b.transpose();
    return fredholm_det(KernelGrid{rule, K});
  };
  FredholmResult out;
  out.upper = X;
  double prev = det_at(24);
  for (std::size_t n = 48; n <= 768; n *= 2) {
    const double next = det_at(n);
    out.discrepancy = std::abs(next - prev);
    out.value = next;
    out.nodes = n;
    if (out.discrepancy <= tol) break;
    prev = next;
  }
  if (out.discrepancy > tol) throw NumericalError(NumericalFailure::non_convergence, "tw_distribution: node doubling stalled");
  const double tail = std::abs(f(sigma + X));
  if (tail * tail > tol) out.warnings.push_back("tw_distribution: kernel tail above tolerance");
  return out;
}

KernelValue a_function(double s, double u, const TacnodeParams& p, const PrecisionContext& ctx) {
  p.validate();
  if (!(u >= 0)) throw ConfigError("a_function: u must be nonnegative");
  const double c1 = c1_of(p.m), c2 = c2_of(p.m), sg = p.sigma, T = kTruncation;
  const double head = s + c1 * u + sg;
  const double lo = std::min({head, u + c2 * sg, -s + sg});
  const double hi = std::max({head, u + T + c2 * sg, -s + c1 * T + sg});
  AiryFunction f(p.m, lo, hi);
  auto integral = [&](std::size_t n) {
    auto r = gauss_legendre(n, 0, T);
    return r.integrate([&](double v) { return f(u + v + c2 * sg) * f(-s + c1 * v + sg); });
  };
  KernelValue out;
  const double tol = abs_tol(ctx);
  double prev = integral(32);
  for (std::size_t n = 64; n <= 4096; n *= 2) {
    const double next = integral(n);
    out.discrepancy = std::abs(next - prev);
    out.value = f(head) - next;
    if (out.discrepancy <= tol) break;
    prev = next;
  }
  out.tail = std::abs(f(u + T + c2 * sg) * f(-s + c1 * T + sg));
  if (out.tail > tol) out.warnings.push_back("a_function: v-integral tail above tolerance");
  if (out.discrepancy > tol) out.warnings.push_back("a_function: node doubling did not settle");
  return out;
}

namespace {

struct TacRange {
  double lo, hi, first_upper;
};

TacRange tac_range(const TacnodeParams& p, double s_min, double s_max, double T) {
  const double c1 = c1_of(p.m), c2 = c2_of(p.m), sg = p.sigma;
  const double V1 = T + std::max(0.0, s_max - sg);
  return {std::min({s_min + sg, c2 * sg, -s_max + sg}),
          std::max({s_max + c1 * T + sg, 2 * T + c2 * sg, -s_min + c1 * T + sg, V1 + sg - s_min}), V1};
}

}  // namespace

TacnodeKernel::TacnodeKernel(const TacnodeParams& p, double s_min, double s_max, const PrecisionContext& ctx,
                             std::size_t nodes, double truncation, bool generic)
    : p_(p),
      c1_(c1_of(p.m)),
      c2_(c2_of(p.m)),
      rule_(gauss_legendre(nodes, 0, truncation)),
      first_(gauss_legendre(nodes, 0, tac_range(p, s_min, s_max, truncation).first_upper)),
      f_(p.m, tac_range(p, s_min, s_max, truncation).lo, tac_range(p, s_min, s_max, truncation).hi, generic) {
  p.validate();
  if (s_max < s_min) throw ConfigError("tacnode: empty s-range");
  const auto n = static_cast<Eigen::Index>(nodes);
  b_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k <= i; ++k) b_(i, k) = b_(k, i) = f_(rule_.nodes[i] + rule_.nodes[k] + c2_ * p.sigma);
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule_.weights.data(), n);
  Eigen::MatrixXd K = b_ * w.asDiagonal() * b_.transpose();
  resolvent_.emplace(KernelGrid{rule_, K}, double_context(ctx));
  const double T = truncation;
  tail_ = std::max({std::abs(f_(T + c2_ * p.sigma)), std::abs(f_(c1_ * T + p.sigma - s_max)),
                    std::abs(f_(first_.domain.b + p.sigma - s_max))});
}

Eigen::VectorXd TacnodeKernel::a_vector(double s) const {
  const auto n = static_cast<Eigen::Index>(rule_.size());
  Eigen::VectorXd g(n), a(n);
  for (Eigen::Index k = 0; k < n; ++k) g(k) = rule_.weights[k] * f_(-s + c1_ * rule_.nodes[k] + p_.sigma);
  a = -b_ * g;
  for (Eigen::Index i = 0; i < n; ++i) a(i) += f_(s + c1_ * rule_.nodes[i] + p_.sigma);
  return a;
}

double TacnodeKernel::value(double s, double sp, const Eigen::VectorXd& as, const Eigen::VectorXd& zsp) const {
  const double first = first_.integrate([&](double u) { return f_(u + p_.sigma - s) * f_(u + p_.sigma - sp); });
  double second = 0;
  for (std::size_t i = 0; i < rule_.size(); ++i) second += rule_.weights[i] * as(i) * zsp(i);
  return first + c1_ * second;
}

double TacnodeKernel::operator()(double s, double sp) const {
  return value(s, sp, a_vector(s), resolved(a_vector(sp)));
}

KernelValue tacnode_kernel(double s, double sp, const TacnodeParams& p, const PrecisionContext& ctx, bool generic) {
  const double lo = std::min(s, sp), hi = std::max(s, sp);
  TacnodeKernel coarse(p, lo, hi, ctx, 64, kTruncation, generic);
  TacnodeKernel fine(p, lo, hi, ctx, 128, kTruncation, generic);
  KernelValue out;
  out.value = fine(s, sp);
  out.discrepancy = std::abs(out.value - coarse(s, sp));
  out.tail = fine.tail();
  if (out.discrepancy > 1e-8) out.warnings.push_back("tacnode: node doubling changed the value");
  if (out.tail > abs_tol(ctx)) out.warnings.push_back("tacnode: truncation tail above tolerance");
  return out;
}

double two_airy_sum(double s, double sp, double sigma, int m, const PrecisionContext& ctx) {
  AiryFamily fam{m, 0};
  return airy_kernel(sigma - s, sigma - sp, fam, ctx).value + airy_kernel(sigma + s, sigma + sp, fam, ctx).value;
}

KernelTable kernel_table(const TacnodeParams& p, const std::vector<double>& s, const PrecisionContext& ctx,
                         unsigned threads) {
  p.validate();
  if (s.empty()) throw ConfigError("kernel_table: empty s-grid");
  for (double v : s)
    if (!std::isfinite(v)) throw ConfigError("kernel_table: s-grid must be finite");
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  TacnodeKernel fine(p, *lo, *hi, ctx, 128);
  TacnodeKernel coarse(p, *lo, *hi, ctx, 64);
  const std::size_t n = s.size();
  std::vector<Eigen::VectorXd> af(n), zf(n), ac(n), zc(n);
  parallel_for(n, threads, [&](std::size_t i) {
    af[i] = fine.a_vector(s[i]);
    zf[i] = fine.resolved(af[i]);
    ac[i] = coarse.a_vector(s[i]);
    zc[i] = coarse.resolved(ac[i]);
  });
  KernelTable out;
  out.params = p;
  out.s = s;
  out.nodes = fine.nodes();
  out.spectral_radius = fine.spectral_radius();
  out.tail = fine.tail();
  out.values.resize(n, n);
  std::vector<double> gap(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      out.values(i, j) = fine.value(s[i], s[j], af[i], zf[j]);
      gap[i] = std::max(gap[i], std::abs(out.values(i, j) - coarse.value(s[i], s[j], ac[i], zc[j])));
    }
  });
  out.discrepancy = *std::max_element(gap.begin(), gap.end());
  if (out.discrepancy > 1e-8) out.warnings.push_back("kernel_table: node doubling changed values");
  if (out.tail > abs_tol(ctx)) out.warnings.push_back("kernel_table: truncation tail above tolerance");
  return out;
}

Mat<double> airy_kernel_table(const AiryFamily& fam, const std::vector<double>& s, const PrecisionContext& ctx) {
  fam.validate();
  if (s.empty()) throw ConfigError("airy_kernel_table: empty s-grid");
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  const double a_lo = *lo + fam.sigma;
  AiryFunction f(fam.m, a_lo, *hi + fam.sigma + upper_limit(a_lo));
  const std::size_t n = s.size();
  Mat<double> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      auto v = doubled_product(f, s[i] + fam.sigma, s[j] + fam.sigma, ctx);
      if (v.discrepancy > abs_tol(ctx)) throw NumericalError(NumericalFailure::non_convergence, "airy kernel table: node doubling stalled");
      out(i, j) = out(j, i) = v.value;
    }
  return out;
}

}  // namespace ffedge
