#include "ffedge/fredholm.hpp"

#include "ffedge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ffedge {

Eigen::MatrixXd KernelGrid::symmetrized() const {
  const auto n = static_cast<Eigen::Index>(rule.size());
  Eigen::VectorXd s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::sqrt(rule.weights[i]);
  return s.asDiagonal() * values * s.asDiagonal();
}

KernelGrid make_kernel_grid(const KernelFn& kernel, const QuadratureRule& rule) {
  KernelGrid g{rule, Eigen::MatrixXd(rule.size(), rule.size())};
  for (std::size_t i = 0; i < rule.size(); ++i)
    for (std::size_t j = 0; j < rule.size(); ++j) g.values(i, j) = kernel(rule.nodes[i], rule.nodes[j]);
  return g;
}

double fredholm_det(const KernelGrid& grid) {
  if (grid.rule.size() == 0) return 1.0;
  Eigen::MatrixXd a = -grid.symmetrized();
  a.diagonal().array() += 1.0;
  return a.partialPivLu().determinant();
}

double log_det_trace_series(const KernelGrid& grid, std::size_t max_terms, double eps) {
  if (grid.rule.size() == 0) return 0.0;
  const Eigen::MatrixXd a = grid.symmetrized();
  Eigen::MatrixXd power = a;
  double sum = 0;
  for (std::size_t p = 1; p <= max_terms; ++p) {
    double term = power.trace() / static_cast<double>(p);
    sum -= term;
    if (std::abs(term) < eps) return sum;
    power = power * a;
  }
  throw NumericalError(NumericalFailure::non_convergence, "trace series did not converge");
}

FredholmResult fredholm_det(const KernelFn& kernel, Interval domain, std::size_t n,
                            const PrecisionContext& ctx, double truncation) {
  if (n < 1) throw ConfigError("fredholm_det: need at least one node");
  FredholmResult out;
  double b = domain.b;
  if (domain.semi_infinite()) {
    double m = truncation;
    for (int k = 0; k < 4 && std::abs(kernel(domain.a + m, domain.a + m)) > ctx.rel_tol; ++k) m *= 2;
    b = domain.a + m;
    if (std::abs(kernel(b, b)) > ctx.rel_tol)
      out.warnings.push_back("domain truncation: kernel tail exceeds rel_tol at " + std::to_string(b));
  }
  out.upper = b;
  const std::size_t cap = std::min<std::size_t>(ctx.max_nodes, 4096);
  double prev = fredholm_det(make_kernel_grid(kernel, gauss_legendre(n, domain.a, b)));
  for (std::size_t m = 2 * n; m <= cap; m *= 2) {
    double next = fredholm_det(make_kernel_grid(kernel, gauss_legendre(m, domain.a, b)));
    out.discrepancy = std::abs(next - prev);
    if (out.discrepancy <= ctx.rel_tol * std::max(std::abs(next), 1e-300)) {
      out.value = next;
      out.nodes = m;
      return out;
    }
    prev = next;
  }
  throw NumericalError(NumericalFailure::non_convergence, "Fredholm determinant node doubling stalled");
}

FredholmResolvent::FredholmResolvent(KernelGrid grid, const PrecisionContext& ctx)
    : grid_(std::move(grid)), rel_tol_(ctx.rel_tol) {
  const auto n = static_cast<Eigen::Index>(grid_.rule.size());
  sqrt_w_.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) sqrt_w_(i) = std::sqrt(grid_.rule.weights[i]);
  sym_ = grid_.symmetrized();
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym_ + sym_.transpose()),
                                                      Eigen::EigenvaluesOnly);
    spectral_radius_ = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (!(spectral_radius_ < 1.0))
    throw NumericalError(NumericalFailure::singular_operator,
                         "discretised operator has spectral radius >= 1");
  Eigen::MatrixXd a = -sym_;
  a.diagonal().array() += 1.0;
  lu_.compute(a);
}

Eigen::VectorXd FredholmResolvent::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != sqrt_w_.size()) throw ConfigError("fredholm_resolve: rhs size mismatch");
  if (rhs.size() == 0) return rhs;
  Eigen::VectorXd y = lu_.solve(sqrt_w_.cwiseProduct(rhs));
  Eigen::VectorXd x = y.cwiseQuotient(sqrt_w_);
  Eigen::VectorXd r = x - grid_.values * sqrt_w_.cwiseProduct(y) - rhs;
  if (!(r.norm() <= rel_tol_ * std::max(rhs.norm(), 1e-300)))
    throw NumericalError(NumericalFailure::singular_operator, "resolvent residual check failed");
  return x;
}

Eigen::VectorXd fredholm_resolve(const KernelGrid& grid, const Eigen::VectorXd& rhs,
                                 const PrecisionContext& ctx) {
  return FredholmResolvent(grid, ctx).solve(rhs);
}

}  // namespace ffedge
