#pragma once

#include "ffedge/precision.hpp"
#include "ffedge/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace ffedge {

struct KernelGrid {
  QuadratureRule rule;
  Eigen::MatrixXd values;  // K(x_i, x_j)

  // W^{1/2} K W^{1/2}
  Eigen::MatrixXd symmetrized() const;
};

using KernelFn = std::function<double(double, double)>;

KernelGrid make_kernel_grid(const KernelFn& kernel, const QuadratureRule& rule);

// det(I - W^{1/2} K W^{1/2}) on a fixed grid.
double fredholm_det(const KernelGrid& grid);

// -sum_{p>=1} Tr(A^p)/p with A = W^{1/2} K W^{1/2}, summed until terms fall below eps.
double log_det_trace_series(const KernelGrid& grid, std::size_t max_terms = 400, double eps = 1e-17);

struct FredholmResult {
  double value = 0;
  std::size_t nodes = 0;
  double upper = 0;        // truncation point actually used
  double discrepancy = 0;  // |det(n) - det(n/2)|
  std::vector<std::string> warnings;
};

// Fredholm determinant on [a,b] (b may be +inf, then truncated at a + truncation,
// with the truncation doubled while the diagonal tail K(b,b) exceeds rel_tol).
// Nodes start at n and double until two resolutions agree to rel_tol.
FredholmResult fredholm_det(const KernelFn& kernel, Interval domain, std::size_t n,
                            const PrecisionContext& ctx, double truncation = 16);

// Factorised I - K on a grid; solves (I - K) x = rhs for grid-sampled rhs.
class FredholmResolvent {
 public:
  FredholmResolvent(KernelGrid grid, const PrecisionContext& ctx);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  const KernelGrid& grid() const { return grid_; }
  double spectral_radius() const { return spectral_radius_; }

 private:
  KernelGrid grid_;
  Eigen::VectorXd sqrt_w_;
  Eigen::MatrixXd sym_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double spectral_radius_ = 0;
  double rel_tol_ = 0;
};

Eigen::VectorXd fredholm_resolve(const KernelGrid& grid, const Eigen::VectorXd& rhs,
                                 const PrecisionContext& ctx);

}  // namespace ffedge
