#pragma once

#include "ffedge/dense.hpp"
#include "ffedge/fredholm.hpp"
#include "ffedge/precision.hpp"
#include "ffedge/special.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ffedge {

struct AiryFamily {
  int m = 1;
  double sigma = 0;
  void validate() const;
};

struct TacnodeParams {
  int m = 1;          // 1: tacnode, 2: higher tacnode
  double sigma = 0;
  void validate() const;
};

// Ai^{(2m+1)} on [s_min, s_max]. m = 1 uses the classical Airy function unless
// generic is set, in which case the ray quadrature of the higher family is used.
class AiryFunction {
 public:
  AiryFunction(int m, double s_min, double s_max, bool generic = false);
  double operator()(double s) const;
  int m() const { return m_; }

 private:
  int m_;
  std::optional<HigherAiry> higher_;
};

// Ai and Ai' in double precision.
double airy_ai(double s);
double airy_ai_prime(double s);

struct KernelValue {
  double value = 0;
  double discrepancy = 0;  // node doubling
  double tail = 0;         // integrand size at the truncation point
  double cd_gap = 0;       // |quadrature - CD form|, m = 1 only
  std::vector<std::string> warnings;
};

// int_sigma^inf Ai^{(2m+1)}(s+u) Ai^{(2m+1)}(s'+u) du
KernelValue airy_kernel(double s, double sp, const AiryFamily& fam, const PrecisionContext& ctx);
// (Ai(a)Ai'(b) - Ai'(a)Ai(b)) / (a - b) with a = s + sigma, b = s' + sigma, Maclaurin Ai and Ai'
double airy_kernel_cd(double s, double sp, double sigma);

// det(1 - K^{(2m+1)}_{Ai,sigma}) on [0, inf)
FredholmResult tw_distribution(double sigma, int m, const PrecisionContext& ctx);

// Ai(s + 2^{1/q} u + sigma) - int_0^inf Ai(u + v + 2^{2m/q} sigma) Ai(-s + 2^{1/q} v + sigma) dv, q = 2m+1
KernelValue a_function(double s, double u, const TacnodeParams& p, const PrecisionContext& ctx);

// Tacnode kernel on a fixed Gauss-Legendre grid of [0, truncation], with (1 - K_{Ai, 2^{2m/q} sigma})
// factorised once.
class TacnodeKernel {
 public:
  TacnodeKernel(const TacnodeParams& p, double s_min, double s_max, const PrecisionContext& ctx,
                std::size_t nodes = 96, double truncation = 16, bool generic = false);

  double operator()(double s, double sp) const;
  // A_s at the grid nodes
  Eigen::VectorXd a_vector(double s) const;
  // (1 - K)^{-1} A_s at the grid nodes
  Eigen::VectorXd resolved(const Eigen::VectorXd& a) const { return resolvent_->solve(a); }
  double value(double s, double sp, const Eigen::VectorXd& as, const Eigen::VectorXd& zsp) const;

  std::size_t nodes() const { return rule_.size(); }
  double spectral_radius() const { return resolvent_->spectral_radius(); }
  double tail() const { return tail_; }
  const TacnodeParams& params() const { return p_; }

 private:
  TacnodeParams p_;
  double c1_, c2_;
  QuadratureRule rule_, first_;
  AiryFunction f_;
  Eigen::MatrixXd b_;  // Ai(u_i + u_k + c2 sigma)
  std::optional<FredholmResolvent> resolvent_;
  double tail_ = 0;
};

KernelValue tacnode_kernel(double s, double sp, const TacnodeParams& p, const PrecisionContext& ctx,
                           bool generic = false);

// K^{(q)}_Ai(sigma - s, sigma - s') + K^{(q)}_Ai(sigma + s, sigma + s')
double two_airy_sum(double s, double sp, double sigma, int m, const PrecisionContext& ctx);

struct KernelTable {
  TacnodeParams params;
  std::vector<double> s;
  Mat<double> values;
  std::size_t nodes = 0;
  double discrepancy = 0;
  double spectral_radius = 0;
  double tail = 0;
  std::vector<std::string> warnings;
};

// Tacnode table with shared resolvent; entries validated against a grid with half the nodes.
KernelTable kernel_table(const TacnodeParams& p, const std::vector<double>& s, const PrecisionContext& ctx,
                         unsigned threads = 1);

// Shifted (higher) Airy kernel table.
Mat<double> airy_kernel_table(const AiryFamily& fam, const std::vector<double>& s, const PrecisionContext& ctx);

}  // namespace ffedge
