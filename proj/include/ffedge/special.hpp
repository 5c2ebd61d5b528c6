#pragma once

#include "ffedge/errors.hpp"
#include "ffedge/precision.hpp"

#include <cstddef>
#include <vector>

namespace ffedge {

struct DeformedBesselParams {
  long n = 0;
  double t = 0;
  double alpha = 0;
  void validate() const;
};

// smallest power of two >= max(2048, 8 ceil(|t| + |n|))
std::size_t bessel_node_count(double t, long n_abs_max);

// J_n^{(alpha)}(t) = (1/2pi) int e^{-ikn} e^{it(sin k - alpha sin 2k)} dk
double deformed_bessel(const DeformedBesselParams& p, const PrecisionContext& ctx);

// J_n^{(alpha)}(t) for all n in [n_min, n_max] from one set of integrand samples.
// T is double or Real; Real tables use the precision in force at construction.
template <class T>
class DeformedBesselTable {
 public:
  DeformedBesselTable(const T& t, const T& alpha, long n_min, long n_max, const PrecisionContext& ctx);

  const T& operator()(long n) const;
  long n_min() const { return n_min_; }
  long n_max() const { return n_max_; }
  std::size_t nodes() const { return nodes_; }

 private:
  long n_min_, n_max_;
  std::size_t nodes_;
  std::vector<T> values_;
};

// c_n = (1/2pi) int e^{-ikn} e^{tau (cos k + alpha cos 2k)} dk, for |n| <= n_max.
// Node count doubles until the aliasing estimate falls below the working epsilon.
template <class T>
class WeightMomentTable {
 public:
  WeightMomentTable(const T& tau, const T& alpha, long n_max, const PrecisionContext& ctx);

  const T& operator()(long n) const;
  long n_max() const { return n_max_; }
  std::size_t nodes() const { return nodes_; }

 private:
  long n_max_;
  std::size_t nodes_;
  std::vector<T> values_;
};

// Smallest n >= n_from with |c_n|, |c_{n+1}| < rel * c_0 for the weight e^{tau (cos k + alpha cos 2k)};
// uses the precision in force and grows the table until found.
long weight_moment_tail(const Real& tau, const Real& alpha, const Real& rel, long n_from, const PrecisionContext& ctx);

// Moment of the weight e^{2R(cos k + alpha cos 2k)} at the precision of ctx.
Real weight_moment(long n, double R, double alpha, const PrecisionContext& ctx);

struct HigherAiryOrder {
  int m = 1;
  int order() const { return 2 * m + 1; }
  void validate() const;
};

// Ai^{(2m+1)}(s) by quadrature along the ray k = e^{i pi/(2(2m+1))} u, with node
// doubling until two resolutions agree to ctx.rel_tol (absolute).
double higher_airy(double s, HigherAiryOrder order, const PrecisionContext& ctx);

// Fixed-resolution evaluator for s in [s_min, s_max]; the node count and cutoff are
// validated at construction by doubling on probe points.
class HigherAiry {
 public:
  HigherAiry(HigherAiryOrder order, double s_min, double s_max, double tol = 1e-14);

  double operator()(double s) const;
  std::size_t nodes() const { return nodes_.size(); }
  double cutoff() const { return cutoff_; }
  HigherAiryOrder order() const { return order_; }

 private:
  HigherAiryOrder order_;
  double cutoff_ = 0;
  std::vector<double> nodes_, weights_;
  double c_, sn_;
};

struct AiryPair {
  double ai = 0;
  double aip = 0;
};

// Classical Ai and Ai' from their Maclaurin series summed at 320 bits.
AiryPair airy_maclaurin(double s);

struct AiryScalingSample {
  double rescaled = 0;        // c * J^{(alpha)}_{index}(t)
  double limit = 0;           // Ai^{(q)}(s) at the requested s
  double limit_effective = 0; // Ai^{(q)} at the s implied by the floored index
  double s_effective = 0;
  long index = 0;
  double scale = 0;           // c
};

AiryScalingSample airy_scaling_check(double t, double s, double alpha, const PrecisionContext& ctx);

}  // namespace ffedge
