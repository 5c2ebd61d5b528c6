#pragma once

#include "ffedge/dense.hpp"
#include "ffedge/errors.hpp"
#include "ffedge/opuc.hpp"
#include "ffedge/precision.hpp"

#include <string>
#include <vector>

namespace ffedge {

struct ModelParams {
  double alpha = 0;
  double R = 1;
  long L = 0;

  long N() const { return 2 * L + 1; }
  double lambda() const { return N() / (2 * R); }
  void validate() const;
  // L = round(lambda R)
  static ModelParams from_lambda(double lambda, double alpha, double R);
};

enum class CorrelatorMethod { toeplitz_inverse, opuc_sum, contour, fredholm };

const char* to_string(CorrelatorMethod m);

// |x| <= L + 4R
Window default_window(const ModelParams& p);

// <c^dag_x c_x'> on window x window.
struct CorrelationMatrix {
  Window window;
  double y = 0;
  CorrelatorMethod method = CorrelatorMethod::toeplitz_inverse;
  MatR values;
  double max_imag = 0;     // contour route only
  double edge_mass = 0;    // largest |diagonal| at the two window ends
  std::vector<std::string> warnings;

  const Real& at(long x, long xp) const { return values(x - window.lo, xp - window.lo); }
};

CorrelationMatrix correlator_toeplitz(const ModelParams& p, double y, Window window, const PrecisionContext& ctx);
CorrelationMatrix correlator_opuc(const ModelParams& p, Window window, const PrecisionContext& ctx,
                                  VerblunskySource source = VerblunskySource::determinant_ratio);
CorrelationMatrix correlator_contour(const ModelParams& p, Window window, const PrecisionContext& ctx);
CorrelationMatrix correlator_fredholm(const ModelParams& p, Window window, const PrecisionContext& ctx);
CorrelationMatrix correlator(CorrelatorMethod m, const ModelParams& p, Window window, const PrecisionContext& ctx);

// Diagonal of the toeplitz route at any y, sharing T^{-1}(2R) across calls.
class ToeplitzDensity {
 public:
  ToeplitzDensity(const ModelParams& p, const PrecisionContext& ctx);
  std::vector<Real> density(double y, Window window) const;
  double inverse_residual() const { return residual_; }
  const ModelParams& params() const { return p_; }

 private:
  ModelParams p_;
  PrecisionContext ctx_;
  MatR inverse_;
  double residual_ = 0;
};

struct DensityMap {
  std::vector<long> x;
  std::vector<double> y;
  std::vector<double> rho;    // row-major in y
  std::vector<char> crazy;    // rho outside [0, 1] beyond tolerance
  std::size_t crazy_count = 0;
  double residual = 0;

  double at(std::size_t iy, std::size_t ix) const { return rho[iy * x.size() + ix]; }
};

DensityMap density_map(const ModelParams& p, const std::vector<long>& xs, const std::vector<double>& ys,
                       const PrecisionContext& ctx);

// (-1)^{x-x'} (delta_{xx'} - <c^dag_x c_x'>) from the many-Bessel formula in double precision.
Mat<double> hole_correlator(const ModelParams& p, const std::vector<long>& xs, const PrecisionContext& ctx);

// Z_N(R) = det T_N(e^{2R eps}) for N = 0..n_max by the Levinson recursion.
struct PartitionScan {
  double R = 0;
  double alpha = 0;
  std::vector<double> log_z;        // log Z_N
  std::vector<double> log_z_tilde;  // log Z_N - R^2 (1 + 2 alpha^2)
  std::vector<std::string> hex_log_z;
  double max_residual = 0;

  double z_tilde(std::size_t N) const;
  // -log(Z~_N) / (4 R^2)
  double free_energy(std::size_t N) const { return -log_z_tilde.at(N) / (4 * R * R); }
};

PartitionScan partition_scan(double R, double alpha, std::size_t n_max, const PrecisionContext& ctx);

enum class EdgeKind { exterior_airy, tacnode, higher_tacnode };

const char* to_string(EdgeKind k);

struct EdgeScaling {
  EdgeKind kind = EdgeKind::tacnode;
  double sigma = 0;           // requested
  double sigma_effective = 0; // after rounding L
  std::vector<double> s_grid;
  double exponent = 1.0 / 3;
  double r_tilde = 0;
  double center = 0;          // x_e for the exterior edge, 0 otherwise
};

struct EdgeSetup {
  ModelParams params;
  EdgeScaling scaling;
  double L_requested = 0;     // unrounded L from the scaling prescription
};

// Exterior edge: model from (alpha, lambda, R) with L = round(lambda R).
EdgeSetup exterior_edge(double alpha, double lambda, double R, std::vector<double> s_grid);
// Exterior edge at fixed L: R = N / (2 lambda).
EdgeSetup exterior_edge_at_L(double alpha, double lambda, long L, std::vector<double> s_grid);
// Tacnode kinds: L = round(R(1-2alpha) + sigma R~^{1/3}) or round(3R/4 + sigma R~^{1/5}).
EdgeSetup center_edge(EdgeKind kind, double alpha, double R, double sigma, std::vector<double> s_grid);
// Tacnode kinds at fixed L: R solves the prescription exactly, so sigma is unchanged.
EdgeSetup center_edge_at_L(EdgeKind kind, double alpha, long L, double sigma, std::vector<double> s_grid);

struct EdgeSample {
  EdgeSetup setup;
  std::vector<long> x;
  std::vector<double> s_effective;  // (x - center) / R~^e
  Mat<double> values;               // R~^e C(x_i, x_j), hole correlator for the center kinds
};

EdgeSample edge_rescaled_correlator(const EdgeSetup& setup, const PrecisionContext& ctx);

// Real-time quench from the domain [-L, L] at alpha = 0.
class QuenchTable {
 public:
  QuenchTable(double t, long L, long x_max, const PrecisionContext& ctx);
  // sum_{|j|<=L} J_{x-j}(t)^2
  double density(long x) const;
  // sum_{j>0} (J_{j+L+x} J_{j+L+x'} + (-1)^{x-x'} J_{j+L-x} J_{j+L-x'})
  double hole(long x, long xp) const;
  double tail() const { return tail_; }
  double t() const { return t_; }

 private:
  double J(long n) const;
  double t_;
  long L_, n_lo_, n_hi_;
  double tail_ = 0;
  std::vector<double> values_;
};

double quench_correlator(long x, long xp, double t, long L, const PrecisionContext& ctx);
double quench_density(long x, double t, long L, const PrecisionContext& ctx);

}  // namespace ffedge
