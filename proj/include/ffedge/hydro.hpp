#pragma once

#include "ffedge/precision.hpp"

#include <vector>

namespace ffedge {

// u(lambda, alpha): 0 for lambda >= lambda_c = 1 - 2 alpha, else the closed-form root.
double u_of_lambda(double lambda, double alpha);

class HydroParams {
 public:
  HydroParams(double lambda, double alpha);

  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }
  double lambda_c() const { return 1 - 2 * alpha_; }
  double u() const { return u_; }
  double k_c() const { return k_c_; }
  bool above_critical() const { return lambda_ >= lambda_c(); }
  // upper end of the k-range on which upsilon is defined
  double k_max() const;

 private:
  double lambda_, alpha_, u_, k_c_;
};

double upsilon(double k, const HydroParams& h);

// k_F in the valid k-range with upsilon(k_F) = X, by bisection.
double upsilon_inverse(double X, const HydroParams& h, double rel_tol = 1e-15);

enum class Region { frozen_empty, fluctuating, frozen_full };

struct DensityProfile {
  std::vector<double> X;
  std::vector<double> rho;
  std::vector<Region> region;
};

Region classify(double X, const HydroParams& h);
double density(double X, const HydroParams& h);
DensityProfile density_profile(const std::vector<double>& X, const HydroParams& h);

// f(lambda, alpha) = int_lambda^{lambda_c} (s - lambda) (-log(1 - u(s)^2)) ds
double free_energy(double lambda, double alpha, const PrecisionContext& ctx);

struct EdgeCurvature {
  double upsilon0 = 0;
  double upsilon2 = 0;  // second derivative at k = 0
};

EdgeCurvature edge_curvature(const HydroParams& h);

}  // namespace ffedge
