#pragma once

#include "ffedge/complex.hpp"
#include "ffedge/dense.hpp"
#include "ffedge/errors.hpp"
#include "ffedge/precision.hpp"

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

namespace ffedge {

struct WeightSpec {
  double R = 1;
  double alpha = 0;
  void validate() const;
};

enum class VerblunskySource { determinant_ratio, recursion };

const char* to_string(VerblunskySource s);

// u_0..u_nmax with u_0 = 1 and u_{n+1} = (-1)^n alpha_n (alpha_n the signed
// Verblunsky coefficients). Values are stored signed; |u_n| < 1 for n >= 1.
struct VerblunskySequence {
  WeightSpec weight;
  VerblunskySource source = VerblunskySource::determinant_ratio;
  unsigned bits = 0;
  std::vector<Real> u;
  std::vector<Real> dets;         // D_0..D_nmax of the Toeplitz matrix of the weight
  std::vector<double> residuals;  // dPII residual at index N (0 where not interior)
  double max_residual = 0;
  double rho_check = 0;           // max |1 - u_{n+1}^2 - D_{n+2} D_n / D_{n+1}^2|

  std::size_t nmax() const { return u.empty() ? 0 : u.size() - 1; }
  // signed alpha_n, with alpha_{-1} = -1 and alpha_n = 0 for n < -1
  Real alpha_coef(long n) const;
};

// Moment matrix T_n with entries c_{j-l} of e^{2R(cos k + alpha cos 2k)}.
MatR toeplitz_matrix(std::size_t n, const WeightSpec& w, const PrecisionContext& ctx);

Real toeplitz_det(std::size_t n, const WeightSpec& w, const PrecisionContext& ctx);

VerblunskySequence verblunsky(std::size_t nmax, const WeightSpec& w, const PrecisionContext& ctx,
                              VerblunskySource source = VerblunskySource::determinant_ratio);

// Residual of the dPII recursion at N (needs 2 <= N <= nmax - 2).
Real dpii_residual(const VerblunskySequence& seq, std::size_t N);

// Coefficients p[l][j] of P_l(z) = sum_j p[l][j] z^j for l = 0..lmax.
std::vector<std::vector<Real>> poly_coefficients(std::size_t lmax, const VerblunskySequence& seq);

using CplxR = Cplx<Real>;

// (P_n(z), P_n^*(z)) by the Szego recursion.
std::pair<CplxR, CplxR> ortho_poly(std::size_t n, const CplxR& z, const VerblunskySequence& seq);

// P_n(z) by the three-term recurrence that avoids reverse polynomials.
CplxR ortho_poly_three_term(std::size_t n, const CplxR& z, const VerblunskySequence& seq);

// sum_{l<=n} P_l(z) P_l(w) and its Christoffel-Darboux closed form.
CplxR cd_kernel_sum(std::size_t n, const CplxR& z, const CplxR& w, const VerblunskySequence& seq);
CplxR cd_kernel_closed(std::size_t n, const CplxR& z, const CplxR& w, const VerblunskySequence& seq);

// (T_n)^{-1}_{jl} = sum_{m<n} p_{m,j} p_{m,l}
MatR toeplitz_inverse_cd(std::size_t n, const VerblunskySequence& seq);

struct Window {
  long lo = 0;
  long hi = 0;
  std::size_t size() const { return hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0; }
  bool contains(long x) const { return x >= lo && x <= hi; }
};

struct WaveFunctionTable {
  std::size_t l = 0;
  Window window;
  std::vector<Real> values;
  // phi_l(x); zero outside the window
  Real at(long x) const;
};

struct WaveFunctions {
  std::vector<WaveFunctionTable> tables;  // l = 0..lmax on the requested window
  double recursion_discrepancy = -1;      // max |direct - recursion|; -1 when not cross-checked
  double three_point_residual = -1;       // alpha = 0 only; -1 otherwise
  double boundary_mass = 0;               // largest |phi| at the edge of the computational domain
};

// phi_l(x) = int dk/2pi e^{ik(L+x)} P_l(e^{-ik}) e^{R eps(k)}, built by the phi recursion on a
// domain wide enough that the moments of e^{R eps} vanish beyond it; with cross_check the
// direct coefficient sum is evaluated as well and compared.
WaveFunctions wavefunctions(std::size_t lmax, long L, Window window, const VerblunskySequence& seq,
                            const PrecisionContext& ctx, bool cross_check = true);

struct GcboResult {
  double rel_error = 0;  // |D_n / (e^{R^2 (1 + 2 alpha^2)} det(1 - K)) - 1|
  double tail = 0;       // largest Bessel entry dropped by the truncation
  bool truncation_ok = true;
};

// K truncated to truncation x truncation, each entry summed over truncation terms.
GcboResult gcbo_check(std::size_t n, const WeightSpec& w, std::size_t truncation, const PrecisionContext& ctx);

struct LaxResidual {
  double derivative = 0;  // |P_n' - (a_n P_n - b_n P_n^*)|
  double gamma = 0;       // |gamma_n(closed form) - <zeta^2 P_n^* | P_n>|
};

LaxResidual lax_residual(std::size_t n, std::complex<double> z, const WeightSpec& w, const PrecisionContext& ctx);

struct RatioSample {
  std::complex<double> finite;  // P_{n+1}(z) / P_n(z)
  std::complex<double> limit;   // r(z) at u = u(n / 2R, alpha)
};

std::complex<double> ratio_limit(std::complex<double> z, double u);

RatioSample ratio_check(std::size_t n, std::complex<double> z, const WeightSpec& w, const PrecisionContext& ctx,
                        VerblunskySource source = VerblunskySource::determinant_ratio);

}  // namespace ffedge
