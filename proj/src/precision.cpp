#include "ffedge/precision.hpp"

#include "ffedge/errors.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdio>

namespace ffedge {

const char* to_string(NumericalFailure kind) {
  switch (kind) {
    case NumericalFailure::budget_exceeded: return "budget-exceeded";
    case NumericalFailure::non_convergence: return "non-convergence";
    case NumericalFailure::singular_operator: return "singular-operator";
    case NumericalFailure::precision_insufficient: return "precision-insufficient";
    case NumericalFailure::residual_blowup: return "residual-blowup";
    case NumericalFailure::window_too_small: return "window-too-small";
    case NumericalFailure::out_of_support: return "out-of-support";
    case NumericalFailure::degenerate_curvature: return "degenerate-curvature";
  }
  return "numerical-failure";
}

void PrecisionContext::validate() const {
  if (bits < 64) throw ConfigError("precision bits must be >= 64");
  if (!(rel_tol > 0)) throw ConfigError("rel_tol must be positive");
  if (max_nodes < 8) throw ConfigError("max_nodes must be >= 8");
}

double PrecisionContext::epsilon() const { return std::ldexp(1.0, -static_cast<int>(bits)); }

unsigned lattice_bits(double R) {
  return std::max(256u, static_cast<unsigned>(std::ceil(8.0 * R)));
}

PrecisionContext lattice_context(double R, double rel_tol) {
  PrecisionContext ctx;
  ctx.bits = lattice_bits(R);
  ctx.rel_tol = rel_tol;
  return ctx;
}

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()) {
  Real::default_precision(static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1);
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

std::string hex_string(const Real& x) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%Ra", x.backend().data());
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string hex_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

Real pi_real() { Real p;
  mpfr_const_pi(p.backend().data(), MPFR_RNDN);
  return p; }

}  // namespace ffedge
