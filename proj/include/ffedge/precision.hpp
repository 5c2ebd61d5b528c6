#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <cstddef>
#include <string>

namespace ffedge {

using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

struct PrecisionContext {
  unsigned bits = 256;
  double rel_tol = 1e-12;
  std::size_t max_nodes = std::size_t{1} << 18;

  void validate() const;
  // 2^-bits, the unit roundoff of the working precision.
  double epsilon() const;
};

// bits = max(256, ceil(8 R)).
unsigned lattice_bits(double R);

PrecisionContext lattice_context(double R, double rel_tol = 1e-12);

// Sets the default mpfr precision for newly created Reals; restores on exit.
// The default is process-wide, so scopes must not be used from several threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline double to_double(double x) { return x; }

// Exact binary representation, e.g. "0x1.8p+1", for bit-level regression.
std::string hex_string(const Real& x);
std::string hex_string(double x);

Real pi_real();

}  // namespace ffedge
