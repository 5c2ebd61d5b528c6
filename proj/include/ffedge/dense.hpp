#pragma once

#include "ffedge/precision.hpp"

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace ffedge {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using MatR = Mat<Real>;
using VecR = Vec<Real>;

struct CheckedInverse {
  MatR inverse;
  double residual = 0;  // max-row-sum norm of A * inverse - I
};

// LU inverse with a residual check; throws precision_insufficient above tol.
CheckedInverse checked_inverse(const MatR& a, double tol, const char* what);

Real determinant(const MatR& a);

double inf_norm(const MatR& a);

// a * b with in-place mpfr accumulation (no per-operation temporaries).
MatR multiply(const MatR& a, const MatR& b);

// Solves a x = b for symmetric positive definite a by Cholesky; throws singular_operator otherwise.
MatR spd_solve(const MatR& a, const MatR& b);

}  // namespace ffedge
