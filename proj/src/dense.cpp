#include "ffedge/dense.hpp"

#include "ffedge/errors.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace ffedge {

double inf_norm(const MatR& a) {
  Real best = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Real row = 0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) row += abs(a(i, j));
    if (row > best) best = row;
  }
  return to_double(best);
}

CheckedInverse checked_inverse(const MatR& a, double tol, const char* what) {
  Eigen::PartialPivLU<MatR> lu(a);
  CheckedInverse out;
  out.inverse = lu.inverse();
  MatR r = a * out.inverse;
  for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, i) -= 1;
  out.residual = inf_norm(r);
  if (!(out.residual < tol))
    throw NumericalError(NumericalFailure::precision_insufficient,
                         std::string(what) + ": inverse residual " + sci(out.residual) +
                             " exceeds tolerance");
  return out;
}

MatR multiply(const MatR& a, const MatR& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  MatR c(a.rows(), b.cols());
  Real acc, tmp;
  for (Eigen::Index j = 0; j < b.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      mpfr_set_ui(acc.backend().data(), 0, MPFR_RNDN);
      for (Eigen::Index k = 0; k < a.cols(); ++k) {
        mpfr_mul(tmp.backend().data(), a(i, k).backend().data(), b(k, j).backend().data(), MPFR_RNDN);
        mpfr_add(acc.backend().data(), acc.backend().data(), tmp.backend().data(), MPFR_RNDN);
      }
      c(i, j) = acc;
    }
  return c;
}

MatR spd_solve(const MatR& a, const MatR& b) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::invalid_argument("spd_solve: shape mismatch");
  // lower factor stored row-wise for contiguous inner products
  std::vector<std::vector<Real>> l(n);
  Real acc, tmp;
  for (Eigen::Index i = 0; i < n; ++i) {
    l[i].resize(i + 1);
    for (Eigen::Index j = 0; j <= i; ++j) {
      mpfr_set(acc.backend().data(), a(i, j).backend().data(), MPFR_RNDN);
      for (Eigen::Index k = 0; k < j; ++k) {
        mpfr_mul(tmp.backend().data(), l[i][k].backend().data(), l[j][k].backend().data(), MPFR_RNDN);
        mpfr_sub(acc.backend().data(), acc.backend().data(), tmp.backend().data(), MPFR_RNDN);
      }
      if (i == j) {
        if (!(acc > 0)) throw NumericalError(NumericalFailure::singular_operator, "spd_solve: matrix not positive definite");
        l[i][i] = sqrt(acc);
      } else {
        l[i][j] = acc / l[j][j];
      }
    }
  }
  MatR x = b;
  for (Eigen::Index c = 0; c < b.cols(); ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      mpfr_set(acc.backend().data(), x(i, c).backend().data(), MPFR_RNDN);
      for (Eigen::Index k = 0; k < i; ++k) {
        mpfr_mul(tmp.backend().data(), l[i][k].backend().data(), x(k, c).backend().data(), MPFR_RNDN);
        mpfr_sub(acc.backend().data(), acc.backend().data(), tmp.backend().data(), MPFR_RNDN);
      }
      x(i, c) = acc / l[i][i];
    }
    for (Eigen::Index i = n; i-- > 0;) {
      mpfr_set(acc.backend().data(), x(i, c).backend().data(), MPFR_RNDN);
      for (Eigen::Index k = i + 1; k < n; ++k) {
        mpfr_mul(tmp.backend().data(), l[k][i].backend().data(), x(k, c).backend().data(), MPFR_RNDN);
        mpfr_sub(acc.backend().data(), acc.backend().data(), tmp.backend().data(), MPFR_RNDN);
      }
      x(i, c) = acc / l[i][i];
    }
  }
  return x;
}

Real determinant(const MatR& a) {
  if (a.rows() == 0) return Real(1);
  return Eigen::PartialPivLU<MatR>(a).determinant();
}

}  // namespace ffedge
